#include "srgtest/conformance.hpp"

#include <algorithm>
#include <cmath>

#include "srgtest/stats.hpp"

namespace srgtest {

SimulatorAdapter::SimulatorAdapter(const Mlsts& m, std::uint64_t seed, int max_steps)
    : sim_(m, seed), steps_left_(max_steps) {}

std::optional<TimedStep> SimulatorAdapter::next() {
  if (steps_left_ <= 0) return std::nullopt;
  --steps_left_;
  return sim_.step();
}

bool SimulatorAdapter::deadlocked() const { return sim_.deadlocked(); }

std::optional<TimedStep> TraceAdapter::next() {
  if (pos_ >= trace_.size()) return std::nullopt;
  return trace_[pos_++];
}

std::string cmp_outcome_to_string(CmpOutcome o) {
  switch (o) {
    case CmpOutcome::Holds: return "holds";
    case CmpOutcome::Violated: return "violated";
    case CmpOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kTimeTolRel = 1e-6;

bool clock_satisfied(const std::map<Clock, double>& expiry, const Clock& c, double at) {
  auto it = expiry.find(c);
  if (it == expiry.end()) return false;  // causing action never observed
  const double tol = kTimeTolRel * std::max(1.0, std::fabs(it->second));
  return at >= it->second - tol;
}

// One possible tester configuration; several coexist when edges share a label
// with disjoint cause sets.
struct Config {
  std::string loc;
  std::map<Clock, double> expiry;
};

}  // namespace

RunOutcome execute_test(const Tester& tester, ImplAdapter& impl) {
  RunOutcome out;
  std::vector<Config> configs{{tester.initial, {}}};

  while (auto ev = impl.next()) {
    out.trace.push_back(*ev);
    if (tester.alphabet.count(ev->label) == 0) {
      throw AdapterProtocolError("implementation produced unknown action " + ev->label);
    }
    std::vector<Config> survivors;
    bool saw_normal_edge = false;
    std::set<Clock> pending;
    for (const auto& cfg : configs) {
      for (const auto* e : tester.outgoing(cfg.loc)) {
        if (e->label != ev->label || e->guard != GuardKind::Normal) continue;
        saw_normal_edge = true;
        bool ok = true;
        for (const auto& c : e->causes) {
          if (!clock_satisfied(cfg.expiry, c, ev->start)) {
            ok = false;
            pending.insert(c);
          }
        }
        if (!ok) continue;
        Config next = cfg;
        next.loc = e->target;
        next.expiry[e->fresh] = ev->start + ev->duration;
        survivors.push_back(std::move(next));
      }
    }
    if (survivors.empty()) {
      out.verdict = Verdict::Fail;
      if (saw_normal_edge) {
        out.fail = FailReason{FailKind::PrematureOffer, ev->label, pending};
      } else {
        out.fail = FailReason{FailKind::ForbiddenAction, ev->label, {}};
      }
      return out;
    }
    configs = std::move(survivors);
  }

  if (!impl.deadlocked()) {
    out.verdict = Verdict::Pass;  // stopped by cap or exhausted recording
    return out;
  }

  // The implementation refuses everything from here on. The deadlock is fine
  // if some configuration offers nothing; inconclusive if some configuration
  // explains every offered action by a permanent refusal; a failure otherwise.
  for (const auto& cfg : configs) {
    bool offers_anything = false;
    for (const auto* e : tester.outgoing(cfg.loc)) {
      if (e->guard == GuardKind::Normal) offers_anything = true;
    }
    if (!offers_anything) {
      out.verdict = Verdict::Pass;
      return out;
    }
  }
  for (const auto& cfg : configs) {
    const auto& incon = tester.localities.at(cfg.loc).incon_actions;
    bool all_incon = true;
    for (const auto* e : tester.outgoing(cfg.loc)) {
      if (e->guard == GuardKind::Normal && incon.count(e->label) == 0) all_incon = false;
    }
    if (all_incon) {
      out.verdict = Verdict::Incon;
      return out;
    }
  }
  const auto& cfg = configs.front();
  const auto& incon = tester.localities.at(cfg.loc).incon_actions;
  Label refused;
  for (const auto* e : tester.outgoing(cfg.loc)) {
    if (e->guard == GuardKind::Normal && incon.count(e->label) == 0) {
      refused = e->label;
      break;
    }
  }
  out.verdict = Verdict::Fail;
  out.fail = FailReason{FailKind::UnexpectedRefusal, refused, {}};
  return out;
}

CmpOutcome compare_distributions(const std::vector<double>& samples, const Distribution& spec,
                                 const LeqComparator& cmp) {
  if (cmp.kind == LeqComparator::Kind::AnalyticExact) {
    throw std::invalid_argument(
        "AnalyticExact compares declared distributions, not samples");
  }
  if (samples.size() < cmp.min_samples) return CmpOutcome::Inconclusive;

  if (cmp.kind == LeqComparator::Kind::SameMean) {
    const double p = stats::one_sample_t_p_value(samples, dist_mean(spec));
    return p >= cmp.alpha ? CmpOutcome::Holds : CmpOutcome::Violated;
  }

  // Kolmogorov-Smirnov against the spec CDF. A Dirac spec is degenerate for
  // KS; it holds exactly when every sample hits the point mass.
  if (const auto* dirac = std::get_if<Dirac>(&spec)) {
    for (double x : samples) {
      if (std::fabs(x - dirac->value) > 1e-9 * std::max(1.0, dirac->value)) {
        return CmpOutcome::Violated;
      }
    }
    return CmpOutcome::Holds;
  }
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = dist_cdf(spec, sorted[i]);
    const double di = static_cast<double>(i);
    d = std::max(d, std::max((di + 1.0) / n - f, f - di / n));
  }
  const double p = stats::ks_p_value(d, sorted.size());
  return p >= cmp.alpha ? CmpOutcome::Holds : CmpOutcome::Violated;
}

CmpOutcome compare_distributions(const Distribution& impl, const Distribution& spec,
                                 const LeqComparator& cmp) {
  switch (cmp.kind) {
    case LeqComparator::Kind::AnalyticExact:
      return dist_equal(impl, spec) ? CmpOutcome::Holds : CmpOutcome::Violated;
    case LeqComparator::Kind::SameMean:
      return std::fabs(dist_mean(impl) - dist_mean(spec)) < 1e-12
                 ? CmpOutcome::Holds
                 : CmpOutcome::Violated;
    case LeqComparator::Kind::KsEquivalent:
      return dist_equal(impl, spec) ? CmpOutcome::Holds : CmpOutcome::Violated;
  }
  return CmpOutcome::Inconclusive;
}

namespace {

using KindAction = std::pair<RefusalKind, Label>;

std::set<KindAction> project(const RefusalSet& a) {
  std::set<KindAction> out;
  for (const auto& r : a) out.insert({r.kind, r.action});
  return out;
}

bool projection_below(const std::set<KindAction>& a, const std::set<KindAction>& b) {
  for (const auto& [kind, action] : a) {
    if (kind == RefusalKind::Permanent) {
      if (!b.count({RefusalKind::Permanent, action})) return false;
    } else {
      if (!b.count({RefusalKind::Temporary, action}) &&
          !b.count({RefusalKind::Permanent, action})) {
        return false;
      }
    }
  }
  return true;
}

bool refusals_included(const std::set<RefusalSet>& impl, const std::set<RefusalSet>& spec) {
  for (const auto& a : impl) {
    const auto pa = project(a);
    bool covered = false;
    for (const auto& b : spec) {
      if (projection_below(pa, project(b))) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

std::string comparator_name(const LeqComparator& c) {
  switch (c.kind) {
    case LeqComparator::Kind::SameMean: return "same-mean";
    case LeqComparator::Kind::KsEquivalent: return "ks";
    case LeqComparator::Kind::AnalyticExact: return "exact";
  }
  return "?";
}

}  // namespace

ConformanceReport check_conformance(const Mlsts& spec, const Mlsts& impl,
                                    const ConformanceOptions& opts) {
  ConformanceReport rep;
  rep.depth = opts.depth;
  rep.runs = opts.runs;
  rep.comparator = comparator_name(opts.comparator);

  const auto srg_spec = extend_srg(minimize_srg(build_srg(spec, opts.determinize)));
  const auto srg_impl = extend_srg(minimize_srg(build_srg(impl, opts.determinize)));
  const auto spec_traces = traces(spec, opts.depth);
  const auto impl_traces = traces(impl, opts.depth);

  bool structural_ok = true;
  for (const auto& sigma : spec_traces) {
    TraceCheck tc;
    tc.trace = sigma;
    tc.in_impl = impl_traces.count(sigma) != 0;
    if (tc.in_impl) {
      const auto dec_spec = refusals_after(srg_spec, sigma);
      const auto dec_impl = refusals_after(srg_impl, sigma);
      // The impl side keeps only what it forbids in every reached locality;
      // the spec side admits anything it may forbid in some reached locality.
      tc.forb_ok = std::includes(dec_spec.forb_may.begin(), dec_spec.forb_may.end(),
                                 dec_impl.forb.begin(), dec_impl.forb.end());
      tc.ref_ok = refusals_included(dec_impl.ref_srg, dec_spec.ref_srg);
    }
    if (!tc.forb_ok || !tc.ref_ok.value_or(true)) structural_ok = false;
    rep.trace_checks.push_back(std::move(tc));
  }

  // Seeded tester executions; for the statistical comparators they also
  // provide the duration samples.
  const Tester tester = build_tester(srg_spec);
  std::map<Label, std::vector<double>> samples;
  for (int i = 0; i < opts.runs; ++i) {
    SimulatorAdapter adapter(impl, opts.seed + static_cast<std::uint64_t>(i), opts.max_steps);
    const RunOutcome run = execute_test(tester, adapter);
    switch (run.verdict) {
      case Verdict::Pass: ++rep.pass_runs; break;
      case Verdict::Incon: ++rep.incon_runs; break;
      case Verdict::Fail: ++rep.fail_runs; break;
    }
    for (const auto& step : run.trace) samples[step.label].push_back(step.duration);
  }

  bool durations_ok = true;
  for (const auto& [label, dist] : spec.alphabet) {
    DurationCheck dc;
    dc.action = label;
    if (opts.comparator.kind == LeqComparator::Kind::AnalyticExact) {
      auto it = impl.alphabet.find(label);
      dc.outcome = it == impl.alphabet.end()
                       ? CmpOutcome::Inconclusive
                       : compare_distributions(it->second, dist, opts.comparator);
    } else {
      const auto& xs = samples[label];
      dc.samples = xs.size();
      dc.outcome = compare_distributions(xs, dist, opts.comparator);
    }
    if (dc.outcome == CmpOutcome::Violated) durations_ok = false;
    rep.duration_checks.push_back(std::move(dc));
  }

  // Forb inclusion cannot catch an implementation that offers an action the
  // spec forbids (its own Forb only shrinks); those surface as Fail runs.
  rep.conforms = structural_ok && durations_ok && rep.fail_runs == 0;
  return rep;
}

ConformanceReport check_conformance(const Mlsts& spec, const std::vector<TimedTrace>& corpus,
                                    const ConformanceOptions& opts) {
  ConformanceReport rep;
  rep.depth = opts.depth;
  rep.runs = static_cast<int>(corpus.size());
  rep.comparator = comparator_name(opts.comparator);

  const auto srg_spec = extend_srg(minimize_srg(build_srg(spec, opts.determinize)));

  std::map<Label, std::vector<double>> samples;
  bool structural_ok = true;
  for (const auto& trace : corpus) {
    TraceCheck tc;
    tc.in_impl = true;
    tc.ref_ok = std::nullopt;  // not observable from recordings
    std::vector<Label> prefix;
    for (const auto& step : trace) {
      samples[step.label].push_back(step.duration);
      const auto dec = refusals_after(srg_spec, prefix);
      if (srg_spec.alphabet.count(step.label) == 0 || dec.forb.count(step.label)) {
        tc.forb_ok = false;
        prefix.push_back(step.label);
        break;
      }
      prefix.push_back(step.label);
    }
    tc.trace = std::move(prefix);
    if (!tc.forb_ok) structural_ok = false;
    rep.trace_checks.push_back(std::move(tc));
  }

  bool durations_ok = true;
  if (opts.comparator.kind != LeqComparator::Kind::AnalyticExact) {
    for (const auto& [label, dist] : spec.alphabet) {
      DurationCheck dc;
      dc.action = label;
      const auto& xs = samples[label];
      dc.samples = xs.size();
      dc.outcome = compare_distributions(xs, dist, opts.comparator);
      if (dc.outcome == CmpOutcome::Violated) durations_ok = false;
      rep.duration_checks.push_back(std::move(dc));
    }
  }

  rep.conforms = structural_ok && durations_ok;
  return rep;
}

}  // namespace srgtest
