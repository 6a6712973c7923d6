#include "srgtest/tester.hpp"

#include <algorithm>
#include <random>

namespace srgtest {

std::string verdict_to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Incon: return "incon";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

std::vector<const TesterEdge*> Tester::outgoing(const std::string& locality) const {
  std::vector<const TesterEdge*> out;
  for (const auto& e : edges) {
    if (e.source == locality) out.push_back(&e);
  }
  return out;
}

Tester build_tester(const StochasticRefusalGraph& srg) {
  if (!srg.extended) {
    throw std::invalid_argument("build_tester: SRG must be extended first");
  }
  Tester t;
  t.name = srg.name;
  t.alphabet = srg.alphabet;
  t.initial = srg.initial;

  t.fail_id = "Fail";
  while (srg.localities.count(t.fail_id)) t.fail_id += "_";

  for (const auto& [id, loc] : srg.localities) {
    TesterLocality tl;
    tl.id = id;
    tl.source_locality = id;
    for (const auto& set : loc.ref_srg) {
      for (const auto& r : set) {
        if (r.kind == RefusalKind::Permanent) tl.incon_actions.insert(r.action);
      }
    }
    tl.verdict = tl.incon_actions.empty() ? Verdict::Pass : Verdict::Incon;
    t.localities[id] = std::move(tl);
  }
  t.localities[t.fail_id] = TesterLocality{t.fail_id, Verdict::Fail, std::nullopt, {}};

  for (const auto& e : srg.edges) {
    // Timing guards use the causes shared by every merged branch; demanding
    // the full union would condemn a branch that is legitimately enabled.
    t.edges.push_back({e.source, e.target, e.label, GuardKind::Normal, e.required, e.fresh});
    if (!e.required.empty()) {
      // Offering the action while its cause clocks still run is a failure.
      t.edges.push_back({e.source, t.fail_id, e.label, GuardKind::Premature, e.required, {}});
    }
  }
  for (const auto& [id, loc] : srg.localities) {
    for (const auto& label : loc.forb) {
      t.edges.push_back({id, t.fail_id, label, GuardKind::Forbidden, {}, {}});
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

TestCase extract_random_test_case(const Tester& t, std::uint64_t seed, const ExtractOptions& opts) {
  if (opts.max_length < 1) {
    throw std::invalid_argument("extract_random_test_case: max_length must be >= 1");
  }
  std::mt19937_64 rng(seed);
  TestCase tc;
  std::string cur = t.initial;
  while (static_cast<int>(tc.steps.size()) < opts.max_length) {
    auto outs = t.outgoing(cur);
    std::vector<double> weights;
    for (const auto* e : outs) {
      weights.push_back(e->guard == GuardKind::Normal ? 1.0 : opts.fail_weight);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (outs.empty() || total <= 0.0) break;
    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    const TesterEdge* e = outs[pick(rng)];
    tc.steps.push_back(*e);
    cur = e->target;
    if (cur == t.fail_id) break;
  }
  tc.terminal_verdict = t.localities.at(cur).verdict;
  return tc;
}

namespace {

void enumerate_rec(const Tester& t, const std::string& cur, std::set<std::string>& on_path,
                   std::vector<TesterEdge>& steps, int max_length, std::size_t cap,
                   std::vector<TestCase>& out) {
  if (static_cast<int>(steps.size()) >= max_length) return;
  for (const auto* e : t.outgoing(cur)) {
    steps.push_back(*e);
    if (out.size() >= cap) {
      throw EnumerationOverflow("enumerate_test_cases: more than " + std::to_string(cap) +
                                " cases");
    }
    out.push_back({steps, t.localities.at(e->target).verdict});
    // Extend only through localities not already on the path; a closing edge
    // is recorded above but not expanded.
    if (on_path.insert(e->target).second) {
      enumerate_rec(t, e->target, on_path, steps, max_length, cap, out);
      on_path.erase(e->target);
    }
    steps.pop_back();
  }
}

}  // namespace

std::vector<TestCase> enumerate_test_cases(const Tester& t, int max_length, std::size_t cap) {
  if (max_length < 1) {
    throw std::invalid_argument("enumerate_test_cases: max_length must be >= 1");
  }
  std::vector<TestCase> out;
  std::set<std::string> on_path{t.initial};
  std::vector<TesterEdge> steps;
  enumerate_rec(t, t.initial, on_path, steps, max_length, cap, out);
  return out;
}

}  // namespace srgtest
