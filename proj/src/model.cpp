#include "srgtest/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace srgtest {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) {
  static const double inv_sqrt_2pi = 0.3989422804014327;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

}  // namespace

double dist_mean(const Distribution& d) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return 1.0 / f.rate;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return 0.5 * (f.lo + f.hi);
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return f.value;
        } else {
          // Normal truncated at zero: mu + sigma * phi(a) / (1 - Phi(a)), a = -mu/sigma.
          const double a = -f.mean / f.stddev;
          const double lambda = normal_pdf(a) / (1.0 - normal_cdf(a));
          return f.mean + f.stddev * lambda;
        }
      },
      d);
}

double dist_cdf(const Distribution& d, double x) {
  if (x < 0.0) return 0.0;
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return 1.0 - std::exp(-f.rate * x);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x <= f.lo) return 0.0;
          if (x >= f.hi) return 1.0;
          return (x - f.lo) / (f.hi - f.lo);
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return x >= f.value ? 1.0 : 0.0;
        } else {
          const double z0 = normal_cdf(-f.mean / f.stddev);
          const double z = normal_cdf((x - f.mean) / f.stddev);
          return (z - z0) / (1.0 - z0);
        }
      },
      d);
}

double sample_duration(const Distribution& d, std::mt19937_64& rng) {
  return std::visit(
      [&rng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          std::exponential_distribution<double> dist(f.rate);
          return dist(rng);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          std::uniform_real_distribution<double> dist(f.lo, f.hi);
          return dist(rng);
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return f.value;
        } else {
          std::normal_distribution<double> dist(f.mean, f.stddev);
          for (;;) {
            double v = dist(rng);
            if (v >= 0.0) return v;
          }
        }
      },
      d);
}

bool dist_equal(const Distribution& a, const Distribution& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& fa) -> bool {
        using T = std::decay_t<decltype(fa)>;
        const auto& fb = std::get<T>(b);
        if constexpr (std::is_same_v<T, Exponential>) {
          return fa.rate == fb.rate;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return fa.lo == fb.lo && fa.hi == fb.hi;
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return fa.value == fb.value;
        } else {
          return fa.mean == fb.mean && fa.stddev == fb.stddev;
        }
      },
      a);
}

namespace {

// Shortest decimal form that parses back to the same double.
std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string dist_to_string(const Distribution& d) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          os << "exp(" << fmt_double(f.rate) << ")";
        } else if constexpr (std::is_same_v<T, Uniform>) {
          os << "unif(" << fmt_double(f.lo) << "," << fmt_double(f.hi) << ")";
        } else if constexpr (std::is_same_v<T, Dirac>) {
          os << "dirac(" << fmt_double(f.value) << ")";
        } else {
          os << "normtrunc(" << fmt_double(f.mean) << "," << fmt_double(f.stddev) << ")";
        }
      },
      d);
  return os.str();
}

const MlstsState* Mlsts::initial_state() const {
  for (const auto& [id, s] : states) {
    if (s.is_initial) return &s;
  }
  return nullptr;
}

std::vector<const MlstsTransition*> Mlsts::outgoing(const StateId& s) const {
  std::vector<const MlstsTransition*> out;
  for (const auto& t : transitions) {
    if (t.source == s) out.push_back(&t);
  }
  return out;
}

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::string set_to_string(const std::set<Clock>& cs) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : cs) {
    if (!first) out += ",";
    out += c;
    first = false;
  }
  return out + "}";
}

std::string trans_desc(const MlstsTransition& t) {
  return t.source + " -> " + t.target + " [" + t.label + "]";
}

}  // namespace

std::vector<Violation> validate(const Mlsts& m, const ValidateOptions& opts) {
  std::vector<Violation> out;
  auto add = [&out](std::string rule, std::string subject, std::string detail) {
    out.push_back({std::move(rule), std::move(subject), std::move(detail)});
  };

  for (const auto& [label, dist] : m.alphabet) {
    if (!valid_identifier(label)) {
      add("action-label-malformed", label, "labels are alphanumeric/underscore identifiers");
    }
    bool ok = std::visit(
        [](const auto& f) -> bool {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Exponential>) return f.rate > 0.0;
          else if constexpr (std::is_same_v<T, Uniform>) return f.lo >= 0.0 && f.hi > f.lo;
          else if constexpr (std::is_same_v<T, Dirac>) return f.value >= 0.0;
          else return f.stddev > 0.0;
        },
        dist);
    if (!ok) add("distribution-parameters", label, dist_to_string(dist));
  }

  int initials = 0;
  for (const auto& [id, s] : m.states) {
    if (s.is_initial) {
      ++initials;
      if (!s.clocks.empty()) {
        add("initial-clock-set-nonempty", id, set_to_string(s.clocks));
      }
    }
  }
  if (initials != 1) {
    add("initial-state-count", m.name, "expected exactly one INIT state, found " + std::to_string(initials));
  }

  std::map<Clock, int> fresh_uses;
  for (const auto& t : m.transitions) {
    if (!m.has_state(t.source)) {
      add("unknown-source-state", trans_desc(t), t.source);
      continue;
    }
    if (!m.has_state(t.target)) {
      add("unknown-target-state", trans_desc(t), t.target);
      continue;
    }
    if (m.alphabet.count(t.label) == 0) {
      add("action-not-in-alphabet", trans_desc(t), t.label);
    }
    const auto& src = m.states.at(t.source);
    const auto& dst = m.states.at(t.target);
    for (const auto& c : t.causes) {
      if (src.clocks.count(c) == 0) {
        add("cause-not-alive", trans_desc(t), "cause " + c + " not in " + set_to_string(src.clocks));
      }
    }
    if (dst.clocks.count(t.fresh) == 0) {
      add("fresh-not-in-target", trans_desc(t), t.fresh);
    }
    std::set<Clock> expected;
    std::set_difference(src.clocks.begin(), src.clocks.end(), t.causes.begin(), t.causes.end(),
                        std::inserter(expected, expected.end()));
    expected.insert(t.fresh);
    if (expected != dst.clocks && !opts.lenient_clock_flow) {
      add("clock-flow", trans_desc(t),
          "expected " + set_to_string(expected) + ", target has " + set_to_string(dst.clocks));
    }
    fresh_uses[t.fresh]++;
  }
  for (const auto& [c, n] : fresh_uses) {
    if (n > 1) add("fresh-clock-reused", c, std::to_string(n) + " transitions introduce this clock");
  }

  // Reachability from the initial state.
  const MlstsState* init = m.initial_state();
  if (init != nullptr) {
    std::set<StateId> seen{init->id};
    std::deque<StateId> queue{init->id};
    while (!queue.empty()) {
      StateId cur = queue.front();
      queue.pop_front();
      for (const auto& t : m.transitions) {
        if (t.source == cur && m.has_state(t.target) && seen.insert(t.target).second) {
          queue.push_back(t.target);
        }
      }
    }
    for (const auto& [id, s] : m.states) {
      if (seen.count(id) == 0) add("state-unreachable", id, "");
    }
  }
  return out;
}

std::vector<MlstsTransition> enabled_transitions(const Mlsts& m, const StateId& state,
                                                 const std::set<Clock>& expired) {
  if (!m.has_state(state)) {
    throw std::invalid_argument("enabled_transitions: unknown state " + state);
  }
  std::vector<MlstsTransition> out;
  for (const auto& t : m.transitions) {
    if (t.source != state) continue;
    if (std::includes(expired.begin(), expired.end(), t.causes.begin(), t.causes.end())) {
      out.push_back(t);
    }
  }
  return out;
}

std::set<std::vector<Label>> traces(const Mlsts& m, int max_depth) {
  std::set<std::vector<Label>> out;
  const MlstsState* init = m.initial_state();
  if (init == nullptr) return out;
  // BFS over (state, prefix) pairs; the trace set is prefix-closed by construction.
  std::deque<std::pair<StateId, std::vector<Label>>> queue;
  queue.emplace_back(init->id, std::vector<Label>{});
  while (!queue.empty()) {
    auto [state, prefix] = std::move(queue.front());
    queue.pop_front();
    out.insert(prefix);
    if (static_cast<int>(prefix.size()) >= max_depth) continue;
    for (const auto& t : m.transitions) {
      if (t.source != state) continue;
      auto next = prefix;
      next.push_back(t.label);
      queue.emplace_back(t.target, std::move(next));
    }
  }
  return out;
}

}  // namespace srgtest
