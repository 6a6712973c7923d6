#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace srgtest {

using Label = std::string;
using Clock = std::string;
using StateId = std::string;

// Duration distributions. Every sample is a nonnegative duration.
struct Exponential {
  double rate;  // > 0, per time unit
  bool operator==(const Exponential&) const = default;
};
struct Uniform {
  double lo;  // >= 0
  double hi;  // > lo
  bool operator==(const Uniform&) const = default;
};
struct Dirac {
  double value;  // >= 0
  bool operator==(const Dirac&) const = default;
};
struct NormalTruncated {
  double mean;
  double stddev;  // > 0; samples below zero are rejected
  bool operator==(const NormalTruncated&) const = default;
};

using Distribution = std::variant<Exponential, Uniform, Dirac, NormalTruncated>;

/// Analytic mean of the distribution (truncated normal uses the closed form).
double dist_mean(const Distribution& d);

/// CDF evaluated at x (0 for x < 0).
double dist_cdf(const Distribution& d, double x);

/// Draw one duration. Deterministic given the rng state.
double sample_duration(const Distribution& d, std::mt19937_64& rng);

/// Parameter-level equality (same family, same parameters).
bool dist_equal(const Distribution& a, const Distribution& b);

/// Render in the model-file syntax: exp(r), unif(lo,hi), dirac(v), normtrunc(mu,sigma).
std::string dist_to_string(const Distribution& d);

struct MlstsState {
  StateId id;
  std::set<Clock> clocks;  // the psi decoration: clocks of still-running actions
  bool is_initial = false;

  bool operator==(const MlstsState&) const = default;
};

struct MlstsTransition {
  StateId source;
  std::set<Clock> causes;  // mu: clocks that must expire before the action starts
  Label label;
  Clock fresh;  // xi: clock started by this transition
  StateId target;

  bool operator==(const MlstsTransition&) const = default;
  auto operator<=>(const MlstsTransition&) const = default;
};

struct Mlsts {
  std::string name;
  std::map<Label, Distribution> alphabet;  // one distribution per action label
  std::map<StateId, MlstsState> states;
  std::vector<MlstsTransition> transitions;

  const MlstsState* initial_state() const;
  std::vector<const MlstsTransition*> outgoing(const StateId& s) const;
  bool has_state(const StateId& s) const { return states.count(s) != 0; }
  bool operator==(const Mlsts&) const = default;
};

struct Violation {
  std::string rule;     // stable rule name, e.g. "cause-not-alive"
  std::string subject;  // state or transition description
  std::string detail;
};

struct ValidateOptions {
  // Downgrades the clock-flow rule (target = source \ causes + fresh) to a warning.
  bool lenient_clock_flow = false;
};

/// Checks every structural invariant; an empty result means the model is valid.
std::vector<Violation> validate(const Mlsts& m, const ValidateOptions& opts = {});

/// Transitions from `state` whose full cause set is contained in `expired`.
/// Throws std::invalid_argument for an unknown state id.
std::vector<MlstsTransition> enabled_transitions(const Mlsts& m, const StateId& state,
                                                 const std::set<Clock>& expired);

/// Untimed trace set: all action-label sequences of length <= max_depth along
/// paths from the initial state, clock guards ignored. Prefix-closed.
std::set<std::vector<Label>> traces(const Mlsts& m, int max_depth);

struct TimedStep {
  Label label;
  double start = 0.0;
  double duration = 0.0;
  bool operator==(const TimedStep&) const = default;
};

// Ordered observation of one run; start times are non-decreasing.
using TimedTrace = std::vector<TimedStep>;

}  // namespace srgtest
