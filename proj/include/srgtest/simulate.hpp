#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "srgtest/model.hpp"

namespace srgtest {

enum class SchedulerPolicy {
  UniformRandom,  // uniform choice among simultaneously enabled transitions
  FirstSorted,    // deterministic: smallest (label, target) first
};

/// Steps an MLSTS under synchronous clock countdown. Clocks are set to a
/// sampled duration when their action starts and count down together; a
/// transition fires once every cause clock has reached zero.
class Simulator {
 public:
  Simulator(const Mlsts& m, std::uint64_t seed,
            SchedulerPolicy policy = SchedulerPolicy::UniformRandom);

  /// Fires the next transition, or returns nullopt at a deadlock.
  std::optional<TimedStep> step();

  bool deadlocked() const { return deadlocked_; }
  double now() const { return elapsed_; }
  const StateId& state() const { return state_; }

 private:
  const Mlsts* model_;
  SchedulerPolicy policy_;
  std::mt19937_64 rng_;
  StateId state_;
  std::map<Clock, double> remaining_;  // active clocks, remaining time
  std::set<Clock> expired_;            // reached zero, not yet consumed
  double elapsed_ = 0.0;
  bool deadlocked_ = false;
};

/// Runs the simulator for at most max_steps transitions.
TimedTrace simulate_run(const Mlsts& m, std::uint64_t seed, int max_steps,
                        SchedulerPolicy policy = SchedulerPolicy::UniformRandom);

}  // namespace srgtest
