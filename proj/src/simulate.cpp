#include "srgtest/simulate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace srgtest {

namespace {
constexpr double kExpiryEps = 1e-12;
}

Simulator::Simulator(const Mlsts& m, std::uint64_t seed, SchedulerPolicy policy)
    : model_(&m), policy_(policy), rng_(seed) {
  const MlstsState* init = m.initial_state();
  if (init == nullptr) throw std::invalid_argument("Simulator: model has no initial state");
  state_ = init->id;
}

std::optional<TimedStep> Simulator::step() {
  if (deadlocked_) return std::nullopt;
  for (;;) {
    auto enabled = enabled_transitions(*model_, state_, expired_);
    if (!enabled.empty()) {
      std::sort(enabled.begin(), enabled.end(), [](const auto& a, const auto& b) {
        return std::tie(a.label, a.target, a.causes) < std::tie(b.label, b.target, b.causes);
      });
      size_t idx = 0;
      if (policy_ == SchedulerPolicy::UniformRandom && enabled.size() > 1) {
        std::uniform_int_distribution<size_t> pick(0, enabled.size() - 1);
        idx = pick(rng_);
      }
      const MlstsTransition& t = enabled[idx];
      const double duration = sample_duration(model_->alphabet.at(t.label), rng_);
      for (const auto& c : t.causes) {
        expired_.erase(c);
        remaining_.erase(c);
      }
      remaining_[t.fresh] = duration;
      if (duration <= kExpiryEps) {
        remaining_[t.fresh] = 0.0;
        expired_.insert(t.fresh);
      }
      TimedStep step{t.label, elapsed_, duration};
      state_ = t.target;
      return step;
    }
    // Advance time to the next clock expiry.
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& [c, r] : remaining_) {
      if (!expired_.count(c)) dt = std::min(dt, r);
    }
    if (!std::isfinite(dt)) {
      deadlocked_ = true;
      return std::nullopt;
    }
    elapsed_ += dt;
    for (auto& [c, r] : remaining_) {
      if (expired_.count(c)) continue;
      r -= dt;
      if (r <= kExpiryEps) {
        r = 0.0;
        expired_.insert(c);
      }
    }
  }
}

TimedTrace simulate_run(const Mlsts& m, std::uint64_t seed, int max_steps,
                        SchedulerPolicy policy) {
  Simulator sim(m, seed, policy);
  TimedTrace trace;
  for (int i = 0; i < max_steps; ++i) {
    auto step = sim.step();
    if (!step) break;
    trace.push_back(*step);
  }
  return trace;
}

}  // namespace srgtest
