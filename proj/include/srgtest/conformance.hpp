#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srgtest/simulate.hpp"
#include "srgtest/tester.hpp"

namespace srgtest {

enum class FailKind { ForbiddenAction, PrematureOffer, UnexpectedRefusal };

struct FailReason {
  FailKind kind;
  Label label;
  std::set<Clock> pending;  // PrematureOffer: cause clocks still running
};

struct RunOutcome {
  Verdict verdict = Verdict::Pass;
  TimedTrace trace;
  std::optional<FailReason> fail;  // present iff verdict == Fail
};

/// Source of observed implementation behavior for a tester run.
class ImplAdapter {
 public:
  virtual ~ImplAdapter() = default;
  /// Next observed action, or nullopt once the implementation stops.
  virtual std::optional<TimedStep> next() = 0;
  /// True when the stop is a real deadlock (a refusal of everything), as
  /// opposed to a step cap or an exhausted recorded trace.
  virtual bool deadlocked() const = 0;
};

/// Adapter running a simulated implementation model.
class SimulatorAdapter : public ImplAdapter {
 public:
  SimulatorAdapter(const Mlsts& m, std::uint64_t seed, int max_steps = 64);
  std::optional<TimedStep> next() override;
  bool deadlocked() const override;

 private:
  Simulator sim_;
  int steps_left_;
};

/// Adapter replaying one recorded timed trace.
class TraceAdapter : public ImplAdapter {
 public:
  explicit TraceAdapter(TimedTrace trace) : trace_(std::move(trace)) {}
  std::optional<TimedStep> next() override;
  bool deadlocked() const override { return false; }

 private:
  TimedTrace trace_;
  std::size_t pos_ = 0;
};

struct AdapterProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Synchronizes the adapter's observed actions with the canonical tester.
/// A forbidden action or an offer before its cause clocks expired fails the
/// run; a refusal explainable only by a permanent refusal is inconclusive.
RunOutcome execute_test(const Tester& tester, ImplAdapter& impl);

enum class CmpOutcome { Holds, Violated, Inconclusive };

std::string cmp_outcome_to_string(CmpOutcome o);

struct LeqComparator {
  enum class Kind { SameMean, KsEquivalent, AnalyticExact } kind = Kind::SameMean;
  double alpha = 0.01;           // in (0,1)
  std::size_t min_samples = 30;  // statistical kinds refuse to decide below this
};

/// Statistical comparison of observed durations against the spec distribution.
/// AnalyticExact is not sample-based and throws here.
CmpOutcome compare_distributions(const std::vector<double>& samples, const Distribution& spec,
                                 const LeqComparator& cmp);

/// Parameter-level comparison for AnalyticExact (spec-vs-spec mode).
CmpOutcome compare_distributions(const Distribution& impl, const Distribution& spec,
                                 const LeqComparator& cmp);

struct TraceCheck {
  std::vector<Label> trace;
  bool in_impl = false;          // trace performable by the implementation
  bool forb_ok = true;           // Forb inclusion (vacuous when !in_impl)
  std::optional<bool> ref_ok;    // refusal-set inclusion; nullopt = unchecked
};

struct DurationCheck {
  Label action;
  CmpOutcome outcome = CmpOutcome::Inconclusive;
  std::size_t samples = 0;
};

struct ConformanceReport {
  bool conforms = false;
  int depth = 0;
  int runs = 0;
  std::string comparator;
  std::vector<TraceCheck> trace_checks;
  std::vector<DurationCheck> duration_checks;
  int pass_runs = 0;
  int incon_runs = 0;
  int fail_runs = 0;
};

struct ConformanceOptions {
  LeqComparator comparator;
  int depth = 6;
  int runs = 2000;
  std::uint64_t seed = 1;
  int max_steps = 64;
  DeterminizeOptions determinize;
};

/// White-box conformance of one model against another: refusal-graph
/// inclusion over every bounded spec trace, plus a duration comparison per
/// action, plus seeded tester executions counted into the report.
ConformanceReport check_conformance(const Mlsts& spec, const Mlsts& impl,
                                    const ConformanceOptions& opts);

/// Trace-corpus conformance: only forbidden-action violations and duration
/// samples are observable; refusal inclusion is reported as unchecked.
ConformanceReport check_conformance(const Mlsts& spec, const std::vector<TimedTrace>& corpus,
                                    const ConformanceOptions& opts);

}  // namespace srgtest
