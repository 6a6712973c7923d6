#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "srgtest/srg.hpp"

namespace srgtest {

enum class Verdict { Pass, Incon, Fail };

std::string verdict_to_string(Verdict v);

struct TesterLocality {
  std::string id;
  Verdict verdict = Verdict::Pass;
  std::optional<std::string> source_locality;  // absent for the Fail sink
  // Actions whose refusal here is explainable by a permanent refusal of the
  // source locality; observing one yields Incon instead of Fail.
  std::set<Label> incon_actions;
  bool operator==(const TesterLocality&) const = default;
};

enum class GuardKind { Normal, Premature, Forbidden };

struct TesterEdge {
  std::string source;
  std::string target;
  Label label;
  GuardKind guard = GuardKind::Normal;
  std::set<Clock> causes;  // Normal / Premature; empty for Forbidden
  Clock fresh;             // Normal only; clock bookkeeping for premature checks

  auto operator<=>(const TesterEdge&) const = default;
};

struct Tester {
  std::string name;
  std::map<Label, Distribution> alphabet;
  std::map<std::string, TesterLocality> localities;
  std::string initial;
  std::string fail_id;
  std::vector<TesterEdge> edges;

  std::vector<const TesterEdge*> outgoing(const std::string& locality) const;
  bool operator==(const Tester&) const = default;
};

struct TestCase {
  std::vector<TesterEdge> steps;
  Verdict terminal_verdict = Verdict::Pass;
};

/// Builds the canonical tester over an extended SRG: pass localities mirror
/// the graph, one Fail sink collects the forbidden-action edges and, per
/// clock-guarded edge, a premature-offer edge. Throws std::invalid_argument
/// when the SRG is not extended.
Tester build_tester(const StochasticRefusalGraph& srg);

struct ExtractOptions {
  int max_length = 8;        // >= 1
  double fail_weight = 1.0;  // relative weight of Fail-directed edges
};

/// Random walk from the initial locality; stops at Fail, at a deadlocked
/// locality, or at max_length.
TestCase extract_random_test_case(const Tester& t, std::uint64_t seed, const ExtractOptions& opts);

struct EnumerationOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All simple paths (plus one optional closing edge) of length <= max_length.
/// Covers every tester edge reachable within the bound. Throws
/// EnumerationOverflow when more than `cap` cases would be produced.
std::vector<TestCase> enumerate_test_cases(const Tester& t, int max_length, std::size_t cap = 100000);

}  // namespace srgtest
