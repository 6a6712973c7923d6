#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "srgtest/determinize.hpp"
#include "srgtest/model.hpp"
#include "srgtest/srg.hpp"
#include "srgtest/tester.hpp"

namespace srgtest::testsupport {

// Brute-force untimed trace enumerator; recursive path walk, written without
// the library's traces() BFS.
std::set<std::vector<Label>> oracle_traces(const Mlsts& m, int max_depth);

// Expected decoration of one locality of the extended (unminimized) graph.
struct OracleDecoration {
  std::set<RefusalSet> ref_srg;
  std::set<Label> forb;
};

// Straight-from-the-definitions refusal evaluator: recomputes every locality's
// temporary set from the determinized edges and every merged locality's
// per-branch sets from the original model's branch targets. Only supports
// models whose choices resolve in one determinization round (every recorded
// branch target is a state of the original model).
std::map<std::string, OracleDecoration> oracle_decorations(const Mlsts& m);

// Alternative minimizer running the reduction steps in the opposite order
// (subsume sets first, then drop shadowed temporaries, then subsume again).
StochasticRefusalGraph oracle_minimize(StochasticRefusalGraph srg);

// The set of action labels refused at a locality, each tagged with the
// strongest kind claiming it. Minimization must preserve this map.
std::map<Label, RefusalKind> refused_actions(const SrgLocality& loc);

// Depth-unbounded structural signature of a model from its initial state:
// isomorphism-invariant in state and clock names (cause sets enter by size).
std::string canonical_signature(const Mlsts& m);

// Untimed label sequences of all non-Fail normal-edge paths of a tester.
std::set<std::vector<Label>> tester_normal_traces(const Tester& t, int max_depth);

}  // namespace srgtest::testsupport
