#pragma once

#include <compare>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "srgtest/determinize.hpp"
#include "srgtest/model.hpp"

namespace srgtest {

enum class RefusalKind { Temporary, Permanent };

// One refusal term: an action refused either while the indexed clocks run
// (Temporary) or possibly forever, settled once they expire (Permanent).
struct Refusal {
  RefusalKind kind;
  Label action;
  std::set<Clock> clocks;  // nonempty

  auto operator<=>(const Refusal&) const = default;
};

using RefusalSet = std::set<Refusal>;

struct SrgLocality {
  std::string id;
  std::set<Clock> clocks;
  std::set<RefusalSet> ref_srg;
  std::set<Label> forb;  // empty until the graph is extended
  bool operator==(const SrgLocality&) const = default;
};

struct SrgEdge {
  std::string source;
  std::set<Clock> causes;
  Label label;
  Clock fresh;
  std::string target;
  // Causes every merged branch shared; equals causes except on edges created
  // by merging overlapping cause sets, where causes is the branch union. Only
  // an offer before these clocks expire is premature under every branch.
  std::set<Clock> required;

  auto operator<=>(const SrgEdge&) const = default;
};

struct StochasticRefusalGraph {
  std::string name;
  std::map<Label, Distribution> alphabet;
  std::map<std::string, SrgLocality> localities;
  std::string initial;
  std::vector<SrgEdge> edges;
  bool extended = false;

  std::vector<const SrgEdge*> outgoing(const std::string& locality) const;
  bool operator==(const StochasticRefusalGraph&) const = default;
};

struct TraceNotInSrg : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Determinizes the model and decorates every locality with refusal sets:
/// each locality gets the temporary refusals of its outgoing edges, and each
/// merged locality additionally gets one per-branch set mixing the branch's
/// temporary refusals with the other branches' permanent ones, all indexed by
/// the merged clock. Output is not minimized.
StochasticRefusalGraph build_srg(const Mlsts& m, const DeterminizeOptions& opts = {});

/// Refusal-set minimization: drop temporary terms shadowed by a permanent one
/// within a set, then drop sets subsumed by another under the refusal order.
/// Idempotent.
StochasticRefusalGraph minimize_srg(StochasticRefusalGraph srg);

/// Adds the forbidden-action set of every locality (alphabet minus outgoing
/// labels) and marks the graph extended.
StochasticRefusalGraph extend_srg(StochasticRefusalGraph srg);

/// Subsumption order on refusal sets: A is below B when every permanent term
/// of A is in B and every temporary term of A is in B as temporary or
/// permanent.
bool refusal_set_below(const RefusalSet& a, const RefusalSet& b);

// Several localities can be reached by one trace when edges share a label
// with disjoint cause sets; the decoration then distinguishes actions every
// reached locality forbids (forb) from actions some reached locality forbids
// (forb_may).
struct SrgDecoration {
  std::set<RefusalSet> ref_srg;
  std::set<Label> forb;
  std::set<Label> forb_may;
};

/// Decoration of the unique locality reached by the trace; throws
/// TraceNotInSrg when the trace is not in the graph.
SrgDecoration refusals_after(const StochasticRefusalGraph& srg, std::span<const Label> trace);

/// Id of the locality reached by the trace (same lookup as refusals_after).
std::string locality_after(const StochasticRefusalGraph& srg, std::span<const Label> trace);

std::string refusal_to_string(const Refusal& r);

}  // namespace srgtest
