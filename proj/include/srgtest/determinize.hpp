#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srgtest/model.hpp"

namespace srgtest {

enum class NondetKind {
  SameClockSet,         // all members share one cause set
  OverlappingClockSet,  // cause sets intersect pairwise but are not all equal
};

// A maximal group of transitions that constitutes one non-deterministic choice:
// same source, same label, cause sets linked by nonempty intersections.
struct NondetClass {
  StateId source;
  Label label;
  std::vector<MlstsTransition> members;  // |members| >= 2
  NondetKind kind;
};

// What one branch of a merged choice offered, as seen from the merged state.
// `offers` are the branch target's outgoing edges with causes remapped onto
// the merged state's clocks (the branch fresh clock becomes the merged clock).
struct BranchRecord {
  MlstsTransition origin;  // the removed member transition
  StateId origin_target;
  std::vector<std::pair<Label, std::set<Clock>>> offers;
};

struct MergeRecord {
  NondetClass cls;
  MlstsTransition merged_transition;
  StateId merged_state;
  std::vector<BranchRecord> branches;  // one per class member, in member order
};

struct DeterminizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DeterminizeOptions {
  // Cap on states created while unfolding one class chain; exceeding it is an
  // error (cycles through a non-deterministic choice may not converge).
  int max_unfold = 64;
};

/// Detects the non-deterministic classes of the model. Transitions sharing
/// source and label but with pairwise-disjoint cause sets are not a choice
/// and are not reported.
std::vector<NondetClass> find_nondeterminism(const Mlsts& m);

struct DeterminizeResult {
  Mlsts model;
  std::vector<MergeRecord> records;
};

/// Three-step determinization: remove each class, add one merged transition
/// whose causes are the union of the members', and duplicate every branch
/// target's outgoing behavior from the merged state. Iterates until no class
/// remains. The input must be valid; the output validates and preserves
/// untimed traces.
DeterminizeResult determinize(const Mlsts& m, const DeterminizeOptions& opts = {});

}  // namespace srgtest
