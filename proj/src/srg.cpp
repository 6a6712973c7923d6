#include "srgtest/srg.hpp"

#include <algorithm>
#include <deque>

namespace srgtest {

std::vector<const SrgEdge*> StochasticRefusalGraph::outgoing(const std::string& locality) const {
  std::vector<const SrgEdge*> out;
  for (const auto& e : edges) {
    if (e.source == locality) out.push_back(&e);
  }
  return out;
}

std::string refusal_to_string(const Refusal& r) {
  std::string out = r.kind == RefusalKind::Permanent ? "PERM(" : "TEMP(";
  out += r.action + ",{";
  bool first = true;
  for (const auto& c : r.clocks) {
    if (!first) out += ",";
    out += c;
    first = false;
  }
  return out + "})";
}

StochasticRefusalGraph build_srg(const Mlsts& m, const DeterminizeOptions& opts) {
  DeterminizeResult det = determinize(m, opts);
  const Mlsts& dm = det.model;

  // Relabel states into localities S0..Sn in BFS order; children are visited
  // ordered by (target, label) for a stable numbering.
  std::map<StateId, std::string> rename;
  {
    const MlstsState* init = dm.initial_state();
    std::deque<StateId> queue{init->id};
    rename[init->id] = "S0";
    int next = 1;
    while (!queue.empty()) {
      StateId cur = queue.front();
      queue.pop_front();
      std::vector<MlstsTransition> outs;
      for (const auto& t : dm.transitions) {
        if (t.source == cur) outs.push_back(t);
      }
      std::sort(outs.begin(), outs.end(), [](const auto& a, const auto& b) {
        return std::tie(a.target, a.label, a.causes) < std::tie(b.target, b.label, b.causes);
      });
      for (const auto& t : outs) {
        if (rename.emplace(t.target, "S" + std::to_string(next)).second) {
          ++next;
          queue.push_back(t.target);
        }
      }
    }
  }

  StochasticRefusalGraph srg;
  srg.name = m.name;
  srg.alphabet = m.alphabet;
  srg.initial = rename.at(dm.initial_state()->id);
  for (const auto& [id, s] : dm.states) {
    SrgLocality loc;
    loc.id = rename.at(id);
    loc.clocks = s.clocks;
    srg.localities[loc.id] = std::move(loc);
  }
  // Merged transitions carry the union of branch causes, but only the causes
  // shared by every branch are certainly needed before the action may start.
  std::map<Clock, std::set<Clock>> required_by_fresh;
  for (const auto& rec : det.records) {
    std::set<Clock> shared = rec.cls.members.front().causes;
    for (const auto& mem : rec.cls.members) {
      std::set<Clock> inter;
      std::set_intersection(shared.begin(), shared.end(), mem.causes.begin(), mem.causes.end(),
                            std::inserter(inter, inter.end()));
      shared = std::move(inter);
    }
    required_by_fresh[rec.merged_transition.fresh] = std::move(shared);
  }
  for (const auto& t : dm.transitions) {
    auto it = required_by_fresh.find(t.fresh);
    std::set<Clock> required = it != required_by_fresh.end() ? it->second : t.causes;
    srg.edges.push_back({rename.at(t.source), t.causes, t.label, t.fresh, rename.at(t.target),
                         std::move(required)});
  }
  std::sort(srg.edges.begin(), srg.edges.end());

  // Temporary refusals of each locality's own outgoing edges (one set).
  for (auto& [id, loc] : srg.localities) {
    RefusalSet tref;
    for (const auto* e : srg.outgoing(id)) {
      if (!e->causes.empty()) tref.insert({RefusalKind::Temporary, e->label, e->causes});
    }
    if (!tref.empty()) loc.ref_srg.insert(std::move(tref));
  }

  // Per-branch sets at merged localities: the branch's own offers stay
  // temporary, every other branch's offers become permanent, indexed by the
  // clock of the merged transition.
  for (const auto& rec : det.records) {
    auto it = rename.find(rec.merged_state);
    if (it == rename.end()) continue;  // merged state consumed by a later merge
    SrgLocality& loc = srg.localities.at(it->second);
    const std::set<Clock> merged_index{rec.merged_transition.fresh};
    for (size_t i = 0; i < rec.branches.size(); ++i) {
      RefusalSet a;
      for (const auto& [label, causes] : rec.branches[i].offers) {
        if (!causes.empty()) a.insert({RefusalKind::Temporary, label, causes});
      }
      for (size_t j = 0; j < rec.branches.size(); ++j) {
        if (j == i) continue;
        for (const auto& [label, causes] : rec.branches[j].offers) {
          a.insert({RefusalKind::Permanent, label, merged_index});
        }
      }
      if (!a.empty()) loc.ref_srg.insert(std::move(a));
    }
  }
  return srg;
}

bool refusal_set_below(const RefusalSet& a, const RefusalSet& b) {
  for (const auto& r : a) {
    if (r.kind == RefusalKind::Permanent) {
      if (!b.count(r)) return false;
    } else {
      Refusal as_perm{RefusalKind::Permanent, r.action, r.clocks};
      if (!b.count(r) && !b.count(as_perm)) return false;
    }
  }
  return true;
}

namespace {

RefusalSet drop_shadowed_temporaries(const RefusalSet& a) {
  std::set<Label> permanent_actions;
  for (const auto& r : a) {
    if (r.kind == RefusalKind::Permanent) permanent_actions.insert(r.action);
  }
  RefusalSet out;
  for (const auto& r : a) {
    if (r.kind == RefusalKind::Temporary && permanent_actions.count(r.action)) continue;
    out.insert(r);
  }
  return out;
}

std::set<RefusalSet> minimize_sets(const std::set<RefusalSet>& in) {
  std::set<RefusalSet> cur;
  for (const auto& a : in) {
    RefusalSet reduced = drop_shadowed_temporaries(a);
    if (!reduced.empty()) cur.insert(std::move(reduced));
  }
  for (;;) {
    std::set<RefusalSet> next;
    for (const auto& a : cur) {
      bool subsumed = false;
      for (const auto& b : cur) {
        if (a != b && refusal_set_below(a, b)) {
          // Symmetric subsumption cannot survive step 1, so this keeps B.
          subsumed = true;
          break;
        }
      }
      if (!subsumed) next.insert(a);
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

}  // namespace

StochasticRefusalGraph minimize_srg(StochasticRefusalGraph srg) {
  for (auto& [id, loc] : srg.localities) {
    loc.ref_srg = minimize_sets(loc.ref_srg);
  }
  return srg;
}

StochasticRefusalGraph extend_srg(StochasticRefusalGraph srg) {
  for (auto& [id, loc] : srg.localities) {
    std::set<Label> offered;
    for (const auto* e : srg.outgoing(id)) offered.insert(e->label);
    loc.forb.clear();
    for (const auto& [label, dist] : srg.alphabet) {
      if (!offered.count(label)) loc.forb.insert(label);
    }
  }
  srg.extended = true;
  return srg;
}

namespace {

// All localities reachable by the untimed trace. The graph is deterministic in
// the refusal sense, but edges with the same label and disjoint causes may
// still branch; the decoration then aggregates over the reached set.
std::set<std::string> localities_after(const StochasticRefusalGraph& srg,
                                       std::span<const Label> trace) {
  std::set<std::string> cur{srg.initial};
  for (const auto& label : trace) {
    std::set<std::string> next;
    for (const auto& loc : cur) {
      for (const auto* e : srg.outgoing(loc)) {
        if (e->label == label) next.insert(e->target);
      }
    }
    if (next.empty()) {
      std::string t;
      for (const auto& l : trace) t += (t.empty() ? "" : ".") + l;
      throw TraceNotInSrg("trace not in SRG: " + t);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

SrgDecoration refusals_after(const StochasticRefusalGraph& srg, std::span<const Label> trace) {
  auto reached = localities_after(srg, trace);
  SrgDecoration out;
  bool first = true;
  for (const auto& id : reached) {
    const auto& loc = srg.localities.at(id);
    out.ref_srg.insert(loc.ref_srg.begin(), loc.ref_srg.end());
    out.forb_may.insert(loc.forb.begin(), loc.forb.end());
    if (first) {
      out.forb = loc.forb;
      first = false;
    } else {
      // An action is forbidden after the trace only if no reached locality offers it.
      std::set<Label> inter;
      std::set_intersection(out.forb.begin(), out.forb.end(), loc.forb.begin(), loc.forb.end(),
                            std::inserter(inter, inter.end()));
      out.forb = std::move(inter);
    }
  }
  return out;
}

std::string locality_after(const StochasticRefusalGraph& srg, std::span<const Label> trace) {
  auto reached = localities_after(srg, trace);
  if (reached.size() != 1) {
    throw TraceNotInSrg("trace reaches more than one locality");
  }
  return *reached.begin();
}

}  // namespace srgtest
