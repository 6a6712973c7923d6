#include "srgtest/determinize.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace srgtest {

namespace {

bool intersects(const std::set<Clock>& a, const std::set<Clock>& b) {
  for (const auto& c : a) {
    if (b.count(c)) return true;
  }
  return false;
}

struct NameAllocator {
  std::set<std::string> used;

  std::string fresh(const std::string& base) {
    if (used.insert(base).second) return base;
    for (int k = 1;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (used.insert(cand).second) return cand;
    }
  }
};

void collect_names(const Mlsts& m, NameAllocator& clocks, NameAllocator& states) {
  for (const auto& [id, s] : m.states) {
    states.used.insert(id);
    clocks.used.insert(s.clocks.begin(), s.clocks.end());
  }
  for (const auto& t : m.transitions) {
    clocks.used.insert(t.fresh);
    clocks.used.insert(t.causes.begin(), t.causes.end());
  }
}

void prune_unreachable(Mlsts& m) {
  const MlstsState* init = m.initial_state();
  if (init == nullptr) return;
  std::set<StateId> seen{init->id};
  std::deque<StateId> queue{init->id};
  while (!queue.empty()) {
    StateId cur = queue.front();
    queue.pop_front();
    for (const auto& t : m.transitions) {
      if (t.source == cur && seen.insert(t.target).second) queue.push_back(t.target);
    }
  }
  std::erase_if(m.transitions, [&seen](const MlstsTransition& t) {
    return seen.count(t.source) == 0 || seen.count(t.target) == 0;
  });
  std::erase_if(m.states, [&seen](const auto& kv) { return seen.count(kv.first) == 0; });
}

std::set<StateId> reachable_states(const Mlsts& m) {
  std::set<StateId> seen;
  const MlstsState* init = m.initial_state();
  if (init == nullptr) return seen;
  seen.insert(init->id);
  std::deque<StateId> queue{init->id};
  while (!queue.empty()) {
    StateId cur = queue.front();
    queue.pop_front();
    for (const auto& t : m.transitions) {
      if (t.source == cur && seen.insert(t.target).second) queue.push_back(t.target);
    }
  }
  return seen;
}

// True when the clock name appears in the reachable part of the model.
// Unreachable remnants of removed branches do not pin their names.
bool clock_in_use(const Mlsts& m, const std::set<StateId>& reachable, const Clock& c) {
  for (const auto& [id, s] : m.states) {
    if (reachable.count(id) && s.clocks.count(c)) return true;
  }
  for (const auto& t : m.transitions) {
    if (reachable.count(t.source) && (t.fresh == c || t.causes.count(c))) return true;
  }
  return false;
}

}  // namespace

std::vector<NondetClass> find_nondeterminism(const Mlsts& m) {
  // Group by (source, label), then split each group into connected components
  // of the "cause sets intersect" relation.
  std::map<std::pair<StateId, Label>, std::vector<MlstsTransition>> groups;
  for (const auto& t : m.transitions) {
    groups[{t.source, t.label}].push_back(t);
  }
  std::vector<NondetClass> out;
  for (auto& [key, ts] : groups) {
    if (ts.size() < 2) continue;
    std::sort(ts.begin(), ts.end());
    const size_t n = ts.size();
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&parent](size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        if (intersects(ts[i].causes, ts[j].causes)) parent[find(i)] = find(j);
      }
    }
    std::map<size_t, std::vector<MlstsTransition>> comps;
    for (size_t i = 0; i < n; ++i) comps[find(i)].push_back(ts[i]);
    for (auto& [root, members] : comps) {
      if (members.size() < 2) continue;
      bool all_equal = true;
      for (const auto& t : members) {
        if (t.causes != members.front().causes) all_equal = false;
      }
      out.push_back({key.first, key.second, members,
                     all_equal ? NondetKind::SameClockSet : NondetKind::OverlappingClockSet});
    }
  }
  std::sort(out.begin(), out.end(), [](const NondetClass& a, const NondetClass& b) {
    return std::tie(a.source, a.label) < std::tie(b.source, b.label);
  });
  return out;
}

namespace {

struct Merger {
  Mlsts& m;
  NameAllocator clock_names;
  NameAllocator state_names;
  int budget;  // states we may still create for this class

  // Copies of original states made while duplicating branch behavior, keyed by
  // (original state id, its clock set after renaming). Reused to close cycles.
  std::map<std::pair<StateId, std::set<Clock>>, StateId> copies;
  std::set<std::tuple<StateId, Label, std::set<Clock>, StateId>> emitted_edges;

  std::set<Clock> remap(const std::set<Clock>& cs, const std::map<Clock, Clock>& ren,
                        const std::set<Clock>& dropped) const {
    std::set<Clock> out;
    for (const auto& c : cs) {
      if (dropped.count(c)) continue;  // expired before the merged transition fired
      auto it = ren.find(c);
      out.insert(it == ren.end() ? c : it->second);
    }
    return out;
  }

  // Duplicates the outgoing behavior of original state `old_id` so that it is
  // available from `new_id`, whose clock set is the renamed image of the
  // original one.
  void copy_outgoing(const StateId& old_id, const StateId& new_id,
                     const std::set<Clock>& new_clocks, std::map<Clock, Clock> ren,
                     const std::set<Clock>& dropped) {
    // Snapshot: m.transitions grows during recursion.
    std::vector<MlstsTransition> outs;
    for (const auto& t : m.transitions) {
      if (t.source == old_id) outs.push_back(t);
    }
    std::sort(outs.begin(), outs.end());
    for (const auto& u : outs) {
      std::set<Clock> causes = remap(u.causes, ren, dropped);
      Clock fresh = clock_names.fresh(u.fresh);
      std::set<Clock> tclocks;
      std::set_difference(new_clocks.begin(), new_clocks.end(), causes.begin(), causes.end(),
                          std::inserter(tclocks, tclocks.end()));
      tclocks.insert(fresh);

      auto ren2 = ren;
      ren2[u.fresh] = fresh;
      std::set<Clock> image = remap(m.states.at(u.target).clocks, ren2, dropped);
      // image should equal tclocks by the clock-flow rule; use it as memo key.
      auto key = std::make_pair(u.target, image);
      StateId target;
      if (auto it = copies.find(key); it != copies.end()) {
        target = it->second;
        if (!emitted_edges.insert({new_id, u.label, causes, target}).second) continue;
        m.transitions.push_back({new_id, causes, u.label, fresh, target});
      } else {
        if (--budget < 0) {
          throw DeterminizeError("determinize: unfolding exceeded the configured bound");
        }
        target = state_names.fresh(u.target);
        copies[key] = target;
        m.states[target] = MlstsState{target, tclocks, false};
        if (!emitted_edges.insert({new_id, u.label, causes, target}).second) continue;
        m.transitions.push_back({new_id, causes, u.label, fresh, target});
        copy_outgoing(u.target, target, tclocks, ren2, dropped);
      }
    }
  }
};

}  // namespace

DeterminizeResult determinize(const Mlsts& input, const DeterminizeOptions& opts) {
  DeterminizeResult res;
  res.model = input;
  Mlsts& m = res.model;

  for (int round = 0;; ++round) {
    if (round > 256) {
      throw DeterminizeError("determinize: class elimination did not converge");
    }
    auto classes = find_nondeterminism(m);
    if (classes.empty()) break;
    const NondetClass cls = classes.front();

    // Remove the members.
    for (const auto& member : cls.members) {
      std::erase(m.transitions, member);
    }

    std::set<Clock> union_causes;
    for (const auto& member : cls.members) {
      union_causes.insert(member.causes.begin(), member.causes.end());
    }

    Merger merger{m, {}, {}, opts.max_unfold, {}, {}};
    collect_names(m, merger.clock_names, merger.state_names);

    // Merged clock: reuse the smallest member fresh clock when the member
    // removal freed it, so determinized graphs keep the source model's names.
    Clock merged_clock;
    {
      const std::set<StateId> reachable = reachable_states(m);
      std::vector<Clock> cands;
      for (const auto& member : cls.members) cands.push_back(member.fresh);
      std::sort(cands.begin(), cands.end());
      for (const auto& c : cands) {
        if (!clock_in_use(m, reachable, c)) {
          merged_clock = c;
          merger.clock_names.used.insert(c);
          break;
        }
      }
      if (merged_clock.empty()) merged_clock = merger.clock_names.fresh("d1");
    }

    // Merged state named after the sorted branch targets.
    std::string state_base;
    {
      std::set<StateId> targets;
      for (const auto& member : cls.members) targets.insert(member.target);
      for (const auto& t : targets) {
        if (!state_base.empty()) state_base += "_";
        state_base += t;
      }
    }
    const StateId merged_state = merger.state_names.fresh(state_base);

    const auto& src = m.states.at(cls.source);
    std::set<Clock> merged_clocks;
    std::set_difference(src.clocks.begin(), src.clocks.end(), union_causes.begin(),
                        union_causes.end(), std::inserter(merged_clocks, merged_clocks.end()));
    merged_clocks.insert(merged_clock);
    m.states[merged_state] = MlstsState{merged_state, merged_clocks, false};

    MlstsTransition merged_edge{cls.source, union_causes, cls.label, merged_clock, merged_state};
    m.transitions.push_back(merged_edge);

    MergeRecord rec{cls, merged_edge, merged_state, {}};
    for (const auto& member : cls.members) {
      BranchRecord br{member, member.target, {}};
      std::map<Clock, Clock> ren{{member.fresh, merged_clock}};
      std::set<Clock> dropped;
      for (const auto& c : union_causes) {
        if (c != member.fresh) dropped.insert(c);
      }
      std::vector<MlstsTransition> outs;
      for (const auto& t : m.transitions) {
        if (t.source == member.target) outs.push_back(t);
      }
      std::sort(outs.begin(), outs.end());
      for (const auto& u : outs) {
        br.offers.emplace_back(u.label, merger.remap(u.causes, ren, dropped));
      }
      rec.branches.push_back(std::move(br));

      merger.copy_outgoing(member.target, merged_state, merged_clocks, ren, dropped);
    }
    res.records.push_back(std::move(rec));

    prune_unreachable(m);
  }
  return res;
}

}  // namespace srgtest
