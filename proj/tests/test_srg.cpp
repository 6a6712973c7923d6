#include <doctest.h>

#include "srgtest/srg.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace srgtest;
namespace ts = srgtest::testsupport;

namespace {

Refusal temp(const Label& a, std::set<Clock> cs) {
  return {RefusalKind::Temporary, a, std::move(cs)};
}
Refusal perm(const Label& a, std::set<Clock> cs) {
  return {RefusalKind::Permanent, a, std::move(cs)};
}

}  // namespace

TEST_CASE("single clock-guarded edge yields one temporary set") {
  auto srg = build_srg(ts::chain3());
  // q1 (locality S1) offers only b, caused by a's clock.
  CHECK(srg.localities.at("S1").ref_srg ==
        std::set<RefusalSet>{{temp("b", {"x1"})}});
}

TEST_CASE("edges without causes contribute no refusals") {
  auto srg = build_srg(ts::parallel_ab());
  for (const auto& [id, loc] : srg.localities) CHECK(loc.ref_srg.empty());
}

TEST_CASE("ATM S4 decoration matches the published dump") {
  auto srg = extend_srg(minimize_srg(build_srg(ts::atm())));
  const auto& s4 = srg.localities.at("S4");
  CHECK(s4.clocks == std::set<Clock>{"y1"});
  std::set<RefusalSet> expect{
      {perm("keepcart", {"y1"}), temp("rejectcart", {"y1"})},
      {perm("rejectcart", {"y1"}), temp("keepcart", {"y1"})},
  };
  CHECK(s4.ref_srg == expect);
  CHECK(s4.forb ==
        std::set<Label>{"incart", "valide", "codenotok", "codeok", "outcart", "take"});
}

TEST_CASE("two-way merge decorations are symmetric") {
  auto srg = minimize_srg(build_srg(ts::nondet_same()));
  // Merged locality: reached by p then a.
  std::vector<Label> tr{"p", "a"};
  auto dec = refusals_after(extend_srg(srg), tr);
  REQUIRE(dec.ref_srg.size() == 2);
  // Swapping branch roles maps one set onto the other.
  std::set<RefusalSet> swapped;
  for (auto set : dec.ref_srg) {
    RefusalSet s;
    for (const auto& r : set) {
      Label other = r.action == "b" ? "c" : "b";
      s.insert({r.kind == RefusalKind::Temporary ? RefusalKind::Permanent
                                                 : RefusalKind::Temporary,
                other, r.clocks});
    }
    swapped.insert(std::move(s));
  }
  CHECK(swapped == dec.ref_srg);
}

TEST_CASE("minimization removes shadowed temporaries inside a set") {
  StochasticRefusalGraph g;
  g.name = "t";
  g.initial = "L";
  g.localities["L"] = {"L", {}, {{perm("a", {"x"}), temp("a", {"x"})}}, {}};
  auto out = minimize_srg(g);
  CHECK(out.localities.at("L").ref_srg == std::set<RefusalSet>{{perm("a", {"x"})}});
}

TEST_CASE("minimization removes subsumed sets") {
  StochasticRefusalGraph g;
  g.name = "t";
  g.initial = "L";
  g.localities["L"] = {
      "L", {}, {{temp("a", {"x"})}, {temp("a", {"x"}), perm("b", {"y"})}}, {}};
  auto out = minimize_srg(g);
  CHECK(out.localities.at("L").ref_srg ==
        std::set<RefusalSet>{{temp("a", {"x"}), perm("b", {"y"})}});
}

TEST_CASE("minimal graphs are fixpoints") {
  for (const auto& m : ts::corpus()) {
    CAPTURE(m.name);
    auto once = minimize_srg(build_srg(m));
    CHECK(minimize_srg(once) == once);
  }
}

TEST_CASE("minimization is step-order independent and preserves refused actions") {
  for (const auto& m : ts::corpus()) {
    CAPTURE(m.name);
    auto raw = build_srg(m);
    auto a = minimize_srg(raw);
    auto b = ts::oracle_minimize(raw);
    CHECK(a == b);
    for (const auto& [id, loc] : raw.localities) {
      CHECK(ts::refused_actions(loc) == ts::refused_actions(a.localities.at(id)));
    }
  }
}

TEST_CASE("subsumption order basics") {
  RefusalSet a{temp("x", {"c"})};
  RefusalSet b{perm("x", {"c"}), temp("y", {"d"})};
  CHECK(refusal_set_below(a, b));       // temporary may be covered by permanent
  CHECK_FALSE(refusal_set_below(b, a)); // permanent needs an exact match
  CHECK(refusal_set_below(a, a));
}

TEST_CASE("extension complements the outgoing labels") {
  auto srg = extend_srg(build_srg(ts::chain3()));
  CHECK(srg.extended);
  CHECK(srg.localities.at("S0").forb == std::set<Label>{"b", "c"});
  // Terminal locality: everything is forbidden.
  CHECK(srg.localities.at("S3").forb == std::set<Label>{"a", "b", "c"});
  for (const auto& [id, loc] : srg.localities) {
    std::set<Label> offered;
    for (const auto* e : srg.outgoing(id)) offered.insert(e->label);
    for (const auto& l : loc.forb) CHECK(offered.count(l) == 0);
    CHECK(offered.size() + loc.forb.size() == srg.alphabet.size());
  }
}

TEST_CASE("locality lookup by trace") {
  auto srg = extend_srg(minimize_srg(build_srg(ts::atm())));
  std::vector<Label> tr{"incart", "valide", "codenotok"};
  CHECK(locality_after(srg, tr) == "S4");
  auto dec = refusals_after(srg, tr);
  CHECK(dec.ref_srg == srg.localities.at("S4").ref_srg);

  std::vector<Label> empty_trace;
  auto root = refusals_after(srg, empty_trace);
  CHECK(root.forb == srg.localities.at("S0").forb);

  std::vector<Label> bogus{"take"};
  CHECK_THROWS_AS((void)refusals_after(srg, bogus), TraceNotInSrg);
}

TEST_CASE("post-a locality of the parallel model forbids everything but b") {
  auto srg = extend_srg(build_srg(ts::parallel_ab()));
  std::vector<Label> tr{"a"};
  auto dec = refusals_after(srg, tr);
  CHECK(dec.forb == std::set<Label>{"a"});
  CHECK(dec.ref_srg.empty());
}

TEST_CASE("SRG edges are deterministic") {
  for (const auto& m : ts::corpus()) {
    CAPTURE(m.name);
    auto srg = build_srg(m);
    Mlsts as_model;
    as_model.name = srg.name;
    as_model.alphabet = srg.alphabet;
    for (const auto& [id, loc] : srg.localities) {
      as_model.states[id] = MlstsState{id, loc.clocks, id == srg.initial};
    }
    for (const auto& e : srg.edges) {
      as_model.transitions.push_back({e.source, e.causes, e.label, e.fresh, e.target});
    }
    CHECK(find_nondeterminism(as_model).empty());
  }
}

TEST_CASE("decorations agree with the straight-from-the-definitions evaluator") {
  for (const auto& m : ts::corpus()) {
    CAPTURE(m.name);
    auto srg = extend_srg(build_srg(m));
    auto oracle = ts::oracle_decorations(m);
    REQUIRE(srg.localities.size() == oracle.size());
    for (const auto& [id, loc] : srg.localities) {
      CAPTURE(id);
      CHECK(loc.ref_srg == oracle.at(id).ref_srg);
      CHECK(loc.forb == oracle.at(id).forb);
    }
  }
}
