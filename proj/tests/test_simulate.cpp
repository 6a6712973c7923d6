#include <doctest.h>

#include "srgtest/simulate.hpp"
#include "support/corpus.hpp"

using namespace srgtest;
namespace ts = srgtest::testsupport;

TEST_CASE("deterministic durations force the schedule") {
  Mlsts m;
  m.name = "dirac_chain";
  m.alphabet = {{"a", Dirac{1.0}}, {"b", Dirac{2.0}}};
  m.states["q0"] = {"q0", {}, true};
  m.states["q1"] = {"q1", {"x1"}, false};
  m.states["q2"] = {"q2", {"x2"}, false};
  m.transitions.push_back({"q0", {}, "a", "x1", "q1"});
  m.transitions.push_back({"q1", {"x1"}, "b", "x2", "q2"});

  TimedTrace tr = simulate_run(m, 3, 10);
  REQUIRE(tr.size() == 2);
  CHECK(tr[0] == TimedStep{"a", 0.0, 1.0});
  CHECK(tr[1] == TimedStep{"b", 1.0, 2.0});
}

TEST_CASE("independent actions both start at time zero, in either order") {
  Mlsts m = ts::parallel_ab();
  bool ab = false, ba = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    TimedTrace tr = simulate_run(m, seed, 10);
    REQUIRE(tr.size() == 2);
    CHECK(tr[0].start == 0.0);
    CHECK(tr[1].start == 0.0);
    if (tr[0].label == "a") ab = true;
    else ba = true;
  }
  CHECK(ab);
  CHECK(ba);
}

TEST_CASE("the step cap stops a self-loop") {
  // Not a valid MLSTS (a cycle cannot satisfy globally fresh clocks), but the
  // simulator itself has no such precondition.
  Mlsts m;
  m.name = "loop";
  m.alphabet = {{"a", Dirac{1.0}}};
  m.states["q0"] = {"q0", {}, true};
  m.transitions.push_back({"q0", {}, "a", "x", "q0"});
  CHECK(simulate_run(m, 1, 5).size() == 5);
}

TEST_CASE("deadlock is a normal stop") {
  TimedTrace tr = simulate_run(ts::chain3(), 11, 100);
  CHECK(tr.size() == 3);  // the chain ends; no fourth event
}

TEST_CASE("start times are non-decreasing and durations nonnegative") {
  for (const auto& m : ts::corpus()) {
    CAPTURE(m.name);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      TimedTrace tr = simulate_run(m, seed, 64);
      for (size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr[i].duration >= 0.0);
        if (i > 0) CHECK(tr[i].start >= tr[i - 1].start);
      }
    }
  }
}

TEST_CASE("a caused action starts when its cause expires") {
  // In chain3 the b event must start exactly when a's sampled duration ends.
  Mlsts m = ts::chain3();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TimedTrace tr = simulate_run(m, seed, 10);
    REQUIRE(tr.size() == 3);
    CHECK(tr[1].start == doctest::Approx(tr[0].start + tr[0].duration));
    CHECK(tr[2].start == doctest::Approx(tr[1].start + tr[1].duration));
  }
}

TEST_CASE("runs are reproducible per seed and policy") {
  Mlsts m = ts::atm();
  CHECK(simulate_run(m, 5, 64) == simulate_run(m, 5, 64));
  CHECK(simulate_run(m, 5, 64, SchedulerPolicy::FirstSorted) ==
        simulate_run(m, 5, 64, SchedulerPolicy::FirstSorted));
}
