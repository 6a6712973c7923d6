#include <doctest.h>

#include <random>

#include "srgtest/conformance.hpp"
#include "support/corpus.hpp"

using namespace srgtest;
namespace ts = srgtest::testsupport;

namespace {

Tester tester_of(const Mlsts& m) {
  return build_tester(extend_srg(minimize_srg(build_srg(m))));
}

// ATM with an extra clock-guarded transition offering a forbidden action.
Mlsts atm_forbidden_mutant() {
  Mlsts m = ts::atm();
  m.states["sx"] = {"sx", {"w9"}, false};
  m.transitions.push_back({"s1", {"x1"}, "take", "w9", "sx"});
  return m;
}

// ATM that deadlocks after incart.valide.codeok.outcart.
Mlsts atm_deadlock_mutant() {
  Mlsts m = ts::atm();
  std::erase_if(m.transitions, [](const MlstsTransition& t) { return t.label == "take"; });
  m.states.erase("s7");
  return m;
}

// ATM with the valide duration changed from rate 2 to rate 4.
Mlsts atm_rate_mutant() {
  Mlsts m = ts::atm();
  m.alphabet["valide"] = Exponential{4.0};
  return m;
}

}  // namespace

TEST_CASE("sample comparison verdicts") {
  std::mt19937_64 rng(2024);
  std::vector<double> exp2;
  for (int i = 0; i < 2000; ++i) exp2.push_back(sample_duration(Exponential{2.0}, rng));

  CHECK(compare_distributions(exp2, Exponential{2.0},
                              {LeqComparator::Kind::KsEquivalent, 0.01, 30}) == CmpOutcome::Holds);
  CHECK(compare_distributions(exp2, Exponential{2.0},
                              {LeqComparator::Kind::SameMean, 0.01, 30}) == CmpOutcome::Holds);

  std::vector<double> few(exp2.begin(), exp2.begin() + 10);
  CHECK(compare_distributions(few, Exponential{2.0},
                              {LeqComparator::Kind::SameMean, 0.01, 30}) ==
        CmpOutcome::Inconclusive);

  CHECK_THROWS_AS((void)compare_distributions(exp2, Exponential{2.0},
                                              {LeqComparator::Kind::AnalyticExact, 0.01, 30}),
                  std::invalid_argument);
}

TEST_CASE("the comparator choice changes the verdict") {
  // Uniform(1,3) has the same mean as Dirac(2) but a different shape.
  std::mt19937_64 rng(99);
  std::vector<double> xs;
  for (int i = 0; i < 2000; ++i) xs.push_back(sample_duration(Uniform{1.0, 3.0}, rng));
  CHECK(compare_distributions(xs, Dirac{2.0}, {LeqComparator::Kind::SameMean, 0.01, 30}) ==
        CmpOutcome::Holds);
  CHECK(compare_distributions(xs, Dirac{2.0}, {LeqComparator::Kind::KsEquivalent, 0.01, 30}) ==
        CmpOutcome::Violated);
}

TEST_CASE("declared-distribution comparison") {
  LeqComparator exact{LeqComparator::Kind::AnalyticExact, 0.01, 30};
  CHECK(compare_distributions(Distribution{Exponential{2.0}}, Distribution{Exponential{2.0}},
                              exact) == CmpOutcome::Holds);
  CHECK(compare_distributions(Distribution{Exponential{4.0}}, Distribution{Exponential{2.0}},
                              exact) == CmpOutcome::Violated);
  LeqComparator mean{LeqComparator::Kind::SameMean, 0.01, 30};
  CHECK(compare_distributions(Distribution{Uniform{1.0, 3.0}}, Distribution{Dirac{2.0}}, mean) ==
        CmpOutcome::Holds);
}

TEST_CASE("the spec passes its own tester") {
  Mlsts m = ts::atm();
  Tester t = tester_of(m);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SimulatorAdapter impl(m, seed);
    RunOutcome run = execute_test(t, impl);
    CHECK(run.verdict != Verdict::Fail);
  }
}

TEST_CASE("a forbidden offer fails within a few hundred seeds") {
  Tester t = tester_of(ts::atm());
  Mlsts bad = atm_forbidden_mutant();
  bool saw_forbidden = false;
  for (std::uint64_t seed = 0; seed < 1000 && !saw_forbidden; ++seed) {
    SimulatorAdapter impl(bad, seed);
    RunOutcome run = execute_test(t, impl);
    if (run.verdict == Verdict::Fail && run.fail->kind == FailKind::ForbiddenAction) {
      CHECK(run.fail->label == "take");
      saw_forbidden = true;
    }
  }
  CHECK(saw_forbidden);
}

TEST_CASE("an offer before its cause expires is premature") {
  // Recorded run of the Dirac chain a(1) then b, with b started at 0.5.
  Mlsts m;
  m.name = "dirac_chain";
  m.alphabet = {{"a", Dirac{1.0}}, {"b", Dirac{2.0}}};
  m.states["q0"] = {"q0", {}, true};
  m.states["q1"] = {"q1", {"x1"}, false};
  m.states["q2"] = {"q2", {"x2"}, false};
  m.transitions.push_back({"q0", {}, "a", "x1", "q1"});
  m.transitions.push_back({"q1", {"x1"}, "b", "x2", "q2"});

  Tester t = tester_of(m);
  TraceAdapter early({{"a", 0.0, 1.0}, {"b", 0.5, 2.0}});
  RunOutcome run = execute_test(t, early);
  REQUIRE(run.verdict == Verdict::Fail);
  CHECK(run.fail->kind == FailKind::PrematureOffer);
  CHECK(run.fail->label == "b");
  CHECK(run.fail->pending == std::set<Clock>{"x1"});

  TraceAdapter on_time({{"a", 0.0, 1.0}, {"b", 1.0, 2.0}});
  CHECK(execute_test(t, on_time).verdict == Verdict::Pass);
}

TEST_CASE("a deadlock at the choice point is inconclusive, not a failure") {
  Tester t = tester_of(ts::atm());
  // The recording stops right after codenotok; the keep/reject refusal is
  // explainable by the permanent refusals, but only a real deadlock says so.
  std::vector<TimedStep> steps{{"incart", 0.0, 1.0}, {"valide", 1.0, 0.5},
                               {"codenotok", 1.5, 0.7}};
  class DeadlockedTrace : public TraceAdapter {
   public:
    using TraceAdapter::TraceAdapter;
    bool deadlocked() const override { return true; }
  } impl(steps);
  CHECK(execute_test(t, impl).verdict == Verdict::Incon);

  TraceAdapter merely_truncated(steps);
  CHECK(execute_test(t, merely_truncated).verdict == Verdict::Pass);
}

TEST_CASE("an unexpected refusal fails") {
  Tester t = tester_of(ts::atm());
  std::vector<TimedStep> steps{{"incart", 0.0, 1.0}};
  class DeadlockedTrace : public TraceAdapter {
   public:
    using TraceAdapter::TraceAdapter;
    bool deadlocked() const override { return true; }
  } impl(steps);
  RunOutcome run = execute_test(t, impl);
  REQUIRE(run.verdict == Verdict::Fail);
  CHECK(run.fail->kind == FailKind::UnexpectedRefusal);
  CHECK(run.fail->label == "valide");
}

TEST_CASE("self-conformance holds under every comparator") {
  Mlsts m = ts::atm();
  for (auto kind : {LeqComparator::Kind::AnalyticExact, LeqComparator::Kind::SameMean,
                    LeqComparator::Kind::KsEquivalent}) {
    ConformanceOptions opts;
    opts.comparator = {kind, 0.01, 30};
    opts.runs = 400;
    auto rep = check_conformance(m, m, opts);
    CHECK(rep.conforms);
    CHECK(rep.fail_runs == 0);
  }
}

TEST_CASE("a deadlocking implementation does not conform") {
  ConformanceOptions opts;
  opts.comparator = {LeqComparator::Kind::AnalyticExact, 0.01, 30};
  opts.runs = 50;
  auto rep = check_conformance(ts::atm(), atm_deadlock_mutant(), opts);
  CHECK_FALSE(rep.conforms);
  bool grew_forb = false;
  for (const auto& tc : rep.trace_checks) {
    if (tc.in_impl && !tc.forb_ok) grew_forb = true;
  }
  CHECK(grew_forb);
}

TEST_CASE("an implementation offering a forbidden action does not conform") {
  ConformanceOptions opts;
  opts.comparator = {LeqComparator::Kind::AnalyticExact, 0.01, 30};
  opts.runs = 400;
  auto rep = check_conformance(ts::atm(), atm_forbidden_mutant(), opts);
  CHECK_FALSE(rep.conforms);
}

TEST_CASE("a changed duration distribution does not conform") {
  ConformanceOptions opts;
  opts.comparator = {LeqComparator::Kind::SameMean, 0.01, 30};
  opts.runs = 2000;
  auto rep = check_conformance(ts::atm(), atm_rate_mutant(), opts);
  CHECK_FALSE(rep.conforms);
  for (const auto& dc : rep.duration_checks) {
    if (dc.action == "valide") CHECK(dc.outcome == CmpOutcome::Violated);
  }
}

TEST_CASE("removing refusal-inducing behavior never breaks conformance") {
  // The disjoint pair offers `a` twice; dropping one arm sheds refusals
  // without forbidding anything new.
  Mlsts spec = ts::disjoint_pair();
  Mlsts less = spec;
  std::erase_if(less.transitions,
                [](const MlstsTransition& t) { return t.fresh == "u2" || t.fresh == "v2"; });
  less.states.erase("s4");
  less.states.erase("s6");

  ConformanceOptions opts;
  opts.comparator = {LeqComparator::Kind::AnalyticExact, 0.01, 30};
  opts.runs = 200;
  CHECK(check_conformance(spec, spec, opts).conforms);
  CHECK(check_conformance(spec, less, opts).conforms);
}

TEST_CASE("trace-corpus conformance") {
  Mlsts m = ts::atm();
  ConformanceOptions opts;
  opts.comparator = {LeqComparator::Kind::SameMean, 0.01, 30};

  std::vector<TimedTrace> good;
  for (std::uint64_t seed = 0; seed < 300; ++seed) good.push_back(simulate_run(m, seed, 64));
  auto rep = check_conformance(m, good, opts);
  CHECK(rep.conforms);
  for (const auto& tc : rep.trace_checks) CHECK_FALSE(tc.ref_ok.has_value());

  std::vector<TimedTrace> bad = good;
  bad.push_back({{"incart", 0.0, 1.0}, {"take", 1.0, 0.5}});
  CHECK_FALSE(check_conformance(m, bad, opts).conforms);
}
