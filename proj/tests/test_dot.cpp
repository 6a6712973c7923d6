#include <doctest.h>

#include "srgtest/dot.hpp"
#include "support/corpus.hpp"

using namespace srgtest;
namespace ts = srgtest::testsupport;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("model export shows states with their clock decorations") {
  std::string dot = export_dot(ts::parallel_ab());
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(count_occurrences(dot, " -> ") == 4);
  CHECK(dot.find("{}") != std::string::npos);
  CHECK(dot.find("{x1}") != std::string::npos);
  CHECK(dot.find("{y2}") != std::string::npos);
  CHECK(dot.find("{x1,y1}") != std::string::npos);
}

TEST_CASE("tester export paints exactly one fail node") {
  Tester t = build_tester(extend_srg(minimize_srg(build_srg(ts::atm()))));
  std::string dot = export_dot(t);
  CHECK(count_occurrences(dot, "indianred1") == 1);
  CHECK(count_occurrences(dot, "orange") == 1);  // S4 is the only incon locality
}

TEST_CASE("ATM graph export carries the S4 decoration") {
  auto srg = extend_srg(minimize_srg(build_srg(ts::atm())));
  std::string dot = export_dot(srg);
  CHECK(dot.find("PERM(keepcart,{y1})") != std::string::npos);
  CHECK(dot.find("PERM(rejectcart,{y1})") != std::string::npos);
  CHECK(dot.find("TEMP(keepcart,{y1})") != std::string::npos);
  CHECK(dot.find("TEMP(rejectcart,{y1})") != std::string::npos);
  CHECK(dot.find("Forb={codenotok,codeok,incart,outcart,take,valide}") != std::string::npos);
}
