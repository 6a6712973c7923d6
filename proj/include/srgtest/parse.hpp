#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "srgtest/model.hpp"
#include "srgtest/srg.hpp"
#include "srgtest/tester.hpp"

namespace srgtest {

struct Diagnostic {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string message;
};

enum class DocKind { Model, Srg, Tester, TraceCorpus };

struct ParsedDocument {
  DocKind kind;
  std::variant<Mlsts, StochasticRefusalGraph, Tester, std::vector<TimedTrace>> payload;
};

// Total parse: either a document or diagnostics, never both empty.
struct ParseResult {
  std::optional<ParsedDocument> doc;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return doc.has_value(); }
};

/// Detects the document kind from the header keyword (MODEL / SRG / TESTER /
/// TRACES) and parses accordingly.
ParseResult parse_document(const std::string& text);

ParseResult parse_model(const std::string& text);
ParseResult parse_srg(const std::string& text);
ParseResult parse_tester(const std::string& text);
ParseResult parse_trace_corpus(const std::string& text);

std::string print_model(const Mlsts& m);
std::string print_srg(const StochasticRefusalGraph& srg);
std::string print_tester(const Tester& t);
std::string print_trace_corpus(const std::vector<TimedTrace>& traces);
std::string print_test_case(const TestCase& tc);

}  // namespace srgtest
