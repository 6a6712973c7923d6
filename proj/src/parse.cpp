#include "srgtest/parse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>

namespace srgtest {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Single-line token cursor with diagnostics carrying line/column spans.
struct Cursor {
  std::string text;  // comment-stripped line
  int line_no;
  std::vector<Diagnostic>* diags;
  std::size_t pos = 0;
  bool failed = false;

  void error(const std::string& msg) {
    if (!failed) diags->push_back({line_no, static_cast<int>(pos) + 1, msg});
    failed = true;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  bool peek_word(const std::string& w) {
    skip_ws();
    if (text.compare(pos, w.size(), w) != 0) return false;
    const std::size_t end = pos + w.size();
    if (end < text.size() && ident_char(text[end]) && ident_char(w.back())) return false;
    return true;
  }

  bool try_word(const std::string& w) {
    if (!peek_word(w)) return false;
    pos += w.size();
    return true;
  }

  void expect_word(const std::string& w) {
    if (!try_word(w)) error("expected '" + w + "'");
  }

  std::string ident(const std::string& what) {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (pos == start) {
      error("expected " + what);
      return "";
    }
    return text.substr(start, pos - start);
  }

  double number(const std::string& what) {
    skip_ws();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc{}) {
      error("expected " + what);
      return 0.0;
    }
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  }

  std::set<std::string> name_set(const std::string& what) {
    std::set<std::string> out;
    expect_word("{");
    if (try_word("}")) return out;
    for (;;) {
      out.insert(ident(what));
      if (failed) return out;
      if (try_word("}")) return out;
      expect_word(",");
      if (failed) return out;
    }
  }
};

std::optional<Distribution> parse_dist(Cursor& c) {
  const std::string fam = c.ident("distribution family");
  if (c.failed) return std::nullopt;
  c.expect_word("(");
  if (fam == "exp") {
    double rate = c.number("rate");
    c.expect_word(")");
    if (c.failed) return std::nullopt;
    return Exponential{rate};
  }
  if (fam == "unif") {
    double lo = c.number("lower bound");
    c.expect_word(",");
    double hi = c.number("upper bound");
    c.expect_word(")");
    if (c.failed) return std::nullopt;
    return Uniform{lo, hi};
  }
  if (fam == "dirac") {
    double v = c.number("value");
    c.expect_word(")");
    if (c.failed) return std::nullopt;
    return Dirac{v};
  }
  if (fam == "normtrunc") {
    double mu = c.number("mean");
    c.expect_word(",");
    double sigma = c.number("stddev");
    c.expect_word(")");
    if (c.failed) return std::nullopt;
    return NormalTruncated{mu, sigma};
  }
  c.error("unknown distribution family '" + fam + "' (exp, unif, dirac, normtrunc)");
  return std::nullopt;
}

struct LineReader {
  std::vector<std::pair<int, std::string>> lines;  // (line number, stripped text)

  explicit LineReader(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int no = 0;
    while (std::getline(is, raw)) {
      ++no;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      bool blank = std::all_of(raw.begin(), raw.end(),
                               [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
      if (!blank) lines.emplace_back(no, raw);
    }
  }
};

std::string suggest_actions(const std::map<Label, Distribution>& alphabet) {
  std::string s;
  for (const auto& [l, d] : alphabet) {
    if (!s.empty()) s += ", ";
    s += l;
  }
  return s.empty() ? "(no actions declared)" : s;
}

void check_transition_refs(Cursor& c, const std::map<Label, Distribution>& alphabet,
                           const Label& label) {
  if (alphabet.count(label) == 0) {
    c.diags->push_back({c.line_no, 1,
                        "undeclared action '" + label + "'; declared actions: " +
                            suggest_actions(alphabet)});
    c.failed = true;
  }
}

}  // namespace

ParseResult parse_model(const std::string& text) {
  ParseResult res;
  LineReader reader(text);
  if (reader.lines.empty()) {
    res.diagnostics.push_back({1, 1, "missing MODEL header"});
    return res;
  }

  Mlsts m;
  std::set<StateId> explicit_clocks;
  bool header_seen = false;
  bool bad = false;

  for (const auto& [no, raw] : reader.lines) {
    Cursor c{raw, no, &res.diagnostics};
    if (!header_seen) {
      if (!c.try_word("MODEL")) {
        res.diagnostics.push_back({no, 1, "missing MODEL header"});
        return res;
      }
      m.name = c.ident("model name");
      header_seen = true;
      bad |= c.failed;
      continue;
    }
    if (c.try_word("ACTION")) {
      const Label label = c.ident("action label");
      c.expect_word("DIST");
      auto dist = parse_dist(c);
      if (!c.failed && dist) {
        if (!m.alphabet.emplace(label, *dist).second) {
          c.error("duplicate ACTION '" + label + "'");
        }
      }
    } else if (c.try_word("STATE")) {
      MlstsState s;
      s.id = c.ident("state id");
      if (c.try_word("INIT")) s.is_initial = true;
      if (c.try_word("CLOCKS")) {
        s.clocks = c.name_set("clock name");
        explicit_clocks.insert(s.id);
      }
      if (!c.failed) {
        if (!m.states.emplace(s.id, s).second) c.error("duplicate STATE '" + s.id + "'");
      }
    } else if (c.try_word("TRANS")) {
      MlstsTransition t;
      t.source = c.ident("source state");
      c.expect_word("->");
      t.target = c.ident("target state");
      c.expect_word("ACTION");
      t.label = c.ident("action label");
      c.expect_word("CAUSES");
      t.causes = c.name_set("clock name");
      c.expect_word("CLOCK");
      t.fresh = c.ident("fresh clock");
      if (!c.failed) {
        check_transition_refs(c, m.alphabet, t.label);
        if (m.states.count(t.source) == 0) c.error("undeclared state '" + t.source + "'");
        if (m.states.count(t.target) == 0) c.error("undeclared state '" + t.target + "'");
      }
      if (!c.failed) m.transitions.push_back(std::move(t));
    } else {
      c.error("expected ACTION, STATE, or TRANS");
    }
    if (!c.failed && !c.at_end()) c.error("trailing input");
    bad |= c.failed;
  }
  if (bad) return res;

  // Compute omitted clock decorations from the clock-flow rule; a fully
  // explicit model is left to validate().
  if (explicit_clocks.size() < m.states.size()) {
    const MlstsState* init = m.initial_state();
    if (init == nullptr) {
      res.diagnostics.push_back({1, 1, "no INIT state; cannot compute CLOCKS decorations"});
      return res;
    }
    std::map<StateId, std::set<Clock>> known;
    for (const auto& id : explicit_clocks) known[id] = m.states.at(id).clocks;
    known.emplace(init->id, m.states.at(init->id).clocks);  // {} unless explicit
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : m.transitions) {
        auto src = known.find(t.source);
        if (src == known.end()) continue;
        std::set<Clock> computed;
        std::set_difference(src->second.begin(), src->second.end(), t.causes.begin(),
                            t.causes.end(), std::inserter(computed, computed.end()));
        computed.insert(t.fresh);
        auto [it, inserted] = known.emplace(t.target, computed);
        if (inserted) {
          changed = true;
        } else if (it->second != computed) {
          res.diagnostics.push_back(
              {1, 1, "CLOCKS of state '" + t.target + "' inconsistent with the clock-flow rule"});
          return res;
        }
      }
    }
    for (auto& [id, s] : m.states) {
      auto it = known.find(id);
      if (it == known.end()) {
        res.diagnostics.push_back(
            {1, 1, "cannot compute CLOCKS for state '" + id + "' (unreachable)"});
        return res;
      }
      s.clocks = it->second;
    }
  }

  res.doc = ParsedDocument{DocKind::Model, std::move(m)};
  return res;
}

namespace {

std::optional<Refusal> parse_refusal(Cursor& c) {
  Refusal r;
  if (c.try_word("TEMP")) {
    r.kind = RefusalKind::Temporary;
  } else if (c.try_word("PERM")) {
    r.kind = RefusalKind::Permanent;
  } else {
    c.error("expected TEMP(...) or PERM(...)");
    return std::nullopt;
  }
  c.expect_word("(");
  r.action = c.ident("action label");
  c.expect_word(",");
  r.clocks = c.name_set("clock name");
  c.expect_word(")");
  if (c.failed) return std::nullopt;
  return r;
}

}  // namespace

ParseResult parse_srg(const std::string& text) {
  ParseResult res;
  LineReader reader(text);
  if (reader.lines.empty()) {
    res.diagnostics.push_back({1, 1, "missing SRG header"});
    return res;
  }

  StochasticRefusalGraph g;
  bool header_seen = false;
  bool bad = false;

  for (const auto& [no, raw] : reader.lines) {
    Cursor c{raw, no, &res.diagnostics};
    if (!header_seen) {
      if (!c.try_word("SRG")) {
        res.diagnostics.push_back({no, 1, "missing SRG header"});
        return res;
      }
      g.name = c.ident("graph name");
      if (c.try_word("EXTENDED")) g.extended = true;
      header_seen = true;
      bad |= c.failed;
      continue;
    }
    if (c.try_word("ACTION")) {
      const Label label = c.ident("action label");
      c.expect_word("DIST");
      auto dist = parse_dist(c);
      if (!c.failed && dist) {
        if (!g.alphabet.emplace(label, *dist).second) c.error("duplicate ACTION '" + label + "'");
      }
    } else if (c.try_word("LOCALITY")) {
      SrgLocality loc;
      loc.id = c.ident("locality id");
      bool is_init = c.try_word("INIT");
      c.expect_word("CLOCKS");
      loc.clocks = c.name_set("clock name");
      if (!c.failed) {
        if (is_init) g.initial = loc.id;
        if (!g.localities.emplace(loc.id, loc).second) {
          c.error("duplicate LOCALITY '" + loc.id + "'");
        }
      }
    } else if (c.try_word("TRANS")) {
      SrgEdge e;
      e.source = c.ident("source locality");
      c.expect_word("->");
      e.target = c.ident("target locality");
      c.expect_word("ACTION");
      e.label = c.ident("action label");
      c.expect_word("CAUSES");
      e.causes = c.name_set("clock name");
      c.expect_word("CLOCK");
      e.fresh = c.ident("fresh clock");
      // REQUIRED narrows the timing guard of a union-cause merged edge; it
      // defaults to the full cause set.
      if (c.try_word("REQUIRED")) e.required = c.name_set("clock name");
      else e.required = e.causes;
      if (!c.failed) {
        check_transition_refs(c, g.alphabet, e.label);
        if (g.localities.count(e.source) == 0) c.error("undeclared locality '" + e.source + "'");
        if (g.localities.count(e.target) == 0) c.error("undeclared locality '" + e.target + "'");
      }
      if (!c.failed) g.edges.push_back(std::move(e));
    } else if (c.try_word("REFUSALS")) {
      const std::string id = c.ident("locality id");
      c.expect_word("=");
      std::set<RefusalSet> sets;
      while (!c.failed && c.try_word("[")) {
        RefusalSet set;
        if (!c.try_word("]")) {
          for (;;) {
            auto r = parse_refusal(c);
            if (c.failed) break;
            set.insert(*r);
            if (c.try_word("]")) break;
            c.expect_word(",");
            if (c.failed) break;
          }
        }
        if (!c.failed) sets.insert(std::move(set));
      }
      if (!c.failed) {
        auto it = g.localities.find(id);
        if (it == g.localities.end()) {
          c.error("undeclared locality '" + id + "'");
        } else {
          it->second.ref_srg = std::move(sets);
        }
      }
    } else if (c.try_word("FORB")) {
      const std::string id = c.ident("locality id");
      c.expect_word("=");
      auto labels = c.name_set("action label");
      if (!c.failed) {
        auto it = g.localities.find(id);
        if (it == g.localities.end()) {
          c.error("undeclared locality '" + id + "'");
        } else {
          it->second.forb = std::move(labels);
        }
      }
    } else {
      c.error("expected ACTION, LOCALITY, TRANS, REFUSALS, or FORB");
    }
    if (!c.failed && !c.at_end()) c.error("trailing input");
    bad |= c.failed;
  }
  if (bad) return res;
  if (g.initial.empty()) {
    res.diagnostics.push_back({1, 1, "no INIT locality"});
    return res;
  }
  res.doc = ParsedDocument{DocKind::Srg, std::move(g)};
  return res;
}

ParseResult parse_tester(const std::string& text) {
  ParseResult res;
  LineReader reader(text);
  if (reader.lines.empty()) {
    res.diagnostics.push_back({1, 1, "missing TESTER header"});
    return res;
  }

  Tester t;
  bool header_seen = false;
  bool bad = false;

  for (const auto& [no, raw] : reader.lines) {
    Cursor c{raw, no, &res.diagnostics};
    if (!header_seen) {
      if (!c.try_word("TESTER")) {
        res.diagnostics.push_back({no, 1, "missing TESTER header"});
        return res;
      }
      t.name = c.ident("tester name");
      header_seen = true;
      bad |= c.failed;
      continue;
    }
    if (c.try_word("ACTION")) {
      const Label label = c.ident("action label");
      c.expect_word("DIST");
      auto dist = parse_dist(c);
      if (!c.failed && dist) {
        if (!t.alphabet.emplace(label, *dist).second) c.error("duplicate ACTION '" + label + "'");
      }
    } else if (c.try_word("LOCALITY")) {
      TesterLocality loc;
      loc.id = c.ident("locality id");
      bool is_init = c.try_word("INIT");
      c.expect_word("VERDICT");
      if (c.try_word("pass")) {
        loc.verdict = Verdict::Pass;
      } else if (c.try_word("incon")) {
        loc.verdict = Verdict::Incon;
      } else if (c.try_word("fail")) {
        loc.verdict = Verdict::Fail;
      } else {
        c.error("expected verdict pass, incon, or fail");
      }
      if (c.try_word("INCON")) loc.incon_actions = c.name_set("action label");
      if (c.try_word("FROM")) loc.source_locality = c.ident("source locality");
      if (!c.failed) {
        if (is_init) t.initial = loc.id;
        if (loc.verdict == Verdict::Fail) t.fail_id = loc.id;
        if (!t.localities.emplace(loc.id, loc).second) {
          c.error("duplicate LOCALITY '" + loc.id + "'");
        }
      }
    } else if (c.try_word("EDGE")) {
      TesterEdge e;
      e.source = c.ident("source locality");
      c.expect_word("->");
      e.target = c.ident("target locality");
      c.expect_word("ACTION");
      e.label = c.ident("action label");
      c.expect_word("GUARD");
      if (c.try_word("normal")) {
        e.guard = GuardKind::Normal;
        c.expect_word("CAUSES");
        e.causes = c.name_set("clock name");
        c.expect_word("CLOCK");
        e.fresh = c.ident("fresh clock");
      } else if (c.try_word("premature")) {
        e.guard = GuardKind::Premature;
        c.expect_word("CAUSES");
        e.causes = c.name_set("clock name");
      } else if (c.try_word("forbidden")) {
        e.guard = GuardKind::Forbidden;
      } else {
        c.error("expected guard normal, premature, or forbidden");
      }
      if (!c.failed) {
        check_transition_refs(c, t.alphabet, e.label);
        if (t.localities.count(e.source) == 0) c.error("undeclared locality '" + e.source + "'");
        if (t.localities.count(e.target) == 0) c.error("undeclared locality '" + e.target + "'");
      }
      if (!c.failed) t.edges.push_back(std::move(e));
    } else {
      c.error("expected ACTION, LOCALITY, or EDGE");
    }
    if (!c.failed && !c.at_end()) c.error("trailing input");
    bad |= c.failed;
  }
  if (bad) return res;
  if (t.initial.empty()) {
    res.diagnostics.push_back({1, 1, "no INIT locality"});
    return res;
  }
  if (t.fail_id.empty()) {
    res.diagnostics.push_back({1, 1, "no fail locality"});
    return res;
  }
  res.doc = ParsedDocument{DocKind::Tester, std::move(t)};
  return res;
}

ParseResult parse_trace_corpus(const std::string& text) {
  ParseResult res;
  LineReader reader(text);
  if (reader.lines.empty()) {
    res.diagnostics.push_back({1, 1, "missing TRACES header"});
    return res;
  }
  std::vector<TimedTrace> corpus;
  bool header_seen = false;
  bool bad = false;
  for (const auto& [no, raw] : reader.lines) {
    Cursor c{raw, no, &res.diagnostics};
    if (!header_seen) {
      if (!c.try_word("TRACES")) {
        res.diagnostics.push_back({no, 1, "missing TRACES header"});
        return res;
      }
      header_seen = true;
      continue;
    }
    if (c.try_word("-") && c.at_end()) {
      corpus.push_back({});
      continue;
    }
    TimedTrace trace;
    while (!c.at_end() && !c.failed) {
      TimedStep step;
      step.label = c.ident("action label");
      c.expect_word("@");
      step.start = c.number("start time");
      c.expect_word("+");
      step.duration = c.number("duration");
      if (!c.failed) trace.push_back(std::move(step));
    }
    if (!c.failed) corpus.push_back(std::move(trace));
    bad |= c.failed;
  }
  if (bad) return res;
  res.doc = ParsedDocument{DocKind::TraceCorpus, std::move(corpus)};
  return res;
}

ParseResult parse_document(const std::string& text) {
  LineReader reader(text);
  if (reader.lines.empty()) {
    ParseResult res;
    res.diagnostics.push_back({1, 1, "empty document; expected MODEL, SRG, TESTER, or TRACES"});
    return res;
  }
  const std::string& first = reader.lines.front().second;
  Cursor c{first, reader.lines.front().first, nullptr};
  std::vector<Diagnostic> scratch;
  c.diags = &scratch;
  if (c.peek_word("MODEL")) return parse_model(text);
  if (c.peek_word("SRG")) return parse_srg(text);
  if (c.peek_word("TESTER")) return parse_tester(text);
  if (c.peek_word("TRACES")) return parse_trace_corpus(text);
  ParseResult res;
  res.diagnostics.push_back(
      {reader.lines.front().first, 1, "unknown document header; expected MODEL, SRG, TESTER, or TRACES"});
  return res;
}

namespace {

std::string set_text(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    if (!first) out += ",";
    out += x;
    first = false;
  }
  return out + "}";
}

}  // namespace

std::string print_model(const Mlsts& m) {
  std::ostringstream os;
  os << "MODEL " << m.name << "\n";
  for (const auto& [label, dist] : m.alphabet) {
    os << "ACTION " << label << " DIST " << dist_to_string(dist) << "\n";
  }
  for (const auto& [id, s] : m.states) {
    os << "STATE " << id;
    if (s.is_initial) os << " INIT";
    os << " CLOCKS " << set_text(s.clocks) << "\n";
  }
  for (const auto& t : m.transitions) {
    os << "TRANS " << t.source << " -> " << t.target << " ACTION " << t.label << " CAUSES "
       << set_text(t.causes) << " CLOCK " << t.fresh << "\n";
  }
  return os.str();
}

std::string print_srg(const StochasticRefusalGraph& g) {
  std::ostringstream os;
  os << "SRG " << g.name;
  if (g.extended) os << " EXTENDED";
  os << "\n";
  for (const auto& [label, dist] : g.alphabet) {
    os << "ACTION " << label << " DIST " << dist_to_string(dist) << "\n";
  }
  for (const auto& [id, loc] : g.localities) {
    os << "LOCALITY " << id;
    if (id == g.initial) os << " INIT";
    os << " CLOCKS " << set_text(loc.clocks) << "\n";
  }
  for (const auto& e : g.edges) {
    os << "TRANS " << e.source << " -> " << e.target << " ACTION " << e.label << " CAUSES "
       << set_text(e.causes) << " CLOCK " << e.fresh;
    if (e.required != e.causes) os << " REQUIRED " << set_text(e.required);
    os << "\n";
  }
  for (const auto& [id, loc] : g.localities) {
    if (loc.ref_srg.empty()) continue;
    os << "REFUSALS " << id << " =";
    for (const auto& set : loc.ref_srg) {
      os << " [";
      bool first = true;
      for (const auto& r : set) {
        if (!first) os << ",";
        os << refusal_to_string(r);
        first = false;
      }
      os << "]";
    }
    os << "\n";
  }
  for (const auto& [id, loc] : g.localities) {
    if (loc.forb.empty()) continue;
    os << "FORB " << id << " = " << set_text(loc.forb) << "\n";
  }
  return os.str();
}

namespace {

void print_tester_edge(std::ostringstream& os, const TesterEdge& e) {
  os << "EDGE " << e.source << " -> " << e.target << " ACTION " << e.label << " GUARD ";
  switch (e.guard) {
    case GuardKind::Normal:
      os << "normal CAUSES " << set_text(e.causes) << " CLOCK " << e.fresh;
      break;
    case GuardKind::Premature:
      os << "premature CAUSES " << set_text(e.causes);
      break;
    case GuardKind::Forbidden:
      os << "forbidden";
      break;
  }
  os << "\n";
}

}  // namespace

std::string print_tester(const Tester& t) {
  std::ostringstream os;
  os << "TESTER " << t.name << "\n";
  for (const auto& [label, dist] : t.alphabet) {
    os << "ACTION " << label << " DIST " << dist_to_string(dist) << "\n";
  }
  for (const auto& [id, loc] : t.localities) {
    os << "LOCALITY " << id;
    if (id == t.initial) os << " INIT";
    os << " VERDICT " << verdict_to_string(loc.verdict);
    if (!loc.incon_actions.empty()) os << " INCON " << set_text(loc.incon_actions);
    if (loc.source_locality) os << " FROM " << *loc.source_locality;
    os << "\n";
  }
  for (const auto& e : t.edges) print_tester_edge(os, e);
  return os.str();
}

std::string print_trace_corpus(const std::vector<TimedTrace>& traces) {
  std::ostringstream os;
  os << "TRACES\n";
  for (const auto& trace : traces) {
    if (trace.empty()) {
      os << "-\n";  // keeps empty runs distinct from blank lines
      continue;
    }
    bool first = true;
    for (const auto& step : trace) {
      if (!first) os << " ";
      os << step.label << "@" << fmt_double(step.start) << "+" << fmt_double(step.duration);
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

std::string print_test_case(const TestCase& tc) {
  std::ostringstream os;
  os << "TESTCASE\n";
  for (const auto& e : tc.steps) print_tester_edge(os, e);
  os << "VERDICT " << verdict_to_string(tc.terminal_verdict) << "\n";
  return os.str();
}

}  // namespace srgtest
