#include "srgtest/dot.hpp"

#include <sstream>

namespace srgtest {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

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

void edge_line(std::ostringstream& os, const std::string& src, const std::string& dst,
               const std::string& label) {
  os << "  \"" << escape(src) << "\" -> \"" << escape(dst) << "\" [label=\"" << escape(label)
     << "\"];\n";
}

}  // namespace

std::string export_dot(const Mlsts& m) {
  std::ostringstream os;
  os << "digraph \"" << escape(m.name) << "\" {\n  rankdir=TB;\n  node [shape=ellipse];\n";
  for (const auto& [id, s] : m.states) {
    os << "  \"" << escape(id) << "\" [label=\"" << escape(id) << "\\n" << escape(set_text(s.clocks))
       << "\"";
    if (s.is_initial) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& t : m.transitions) {
    edge_line(os, t.source, t.target, t.label + " " + set_text(t.causes) + " +" + t.fresh);
  }
  os << "}\n";
  return os.str();
}

std::string export_dot(const StochasticRefusalGraph& g) {
  std::ostringstream os;
  os << "digraph \"" << escape(g.name) << "\" {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& [id, loc] : g.localities) {
    std::string label = id + "\\n" + set_text(loc.clocks);
    for (const auto& set : loc.ref_srg) {
      label += "\\n[";
      bool first = true;
      for (const auto& r : set) {
        if (!first) label += ",";
        label += refusal_to_string(r);
        first = false;
      }
      label += "]";
    }
    if (!loc.forb.empty()) label += "\\nForb=" + set_text(loc.forb);
    os << "  \"" << escape(id) << "\" [label=\"" << escape(label) << "\"";
    if (id == g.initial) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    edge_line(os, e.source, e.target, e.label + " " + set_text(e.causes) + " +" + e.fresh);
  }
  os << "}\n";
  return os.str();
}

std::string export_dot(const Tester& t) {
  std::ostringstream os;
  os << "digraph \"" << escape(t.name) << "\" {\n  rankdir=TB;\n  node [shape=box, style=filled];\n";
  for (const auto& [id, loc] : t.localities) {
    const char* color = "palegreen";
    if (loc.verdict == Verdict::Fail) {
      color = "indianred1";
    } else if (!loc.incon_actions.empty()) {
      color = "orange";
    }
    std::string label = id + "\\n" + verdict_to_string(loc.verdict);
    if (!loc.incon_actions.empty()) label += "\\nincon=" + set_text(loc.incon_actions);
    os << "  \"" << escape(id) << "\" [label=\"" << escape(label) << "\", fillcolor=" << color;
    if (id == t.initial) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : t.edges) {
    std::string label = e.label;
    switch (e.guard) {
      case GuardKind::Normal: label += " " + set_text(e.causes); break;
      case GuardKind::Premature: label += " premature " + set_text(e.causes); break;
      case GuardKind::Forbidden: label += " forbidden"; break;
    }
    edge_line(os, e.source, e.target, label);
  }
  os << "}\n";
  return os.str();
}

}  // namespace srgtest
