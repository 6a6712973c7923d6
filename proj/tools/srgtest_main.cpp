#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srgtest/conformance.hpp"
#include "srgtest/dot.hpp"
#include "srgtest/parse.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srgtest;

namespace {

constexpr const char* kVersion = "srgtest 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot open " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw CliError{kExitUsage, "cannot write " + path};
  out << content;
}

void report_diagnostics(const std::string& path, const std::vector<Diagnostic>& diags,
                        bool as_json) {
  if (as_json) {
    json j = json::array();
    for (const auto& d : diags) {
      j.push_back({{"file", path}, {"line", d.line}, {"col", d.col}, {"message", d.message}});
    }
    std::cerr << json{{"diagnostics", j}}.dump(2) << "\n";
  } else {
    for (const auto& d : diags) {
      std::cerr << path << ":" << d.line << ":" << d.col << ": error: " << d.message << "\n";
    }
  }
}

ParsedDocument load_document(const std::string& path, bool as_json) {
  auto res = parse_document(read_file(path));
  if (!res.ok()) {
    report_diagnostics(path, res.diagnostics, as_json);
    throw CliError{kExitUsage, "parse failed: " + path};
  }
  return std::move(*res.doc);
}

Mlsts load_model(const std::string& path, bool as_json) {
  auto doc = load_document(path, as_json);
  if (doc.kind != DocKind::Model) throw CliError{kExitUsage, path + " is not a MODEL document"};
  return std::get<Mlsts>(std::move(doc.payload));
}

StochasticRefusalGraph load_srg(const std::string& path, bool as_json) {
  auto doc = load_document(path, as_json);
  if (doc.kind != DocKind::Srg) throw CliError{kExitUsage, path + " is not an SRG document"};
  return std::get<StochasticRefusalGraph>(std::move(doc.payload));
}

Tester load_tester(const std::string& path, bool as_json) {
  auto doc = load_document(path, as_json);
  if (doc.kind != DocKind::Tester) throw CliError{kExitUsage, path + " is not a TESTER document"};
  return std::get<Tester>(std::move(doc.payload));
}

// Optional key = value file for defaults; flags override.
struct Defaults {
  std::uint64_t seed = 1;
  int depth = 6;
  std::string comparator = "same-mean";
  double alpha = 0.01;
  int unfold = 64;
  int runs = 2000;
};

Defaults load_defaults(int argc, char** argv) {
  Defaults d;
  std::string path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") path = argv[i + 1];
  }
  if (path.empty()) return d;
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot open config " + path};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key >> eq >> value) || eq != "=") continue;
    if (key == "seed") d.seed = std::stoull(value);
    else if (key == "depth") d.depth = std::stoi(value);
    else if (key == "comparator") d.comparator = value;
    else if (key == "alpha") d.alpha = std::stod(value);
    else if (key == "unfold") d.unfold = std::stoi(value);
    else if (key == "runs") d.runs = std::stoi(value);
    else throw CliError{kExitUsage, "unknown config key '" + key + "'"};
  }
  return d;
}

LeqComparator::Kind comparator_kind(const std::string& name) {
  if (name == "same-mean") return LeqComparator::Kind::SameMean;
  if (name == "ks") return LeqComparator::Kind::KsEquivalent;
  if (name == "exact") return LeqComparator::Kind::AnalyticExact;
  throw CliError{kExitUsage, "unknown comparator '" + name + "' (same-mean, ks, exact)"};
}

json report_to_json(const ConformanceReport& rep) {
  json traces = json::array();
  for (const auto& tc : rep.trace_checks) {
    json jt{{"trace", tc.trace}, {"in_impl", tc.in_impl}, {"forb_ok", tc.forb_ok}};
    if (tc.ref_ok) {
      jt["ref_ok"] = *tc.ref_ok;
    } else {
      jt["ref_ok"] = "unchecked";
    }
    traces.push_back(std::move(jt));
  }
  json durations = json::array();
  for (const auto& dc : rep.duration_checks) {
    durations.push_back({{"action", dc.action},
                         {"outcome", cmp_outcome_to_string(dc.outcome)},
                         {"samples", dc.samples}});
  }
  return json{{"conforms", rep.conforms},
              {"depth", rep.depth},
              {"runs", rep.runs},
              {"comparator", rep.comparator},
              {"traces", std::move(traces)},
              {"durations", std::move(durations)},
              {"pass_runs", rep.pass_runs},
              {"incon_runs", rep.incon_runs},
              {"fail_runs", rep.fail_runs}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MLSTS refusal-graph toolchain: determinization, stochastic refusal graphs, "
               "canonical testers, and conformance checks"};
  app.set_version_flag("--version", kVersion);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable diagnostics and results");
  std::string config_path;
  app.add_option("--config", config_path, "key = value defaults file");

  Defaults defs;
  try {
    defs = load_defaults(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check model well-formedness");
  std::string val_input;
  bool lenient = false;
  cmd_validate->add_option("model", val_input)->required();
  cmd_validate->add_flag("--lenient-clock-flow", lenient,
                         "downgrade the clock-flow rule to a warning");

  // determinize
  auto* cmd_det = app.add_subcommand("determinize", "remove non-deterministic choices");
  std::string det_input, det_out, det_dot;
  int det_unfold = defs.unfold;
  cmd_det->add_option("model", det_input)->required();
  cmd_det->add_option("--max-unfold", det_unfold, "unfolding bound per class");
  cmd_det->add_option("-o,--output", det_out);
  cmd_det->add_option("--dot", det_dot);

  // srg
  auto* cmd_srg = app.add_subcommand("srg", "build the stochastic refusal graph");
  std::string srg_input, srg_out, srg_dot;
  bool no_minimize = false, do_extend = false;
  int srg_unfold = defs.unfold;
  cmd_srg->add_option("model", srg_input)->required();
  cmd_srg->add_flag("--no-minimize", no_minimize);
  cmd_srg->add_flag("--extend", do_extend, "add forbidden-action sets");
  cmd_srg->add_option("--max-unfold", srg_unfold);
  cmd_srg->add_option("-o,--output", srg_out);
  cmd_srg->add_option("--dot", srg_dot);

  // tester
  auto* cmd_tester = app.add_subcommand("tester", "build the canonical tester");
  std::string tester_input, tester_out, tester_dot;
  cmd_tester->add_option("srg", tester_input)->required();
  cmd_tester->add_option("-o,--output", tester_out);
  cmd_tester->add_option("--dot", tester_dot);

  // testcases
  auto* cmd_cases = app.add_subcommand("testcases", "extract test cases from a tester");
  std::string cases_input, cases_out;
  int cases_random = 0, cases_maxlen = 0;
  std::uint64_t cases_seed = defs.seed;
  bool cases_enumerate = false;
  cmd_cases->add_option("tester", cases_input)->required();
  cmd_cases->add_option("--random", cases_random, "number of random cases");
  cmd_cases->add_flag("--enumerate", cases_enumerate, "enumerate all bounded cases");
  cmd_cases->add_option("--seed", cases_seed);
  cmd_cases->add_option("--max-len", cases_maxlen)->required();
  cmd_cases->add_option("-o,--output", cases_out, "output directory")->required();

  // conform
  auto* cmd_conform = app.add_subcommand("conform", "check implementation conformance");
  std::string conf_spec, conf_impl, conf_cmp = defs.comparator, conf_report;
  double conf_alpha = defs.alpha;
  int conf_runs = defs.runs, conf_depth = defs.depth;
  std::uint64_t conf_seed = defs.seed;
  cmd_conform->add_option("spec", conf_spec)->required();
  cmd_conform->add_option("impl", conf_impl, "implementation model or TRACES file")->required();
  cmd_conform->add_option("--cmp", conf_cmp, "same-mean | ks | exact");
  cmd_conform->add_option("--alpha", conf_alpha);
  cmd_conform->add_option("--runs", conf_runs);
  cmd_conform->add_option("--depth", conf_depth);
  cmd_conform->add_option("--seed", conf_seed);
  cmd_conform->add_option("--report", conf_report, "write the JSON report here");

  // dot
  auto* cmd_dot = app.add_subcommand("dot", "export any document as graphviz");
  std::string dot_input, dot_out;
  cmd_dot->add_option("file", dot_input)->required();
  cmd_dot->add_option("-o,--output", dot_out);

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_validate) {
      Mlsts m = load_model(val_input, as_json);
      auto violations = validate(m, {lenient});
      if (as_json) {
        json j = json::array();
        for (const auto& v : violations) {
          j.push_back({{"rule", v.rule}, {"subject", v.subject}, {"detail", v.detail}});
        }
        std::cout << json{{"valid", violations.empty()}, {"violations", j}}.dump(2) << "\n";
      } else {
        for (const auto& v : violations) {
          std::cout << v.rule << ": " << v.subject
                    << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
        }
        std::cout << (violations.empty() ? "valid" : "invalid") << "\n";
      }
      return violations.empty() ? kExitOk : kExitVerdict;
    }

    if (*cmd_det) {
      Mlsts m = load_model(det_input, as_json);
      auto det = determinize(m, {det_unfold});
      const std::string out = print_model(det.model);
      if (det_out.empty()) std::cout << out;
      else write_file(det_out, out);
      if (!det_dot.empty()) write_file(det_dot, export_dot(det.model));
      return kExitOk;
    }

    if (*cmd_srg) {
      Mlsts m = load_model(srg_input, as_json);
      auto srg = build_srg(m, {srg_unfold});
      if (!no_minimize) srg = minimize_srg(std::move(srg));
      if (do_extend) srg = extend_srg(std::move(srg));
      const std::string out = print_srg(srg);
      if (srg_out.empty()) std::cout << out;
      else write_file(srg_out, out);
      if (!srg_dot.empty()) write_file(srg_dot, export_dot(srg));
      return kExitOk;
    }

    if (*cmd_tester) {
      auto srg = load_srg(tester_input, as_json);
      Tester t = build_tester(srg);
      const std::string out = print_tester(t);
      if (tester_out.empty()) std::cout << out;
      else write_file(tester_out, out);
      if (!tester_dot.empty()) write_file(tester_dot, export_dot(t));
      return kExitOk;
    }

    if (*cmd_cases) {
      if (cases_enumerate == (cases_random > 0)) {
        throw CliError{kExitUsage, "choose exactly one of --random N or --enumerate"};
      }
      Tester t = load_tester(cases_input, as_json);
      std::vector<TestCase> cases;
      if (cases_enumerate) {
        cases = enumerate_test_cases(t, cases_maxlen);
      } else {
        for (int i = 0; i < cases_random; ++i) {
          cases.push_back(extract_random_test_case(t, cases_seed + static_cast<std::uint64_t>(i),
                                                   {cases_maxlen, 1.0}));
        }
      }
      fs::create_directories(cases_out);
      json manifest = json::array();
      for (std::size_t i = 0; i < cases.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "case_%05zu.testcase", i);
        write_file((fs::path(cases_out) / name).string(), print_test_case(cases[i]));
        manifest.push_back({{"file", name},
                            {"length", cases[i].steps.size()},
                            {"terminal_verdict", verdict_to_string(cases[i].terminal_verdict)}});
      }
      write_file((fs::path(cases_out) / "manifest.json").string(),
                 json{{"tester", t.name}, {"cases", manifest}}.dump(2) + "\n");
      std::cout << cases.size() << " test cases written to " << cases_out << "\n";
      return kExitOk;
    }

    if (*cmd_conform) {
      Mlsts spec = load_model(conf_spec, as_json);
      ConformanceOptions opts;
      opts.comparator = {comparator_kind(conf_cmp), conf_alpha, 30};
      opts.depth = conf_depth;
      opts.runs = conf_runs;
      opts.seed = conf_seed;

      auto impl_doc = load_document(conf_impl, as_json);
      ConformanceReport rep;
      if (impl_doc.kind == DocKind::Model) {
        rep = check_conformance(spec, std::get<Mlsts>(impl_doc.payload), opts);
      } else if (impl_doc.kind == DocKind::TraceCorpus) {
        rep = check_conformance(spec, std::get<std::vector<TimedTrace>>(impl_doc.payload), opts);
      } else {
        throw CliError{kExitUsage, conf_impl + " must be a MODEL or TRACES document"};
      }
      const json j = report_to_json(rep);
      if (!conf_report.empty()) write_file(conf_report, j.dump(2) + "\n");
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << (rep.conforms ? "conforms" : "does not conform") << " (depth " << rep.depth
                  << ", " << rep.comparator << "); runs: " << rep.pass_runs << " pass, "
                  << rep.incon_runs << " incon, " << rep.fail_runs << " fail\n";
      }
      return rep.conforms ? kExitOk : kExitVerdict;
    }

    if (*cmd_dot) {
      auto doc = load_document(dot_input, as_json);
      std::string out;
      switch (doc.kind) {
        case DocKind::Model: out = export_dot(std::get<Mlsts>(doc.payload)); break;
        case DocKind::Srg: out = export_dot(std::get<StochasticRefusalGraph>(doc.payload)); break;
        case DocKind::Tester: out = export_dot(std::get<Tester>(doc.payload)); break;
        case DocKind::TraceCorpus:
          throw CliError{kExitUsage, "TRACES documents have no graph form"};
      }
      if (dot_out.empty()) std::cout << out;
      else write_file(dot_out, out);
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
