// Command-line front end: parsing, translation, model checking, automata
// utilities, the succinctness experiment and the example corpus.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "roctl/check.hpp"
#include "roctl/corpus.hpp"
#include "roctl/deviants.hpp"
#include "roctl/dfa2ltl.hpp"
#include "roctl/formula.hpp"
#include "roctl/fsa.hpp"
#include "roctl/modelcheck.hpp"
#include "roctl/oracle.hpp"
#include "roctl/pipeline.hpp"
#include "roctl/qctl.hpp"
#include "roctl/succinct.hpp"
#include "roctl/tableau.hpp"

#ifndef ROCTL_DATA_DIR
#define ROCTL_DATA_DIR "data"
#endif

namespace {

using nlohmann::json;
using namespace roctl;

constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kInput = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "human";
  bool structured() const { return format == "structured"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text wins; otherwise the file is read.
std::string formula_text(const std::string& inline_text, const std::string& file) {
  if (!inline_text.empty() && !file.empty()) throw UsageError("give a formula inline or from a file, not both");
  if (!file.empty()) {
    std::string s = read_file(file);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
  }
  if (inline_text.empty()) throw UsageError("a formula is required");
  return inline_text;
}

Dialect dialect_from(const std::string& s) {
  if (s == "ltl") return Dialect::Ltl;
  if (s == "ctl" || s == "ctlstar") return Dialect::CtlStar;
  if (s == "qctl" || s == "qctlstar") return Dialect::QctlStar;
  if (s == "roctl" || s == "roctlstar") return Dialect::RoctlStar;
  if (s == "altl") return Dialect::Altl;
  throw UsageError("unknown dialect '" + s + "'");
}

void emit(const Options& o, const json& j, const std::string& human) {
  if (o.structured())
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
}

// ---- parse ---------------------------------------------------------------

struct ParseArgs {
  std::string formula, file, dialect = "roctl";
};

int run_parse(const Options& o, const ParseArgs& a) {
  Dialect d = dialect_from(a.dialect);
  Formula f = parse_formula(formula_text(a.formula, a.file), d);
  std::string r = render_formula(f);
  json j{{"formula", r}, {"dialect", dialect_name(d)}, {"length", length(f)}, {"normalized", render_formula(normalize(f))}};
  emit(o, j, r + "\n");
  return 0;
}

// ---- translate -----------------------------------------------------------

struct TranslateArgs {
  std::string formula, file, to;
  bool sat = false;
};

int run_translate(const Options& o, const TranslateArgs& a) {
  Formula f = parse_formula(formula_text(a.formula, a.file), Dialect::RoctlStar);
  json j{{"input", render_formula(f)}, {"target", a.to}};
  std::string out;
  if (a.to == "qctl") {
    Formula g = a.sat ? qctl_sat_wrapper(f) : to_qctl(f);
    out = render_formula(g);
    j["length"] = length(g);
  } else if (a.to == "altl") {
    AltlTranslation t = to_altl(f);
    out = render_formula(t.formula);
    j["length"] = length(t.formula);
    json defs = json::object();
    for (const auto& [name, def] : t.table.definitions()) defs[name] = render_formula(def);
    j["definitions"] = defs;
    json devs = json::array();
    for (const auto& [fsa, d] : t.table.deviations())
      devs.push_back({{"states", fsa->num_states()}, {"triggers", d.triggers}});
    j["deviationAutomata"] = devs;
    if (!o.structured()) {
      std::ostringstream os;
      os << out << "\n";
      for (const auto& [name, def] : t.table.definitions()) os << "  " << name << " := " << render_formula(def) << "\n";
      for (const auto& [fsa, d] : t.table.deviations())
        os << "  deviation automaton: " << fsa->num_states() << " states, " << d.triggers.size() << " triggers\n";
      std::cout << os.str();
      return 0;
    }
  } else if (a.to == "ctl") {
    Formula g = a.sat ? to_ctlstar_sat(f) : to_ctlstar(f);
    out = render_formula(g);
    j["length"] = length(g);
    j["dagSize"] = dag_size(g);
  } else {
    throw UsageError("--to must be one of qctl, altl, ctl");
  }
  j["output"] = out;
  emit(o, j, out + "\n");
  return 0;
}

// ---- check ---------------------------------------------------------------

struct CheckArgs {
  std::string model, formula, file, at, strategy = "both";
  bool path = false;
  bool oracle = false;
};

int run_check(const Options& o, const CheckArgs& a) {
  if (a.at.empty() == !a.path) throw UsageError("exactly one of --at WORLD and --path is required");
  Structure m = load_structure(a.model);
  Formula f = parse_formula(formula_text(a.formula, a.file), Dialect::RoctlStar);
  Anchor anchor;
  if (a.path) {
    if (!m.path) throw StructureError("the model declares no \"path\"");
    anchor = Anchor::on(*m.path);
  } else {
    anchor = Anchor::at(m.require(a.at));
  }
  std::vector<Strategy> strategies;
  if (a.strategy == "both")
    strategies = {Strategy::Translate, Strategy::AutomatonDirect};
  else
    try {
      strategies = {parse_strategy(a.strategy)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

  json results = json::array();
  std::ostringstream human;
  std::optional<bool> first;
  bool disagree = false;
  for (Strategy s : strategies) {
    Verdict v = check_roctl(m, anchor, f, s);
    results.push_back(v.to_json(m));
    human << strategy_name(s) << ": " << (v.verdict ? "true" : "false");
    if (v.witness) human << "  witness " << lasso_to_string(m, *v.witness);
    human << "\n";
    if (first && *first != v.verdict) disagree = true;
    first = v.verdict;
  }
  json j = strategies.size() == 1 ? results[0] : json{{"verdict", *first}, {"results", results}};
  if (a.oracle) {
    Oracle orc(m);
    bool ov = anchor.path ? orc.path(*anchor.path, f) : orc.world(*anchor.world, f);
    j["oracle"] = {{"verdict", ov}, {"exact", orc.exact()}};
    human << "oracle: " << (ov ? "true" : "false") << (orc.exact() ? "" : " (within bounds)") << "\n";
  }
  if (disagree) {
    j["disagreement"] = true;
    human << "strategies disagree\n";
  }
  if (!o.structured() && strategies.size() == 1 && !a.oracle) {
    std::cout << (*first ? "true" : "false") << "\n";
    return disagree ? kMismatch : 0;
  }
  emit(o, j, human.str());
  return disagree ? kMismatch : 0;
}

// ---- automaton -----------------------------------------------------------

struct AutomatonArgs {
  std::string op, formula, fsa;
};

json fsa_summary(const Fsa& a) {
  return {{"states", a.num_states()},
          {"deterministic", is_deterministic(a)},
          {"complete", is_complete(a)},
          {"counterFree", is_counter_free(a)}};
}

int run_automaton(const Options& o, const AutomatonArgs& a) {
  if (a.formula.empty() == a.fsa.empty()) throw UsageError("exactly one of --formula and --fsa is required");
  std::optional<Tableau> tab;
  FsaPtr loaded;
  if (!a.fsa.empty()) {
    json j;
    try {
      j = json::parse(read_file(a.fsa));
    } catch (const json::exception& e) {
      throw FsaError(std::string("malformed automaton file: ") + e.what());
    }
    loaded = std::make_shared<const Fsa>(fsa_from_json(j));
  } else {
    tab = build_aphi(parse_formula(a.formula, Dialect::Altl));
    loaded = tab->automaton;
  }
  const Fsa& input = *loaded;

  json j;
  std::ostringstream human;
  if (a.op == "build") {
    j = fsa_to_json(input);
    j["summary"] = fsa_summary(input);
    human << j.dump(2) << "\n";
  } else if (a.op == "det") {
    Fsa d = determinise(input);
    j = fsa_to_json(d);
    j["summary"] = fsa_summary(d);
    human << j.dump(2) << "\n";
  } else if (a.op == "cfcheck") {
    bool cf = is_counter_free(input);
    j = {{"counterFree", cf}, {"states", input.num_states()}};
    human << (cf ? "counter-free" : "not counter-free") << "\n";
  } else if (a.op == "toltl") {
    Formula out;
    std::size_t states = 0;
    if (tab) {
      // A formula's tableau has no acceptance; translate the prefix
      // existence of its deviation automaton instead.
      DeviationAutomaton dev = build_deviation_automaton(*tab);
      out = prefix_existence_lift(dev);
      states = dev.automaton->num_states();
    } else {
      WilkeResult w = wilke_translate(is_deterministic(input) ? input : determinise(input));
      out = w.formula;
      states = w.states;
    }
    j = {{"formula", render_formula(out)}, {"length", length(out)}, {"dagSize", dag_size(out)}, {"states", states}};
    human << render_formula(out) << "\n";
  } else {
    throw UsageError("--op must be one of build, det, cfcheck, toltl");
  }
  emit(o, j, human.str());
  return 0;
}

// ---- succinct ------------------------------------------------------------

struct SuccinctArgs {
  int height = 1, labels = 2;
  std::string family = "f", strategy = "automaton-direct";
  bool no_checker = false;
  unsigned threads = 0;
};

int run_succinct(const Options& o, const SuccinctArgs& a) {
  ExperimentOptions opt;
  if (a.family == "f")
    opt.family = Family::F;
  else if (a.family == "fprime")
    opt.family = Family::FPrime;
  else
    throw UsageError("--family must be f or fprime");
  try {
    opt.strategy = parse_strategy(a.strategy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opt.run_checker = !a.no_checker;
  opt.threads = a.threads;
  ExperimentReport r;
  try {
    r = experiment(a.height, a.labels, opt);
  } catch (const SuccinctError& e) {
    throw UsageError(e.what());
  }
  emit(o, r.to_json(), r.to_text());
  return r.agrees() ? 0 : kMismatch;
}

// ---- examples ------------------------------------------------------------

struct ExamplesArgs {
  std::string name, data_dir = ROCTL_DATA_DIR;
};

int run_examples(const Options& o, const ExamplesArgs& a) {
  std::vector<std::string> names;
  if (a.name.empty()) {
    names = example_names();
  } else {
    const auto& all = example_names();
    if (std::find(all.begin(), all.end(), a.name) == all.end())
      throw UsageError("unknown example '" + a.name + "'");
    names = {a.name};
  }
  json out = json::array();
  std::ostringstream human;
  bool ok = true;
  for (const auto& n : names) {
    Example ex = load_example(a.data_dir, n);
    ExampleResult r = run_example(ex);
    ok = ok && r.ok();
    out.push_back(r.to_json(ex.model));
    human << n << ": " << (r.ok() ? "ok" : "MISMATCH") << "\n";
    for (const auto& c : r.claims) {
      human << "  " << (c.ok() ? "ok  " : "FAIL") << "  " << c.claim.formula << "  @ "
            << (c.claim.world ? ex.model.world(*c.claim.world).id : lasso_to_string(ex.model, *c.claim.path))
            << "  expected " << c.claim.expected << ", oracle " << c.oracle << (c.oracle_exact ? "" : "~")
            << ", translate " << c.translate << ", direct " << c.direct << "\n";
    }
  }
  emit(o, json{{"ok", ok}, {"examples", out}}, human.str());
  return ok ? 0 : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RoCTL* toolkit: parse, translate and model check robustness formulas"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"human", "structured"}))
      ->capture_default_str();

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Parse and pretty-print a formula");
  parse->add_option("formula", pa.formula, "Formula text");
  parse->add_option("--file", pa.file, "Read the formula from a file");
  parse->add_option("--dialect", pa.dialect, "ltl, ctl, qctl, roctl or altl")->capture_default_str();

  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "Translate a RoCTL* formula");
  translate->add_option("formula", ta.formula, "Formula text");
  translate->add_option("--file", ta.file, "Read the formula from a file");
  translate->add_option("--to", ta.to, "Target: qctl, altl or ctl")->required();
  translate->add_flag("--sat", ta.sat, "Wrap for satisfiability (qctl, ctl)");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Model check a RoCTL* formula on a structure");
  check->add_option("--model", ca.model, "Structure file (JSON)")->required();
  check->add_option("--formula", ca.formula, "Formula text");
  check->add_option("--formula-file", ca.file, "Read the formula from a file");
  check->add_option("--at", ca.at, "World to evaluate at (some fullpath from it)");
  check->add_flag("--path", ca.path, "Evaluate on the fullpath declared in the model");
  check->add_option("--strategy", ca.strategy, "translate, automaton-direct or both")->capture_default_str();
  check->add_flag("--oracle", ca.oracle, "Also run the direct-semantics oracle");

  AutomatonArgs aa;
  auto* automaton = app.add_subcommand("automaton", "Automaton utilities");
  automaton->add_option("--op", aa.op, "build, det, cfcheck or toltl")->required();
  automaton->add_option("--formula", aa.formula, "ALTL formula whose tableau is used");
  automaton->add_option("--fsa", aa.fsa, "Automaton file (JSON)");

  SuccinctArgs sa;
  auto* succinct = app.add_subcommand("succinct", "Run the utree isomorphism experiment");
  succinct->add_option("--height", sa.height, "Tree height")->required()->check(CLI::NonNegativeNumber);
  succinct->add_option("--labels", sa.labels, "Number of label atoms")->required()->check(CLI::NonNegativeNumber);
  succinct->add_option("--family", sa.family, "f or fprime")->capture_default_str();
  succinct->add_option("--strategy", sa.strategy, "Checker strategy")->capture_default_str();
  succinct->add_flag("--no-checker", sa.no_checker, "Only run the oracle");
  succinct->add_option("--threads", sa.threads, "Worker threads (0: all cores)");

  ExamplesArgs ea;
  auto* examples = app.add_subcommand("examples", "Check the example corpus against expected verdicts");
  examples->add_option("name", ea.name, "Run a single example");
  examples->add_option("--data-dir", ea.data_dir, "Directory holding examples/ and models/")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse) return run_parse(opt, pa);
    if (*translate) return run_translate(opt, ta);
    if (*check) return run_check(opt, ca);
    if (*automaton) return run_automaton(opt, aa);
    if (*succinct) return run_succinct(opt, sa);
    if (*examples) return run_examples(opt, ea);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
