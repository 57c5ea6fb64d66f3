// epcount: command-line front end for the counting and analysis library.
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "epq/classifier.hpp"
#include "epq/counting.hpp"
#include "epq/equivalence.hpp"
#include "epq/errors.hpp"
#include "epq/expansion.hpp"
#include "epq/random_instances.hpp"
#include "epq/reductions.hpp"
#include "json.hpp"

using namespace epq;
using nlohmann::json;

namespace {

// Thrown for unreadable input files; reported like a parse error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EpFormula load_formula(const std::string& path, const std::string& name) {
  FormulaFile file = parse_formula_file(slurp(path), path);
  if (file.queries.empty()) throw InputError(path + ": no query found");
  if (name.empty()) return file.queries.front();
  for (auto& q : file.queries)
    if (q.name() == name) return q;
  throw InputError(path + ": no query named '" + name + "'");
}

std::vector<EpFormula> load_all(const std::vector<std::string>& paths) {
  std::vector<EpFormula> out;
  for (const auto& path : paths) {
    FormulaFile file = parse_formula_file(slurp(path), path);
    if (file.queries.empty()) throw InputError(path + ": no query found");
    out.insert(out.end(), file.queries.begin(), file.queries.end());
  }
  return out;
}

Structure load_structure(const std::string& path, const Signature& sig) {
  return with_signature(parse_structure(slurp(path), sig, path), sig);
}

json structure_json(const Structure& s) {
  json rels = json::object();
  for (const auto& [name, tuples] : s.relations()) {
    json list = json::array();
    for (const auto& t : tuples) {
      json row = json::array();
      for (Element e : t) row.push_back(s.name_of(e));
      list.push_back(row);
    }
    rels[name] = list;
  }
  return {{"universe", s.elements()}, {"relations", rels}};
}

json sum_json(const WeightedPpSum& sum) {
  json terms = json::array();
  for (const auto& t : sum.terms)
    terms.push_back({{"coefficient", t.coefficient.str()}, {"formula", canonical_text(t.formula)}});
  return {{"lib", sum.lib}, {"terms", terms}};
}

std::string mapping_text(const PpFormula& p, const PpFormula& q, const Mapping& h) {
  std::string out;
  for (Element e = 0; e < h.size(); ++e) {
    if (!out.empty()) out += ", ";
    out += p.structure().name_of(e) + "->" + q.structure().name_of(h[e]);
  }
  return out;
}

struct Options {
  bool json = false;
  std::string query;
  std::string engine = "ep";
  std::string mode = "counting";
  bool witness = false;
  bool plus = false;
  int width = 1;
  std::string direction = "ep2pp";
  std::uint64_t seed = 1;
  int cases = 200;
  std::string first, second;
  std::vector<std::string> files;
};

void emit(const Options& opt, const json& doc, const std::string& text) {
  if (opt.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

int cmd_count(const Options& opt) {
  EpFormula phi = load_formula(opt.files.at(0), opt.query);
  Structure b = load_structure(opt.files.at(1), phi.signature());
  BigInt n;
  if (opt.engine == "brute") {
    n = brute_force_count(phi, b);
  } else if (opt.engine == "pp") {
    n = count_pp(to_structure_view(phi), b);
  } else {
    n = count_ep(phi, b);
  }
  emit(opt, {{"query", phi.name()}, {"engine", opt.engine}, {"count", n.str()}}, n.str());
  return 0;
}

int cmd_equiv(const Options& opt) {
  PpFormula p = to_structure_view(load_formula(opt.files.at(0), opt.query));
  PpFormula q = to_structure_view(load_formula(opt.files.at(1), opt.query));
  EquivalenceVerdict v;
  if (opt.mode == "logical") {
    v = logically_equivalent(p, q);
  } else if (opt.mode == "semi") {
    v = semi_counting_equivalent(p, q, opt.witness);
  } else {
    v = counting_equivalent(p, q, opt.witness);
  }
  json doc{{"mode", opt.mode}, {"equivalent", v.equivalent}};
  std::string text = v.equivalent ? "equivalent" : "not equivalent";
  if (!v.note.empty()) doc["note"] = v.note;
  if (v.equivalent && v.forward && opt.mode == "counting") {
    std::string pairs;
    json bij = json::array();
    for (const auto& [a, b] : lib_bijection(p, q, *v.forward)) {
      if (!pairs.empty()) pairs += ", ";
      pairs += a + "↔" + b;
      bij.push_back({a, b});
    }
    text += " (renaming witness: " + pairs + ")";
    doc["renaming"] = bij;
  } else if (v.equivalent && opt.witness && v.forward && v.backward) {
    text += "\nforward: " + mapping_text(p, q, *v.forward) + "\nbackward: " + mapping_text(q, p, *v.backward);
    doc["forward"] = mapping_text(p, q, *v.forward);
    doc["backward"] = mapping_text(q, p, *v.backward);
  }
  if (!v.equivalent && !v.note.empty()) text += " (" + v.note + ")";
  if (v.distinguisher) {
    BigInt cp = count_pp(p, *v.distinguisher), cq = count_pp(q, *v.distinguisher);
    text += "\ncounts " + cp.str() + " vs " + cq.str() + " on\n" + serialize_structure(*v.distinguisher, "D");
    doc["distinguisher"] = structure_json(*v.distinguisher);
    doc["counts"] = {cp.str(), cq.str()};
  }
  emit(opt, doc, text);
  return 0;
}

int cmd_expand(const Options& opt) {
  EpFormula phi = load_formula(opt.files.at(0), opt.query);
  DisjunctiveEp d = normalize_ep(phi);
  if (!opt.plus) {
    WeightedPpSum sum = star_expansion(d);
    emit(opt, sum_json(sum), serialize(sum));
    return 0;
  }
  PlusSet plus = plus_set(d);
  WeightedPpSum minus = plus.minus_sum();
  std::string text = serialize(minus);
  json sentences = json::array();
  for (const auto& s : plus.sentences) {
    text += "sentence " + canonical_text(s) + "\n";
    sentences.push_back(canonical_text(s));
  }
  json dropped = json::array();
  for (std::size_t i = 0; i < plus.af_star.terms.size(); ++i)
    if (!plus.in_minus[i]) dropped.push_back(canonical_text(plus.af_star.terms[i].formula));
  emit(opt, {{"minus", sum_json(minus)}, {"sentences", sentences}, {"entailing_sentence", dropped}}, text);
  return 0;
}

int cmd_normalize(const Options& opt) {
  EpFormula phi = load_formula(opt.files.at(0), opt.query);
  DisjunctiveEp d = normalize_ep(phi);
  json disjuncts = json::array();
  for (const auto& p : d.disjuncts)
    disjuncts.push_back({{"formula", canonical_text(p)}, {"sentence", p.is_sentence()}});
  emit(opt, {{"query", phi.name()}, {"lib", d.lib}, {"disjuncts", disjuncts}},
       format_query(to_ep_formula(d, phi.name())));
  return 0;
}

int cmd_core(const Options& opt) {
  EpFormula phi = load_formula(opt.files.at(0), opt.query);
  DisjunctiveEp d = normalize_ep(phi);
  std::string text;
  json cores = json::array();
  for (std::size_t i = 0; i < d.disjuncts.size(); ++i) {
    Structure c = core_of_formula(d.disjuncts[i]);
    text += serialize_structure(c, "core" + std::to_string(i + 1));
    cores.push_back({{"formula", canonical_text(d.disjuncts[i])}, {"core", structure_json(c)}});
  }
  emit(opt, {{"query", phi.name()}, {"cores", cores}}, text);
  return 0;
}

int cmd_classify(const Options& opt) {
  if (opt.width < 0) throw PreconditionViolation("--width must be at least 0");
  StructuralReport r = classify_set(load_all(opt.files), opt.width);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"id", row.id},
                    {"formula", row.formula},
                    {"tw_core", row.tw_core.upper},
                    {"tw_core_exact", row.tw_core.exact},
                    {"tw_contract", row.tw_contract.upper},
                    {"tw_contract_exact", row.tw_contract.exact},
                    {"exists_components", row.exists_components}});
  }
  emit(opt,
       {{"width", r.width},
        {"rows", rows},
        {"max_tw_core", r.max_tw_core},
        {"max_tw_contract", r.max_tw_contract},
        {"case", r.trichotomy_case}},
       format_report(r));
  return 0;
}

int cmd_distinguish(const Options& opt) {
  std::vector<PpFormula> phis;
  // Disjunctive queries contribute their normalized disjuncts.
  for (const auto& phi : load_all(opt.files)) {
    if (!contains_disjunction(phi.body())) {
      phis.push_back(to_structure_view(phi));
      continue;
    }
    for (const auto& p : normalize_ep(phi).disjuncts) phis.push_back(p);
  }
  Structure c = joint_distinguishing_structure(phis);
  std::string text = serialize_structure(c, "C");
  json counts = json::array();
  for (const auto& p : phis) {
    BigInt n = count_pp(p, c);
    text += "# " + n.str() + "  " + canonical_text(p) + "\n";
    counts.push_back({{"formula", canonical_text(p)}, {"count", n.str()}});
  }
  auto classes = semi_counting_classes(phis);
  emit(opt, {{"structure", structure_json(c)}, {"counts", counts}, {"classes", classes}}, text);
  return 0;
}

int cmd_oracle_demo(const Options& opt) {
  EpFormula phi = load_formula(opt.files.at(0), opt.query);
  Structure b = load_structure(opt.files.at(1), phi.signature());
  DisjunctiveEp d = normalize_ep(phi);
  PlusSet plus = plus_set(d);
  auto members = plus.members();
  OracleTranscript transcript;
  std::string text;
  json results = json::array();
  if (opt.direction == "ep2pp") {
    std::vector<CountOracle> oracles;
    for (std::size_t i = 0; i < members.size(); ++i) {
      EpFormula m = to_ep_formula(members[i]);
      oracles.push_back(
          transcript.wrap("pp" + std::to_string(i + 1), [m](const Structure& s) { return brute_force_count(m, s); }));
    }
    BigInt n = ep_count_from_pp_oracle(d, plus, b, oracles);
    text += "count " + n.str() + "\n";
    results.push_back({{"formula", phi.name()}, {"count", n.str()}});
  } else {
    CountOracle oracle = transcript.wrap("ep", [phi](const Structure& s) { return brute_force_count(phi, s); });
    RecoveryPlan minus = plan_recovery(plus.minus_sum());
    for (std::size_t i = 0; i < members.size(); ++i) {
      BigInt n = pp_count_from_ep_oracle(i, d, plus, b, oracle, AnchorChoice::OwnStructure, &minus);
      text += n.str() + "  " + canonical_text(members[i]) + "\n";
      results.push_back({{"formula", canonical_text(members[i])}, {"count", n.str()}});
    }
  }
  json calls = json::array();
  for (const auto& c : transcript.calls()) {
    text += "call " + c.label + " |D|=" + std::to_string(c.universe_size) + " -> " + c.answer.str() + "\n";
    calls.push_back({{"oracle", c.label}, {"universe_size", c.universe_size}, {"answer", c.answer.str()}});
  }
  emit(opt, {{"direction", opt.direction}, {"results", results}, {"transcript", calls}}, text);
  return 0;
}

// --- selftest ------------------------------------------------------------------------

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
};

using Suite = std::function<std::string(std::mt19937_64&)>;  // empty string: passed

SuiteResult run_suite(const std::string& name, const Suite& check, std::uint64_t seed, int cases) {
  SuiteResult r{name};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    ++r.cases;
    std::string why;
    try {
      why = check(rng);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (!why.empty()) {
      if (r.failures++ == 0) r.first_failure = why;
    }
  }
  return r;
}

int cmd_selftest(const Options& opt) {
  const Signature sig = edge_and_colour_signature();
  RandomShape shape;
  std::vector<std::pair<std::string, Suite>> suites{
      {"count_pp vs brute force",
       [&](std::mt19937_64& rng) {
         PpFormula p = random_pp(sig, shape, rng);
         Structure b = random_small_structure(sig, 4, rng);
         return count_pp(p, b) == brute_force_count(to_ep_formula(p), b) ? "" : from_structure_view(p);
       }},
      {"count_ep vs brute force",
       [&](std::mt19937_64& rng) {
         EpFormula phi = random_ep_tree(sig, 1 + rng() % 3, 4, rng);
         Structure b = random_small_structure(sig, 4, rng);
         return count_ep(phi, b) == brute_force_count(phi, b) ? "" : format_query(phi);
       }},
      {"normalization keeps counts",
       [&](std::mt19937_64& rng) {
         RandomShape s = shape;
         s.sentence_rate = 0.3;
         EpFormula phi = random_disjunctive_ep(sig, s, rng);
         Structure b = random_small_structure(sig, 3, rng);
         DisjunctiveEp d = normalize_ep(phi);
         if (!is_normalized(d)) return format_query(phi) + " (not normalized)";
         return brute_force_count(to_ep_formula(d), b) == brute_force_count(phi, b) ? "" : format_query(phi);
       }},
      {"component product",
       [&](std::mt19937_64& rng) {
         PpFormula p = random_pp(sig, shape, rng);
         Structure b = random_small_structure(sig, 3, rng);
         BigInt product = 1;
         for (const auto& c : components(p)) product *= count_pp(c, b);
         return product == count_pp(p, b) ? "" : from_structure_view(p);
       }},
      {"counting verdicts",
       [&](std::mt19937_64& rng) {
         RandomShape s = shape;
         s.max_lib = 2;
         PpFormula p = random_pp(sig, s, rng);
         PpFormula q = random_pp(sig, s, rng);
         auto v = counting_equivalent(p, q, true);
         if (v.equivalent) {
           for (int k = 0; k < 5; ++k) {
             Structure b = random_small_structure(sig, 3, rng);
             if (count_pp(p, b) != count_pp(q, b)) return from_structure_view(p) + " vs " + from_structure_view(q);
           }
           return std::string();
         }
         if (!v.distinguisher || count_pp(p, *v.distinguisher) == count_pp(q, *v.distinguisher))
           return from_structure_view(p) + " vs " + from_structure_view(q) + " (bad distinguisher)";
         return std::string();
       }},
      {"EP count from pp oracles",
       [&](std::mt19937_64& rng) {
         RandomShape s = shape;
         s.max_disjuncts = 2;
         s.max_lib = 2;
         s.sentence_rate = 0.3;
         DisjunctiveEp d = normalize_ep(random_disjunctive_ep(sig, s, rng));
         PlusSet plus = plus_set(d);
         std::vector<CountOracle> oracles;
         for (const auto& m : plus.members()) oracles.push_back([m](const Structure& x) { return count_pp(m, x); });
         Structure b = random_small_structure(sig, 3, rng);
         EpFormula phi = to_ep_formula(d);
         return ep_count_from_pp_oracle(d, plus, b, oracles) == brute_force_count(phi, b) ? "" : format_query(phi);
       }},
  };
  std::vector<std::future<SuiteResult>> running;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    running.push_back(std::async(std::launch::async, run_suite, suites[i].first, suites[i].second, opt.seed + i,
                                 opt.cases));
  }
  bool ok = true;
  std::string text;
  json doc = json::array();
  for (auto& f : running) {
    SuiteResult r = f.get();
    ok = ok && r.failures == 0;
    text += (r.failures == 0 ? "ok    " : "FAIL  ") + r.name + ": " + std::to_string(r.cases) + " cases, " +
            std::to_string(r.failures) + " failures\n";
    if (r.failures) text += "      first: " + r.first_failure + "\n";
    doc.push_back({{"suite", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"first_failure", r.first_failure}});
  }
  emit(opt, {{"seed", opt.seed}, {"suites", doc}, {"ok", ok}}, text);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting answers to existential positive queries"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "Emit a JSON document instead of text");

  auto* count = app.add_subcommand("count", "Count answers of a query on a structure");
  count->add_option("formula", opt.first, "")->required();
  count->add_option("structure", opt.second, "")->required();
  count->add_option("--engine", opt.engine, "brute, pp or ep")->check(CLI::IsMember({"brute", "pp", "ep"}));

  auto* equiv = app.add_subcommand("equiv", "Decide an equivalence between two pp-queries");
  equiv->add_option("f1", opt.first, "")->required();
  equiv->add_option("f2", opt.second, "")->required();
  equiv->add_option("--mode", opt.mode, "logical, counting or semi")
      ->check(CLI::IsMember({"logical", "counting", "semi"}));
  equiv->add_flag("--witness", opt.witness, "Show homomorphisms or a distinguishing structure");

  auto* expand = app.add_subcommand("expand", "Inclusion-exclusion expansion");
  expand->add_option("formula", opt.first, "")->required();
  expand->add_flag("--plus", opt.plus, "Show the plus set instead of the full expansion");

  auto* normalize = app.add_subcommand("normalize", "Disjunctive normal form with sentence pruning");
  normalize->add_option("formula", opt.first, "")->required();

  auto* core = app.add_subcommand("core", "Core of each disjunct");
  core->add_option("formula", opt.first, "")->required();

  auto* classify = app.add_subcommand("classify", "Treewidth report and case under a width bound");
  classify->add_option("formulas", opt.files, "")->required();
  classify->add_option("--width", opt.width, "Width threshold")->check(CLI::NonNegativeNumber);

  auto* distinguish = app.add_subcommand("distinguish", "Joint distinguishing structure");
  distinguish->add_option("formulas", opt.files, "")->required();

  auto* demo = app.add_subcommand("oracle-demo", "Run a reduction against a brute-force oracle");
  demo->add_option("formula", opt.first, "")->required();
  demo->add_option("structure", opt.second, "")->required();
  demo->add_option("--direction", opt.direction, "ep2pp: EP count from pp oracles; pp2ep: pp counts from an EP oracle")
      ->check(CLI::IsMember({"ep2pp", "pp2ep"}));

  auto* selftest = app.add_subcommand("selftest", "Randomized property checks");
  selftest->add_option("--seed", opt.seed, "");
  selftest->add_option("--cases", opt.cases, "Cases per suite")->check(CLI::PositiveNumber);

  for (auto* sub : {count, expand, normalize, core, demo})
    sub->add_option("--query", opt.query, "Query name (default: the first)");
  equiv->add_option("--query", opt.query, "Query name in both files (default: the first)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!opt.first.empty()) opt.files = {opt.first, opt.second};

  const std::map<CLI::App*, std::function<int(const Options&)>> handlers{
      {count, cmd_count},       {equiv, cmd_equiv},       {expand, cmd_expand},
      {normalize, cmd_normalize}, {core, cmd_core},         {classify, cmd_classify},
      {distinguish, cmd_distinguish}, {demo, cmd_oracle_demo}, {selftest, cmd_selftest},
  };
  try {
    for (const auto& [sub, run] : handlers)
      if (sub->parsed()) return run(opt);
  } catch (const ParseError& e) {
    std::cerr << "epcount: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "epcount: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "epcount: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
