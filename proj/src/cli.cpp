#include "ppgen/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "ppgen/carlitz.hpp"
#include "ppgen/fibonacci.hpp"
#include "ppgen/grouptools.hpp"
#include "ppgen/moebius.hpp"
#include "ppgen/treelab.hpp"

namespace ppgen::cli {
namespace {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

struct Output {
  u32 prime = 0;
  std::optional<u64> seed;
  Json conventions = Json::object();
  Json fields = Json::object();
  std::optional<std::string> text;  // replaces the key: value listing in text mode
  std::optional<std::string> csv;   // replaces the single-row table in csv mode
};

Json base_conventions() {
  Json c = Json::object();
  c["composition"] = "(f g)(x) = f(g(x))";
  c["words"] = "tokens apply left to right";
  c["cycles"] = "points 0..p-1, fixed points omitted, identity ()";
  return c;
}

Json form_json(const CarlitzForm& f) {
  Json j = Json::object();
  j["lead"] = f.lead();
  j["shifts"] = f.shifts();
  j["inversions"] = f.inversions();
  return j;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_g(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Strings print bare; everything else as compact JSON.
std::string plain(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string csv_cell(const Json& v) {
  std::string s = plain(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void emit(const Output& o, const std::string& subcommand, Format format, bool with_timestamp, std::ostream& out) {
  Json meta = Json::object();
  meta["version"] = kVersion;
  meta["subcommand"] = subcommand;
  meta["p"] = o.prime;
  meta["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  Json conv = base_conventions();
  for (const auto& [k, v] : o.conventions.items()) conv[k] = v;
  meta["conventions"] = conv;
  if (with_timestamp) meta["generated_at"] = timestamp();

  if (format == Format::Json) {
    Json doc = Json::object();
    doc["schema"] = 1;
    doc["meta"] = meta;
    for (const auto& [k, v] : o.fields.items()) doc[k] = v;
    out << doc.dump(2) << '\n';
    return;
  }

  out << "# schema: 1\n";
  for (const auto& [k, v] : meta.items()) {
    if (k == "conventions") {
      for (const auto& [ck, cv] : v.items()) out << "# convention." << ck << ": " << plain(cv) << '\n';
    } else {
      out << "# " << k << ": " << plain(v) << '\n';
    }
  }
  if (format == Format::Text) {
    if (o.text) {
      out << *o.text;
    } else {
      for (const auto& [k, v] : o.fields.items()) out << k << ": " << plain(v) << '\n';
    }
    return;
  }
  if (o.csv) {
    out << *o.csv;
    return;
  }
  std::string header, row;
  for (const auto& [k, v] : o.fields.items()) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += k;
    row += csv_cell(v);
  }
  out << header << '\n' << row << '\n';
}

LeadSet parse_lead_set(const std::string& s) {
  if (s == "any") return LeadSet::Any;
  if (s == "one") return LeadSet::One;
  return LeadSet::PlusMinusOne;
}

const char* lead_set_name(LeadSet l) {
  switch (l) {
    case LeadSet::Any:
      return "any";
    case LeadSet::One:
      return "one";
    case LeadSet::PlusMinusOne:
      break;
  }
  return "pm1";
}

struct TreeArgs {
  u64 p = 0;
  unsigned depth = 0;
  bool exhaustive = false;
  std::optional<u64> samples;
  std::optional<u64> seed;
  std::string type;
  std::string bits_file;
  std::string test = "z";
  std::string labeling = "shift-last";
  u64 budget = TreeOptions{}.leaf_budget;
};

Output tree_experiment(const TreeArgs& a, unsigned threads) {
  const PrimeModulus m(a.p);
  if (a.exhaustive == a.samples.has_value()) throw UsageError("give exactly one of --exhaustive or --samples");
  if (a.samples && !a.seed) throw UsageError("--samples needs --seed");
  if (a.exhaustive && a.seed) throw UsageError("--seed only applies to sampled runs");

  TreeOptions opts;
  opts.threads = threads;
  opts.leaf_budget = a.budget;
  opts.labeling = a.labeling == "inversion-last" ? TypeLabeling::InversionLast : TypeLabeling::ShiftLast;
  const TestMethod method = a.test == "exact" ? TestMethod::ExactBinomial
                            : a.test == "runs" ? TestMethod::Runs
                                               : TestMethod::ZTest;
  const ExperimentMode mode = a.exhaustive ? ExperimentMode::Exhaustive : ExperimentMode::Sampled;

  const TreeBits bits = a.exhaustive ? exhaustive_scan(m, a.depth, opts) : sample_paths(m, a.depth, *a.samples, *a.seed, opts).bits;

  std::vector<LeafType> types;
  if (a.type.empty()) {
    types = {LeafType::First, LeafType::Second, LeafType::Both};
  } else {
    types = {a.type == "first" ? LeafType::First : a.type == "second" ? LeafType::Second : LeafType::Both};
  }

  const std::string convention = std::string(to_string(opts.labeling)) + ";depth=shift-blocks";
  const std::string rng = a.exhaustive ? "none" : kSamplerId;

  Output o;
  o.prime = m.value();
  o.seed = a.seed;
  o.conventions["leaf"] = to_string(opts.labeling);
  o.conventions["depth"] = "number of shift blocks";
  o.conventions["test"] = to_string(method);

  std::ostringstream csv, bit_lines;
  csv << "prime,depth,type,mode,n,ones,p_two,p_less,p_greater,convention,rng\n";
  Json records = Json::array();
  for (LeafType t : types) {
    const std::vector<std::uint8_t> seq = bits.select(t);
    const ExperimentRecord rec = make_record(m, a.depth, t, mode, seq, a.seed);
    const TestResult r = method == TestMethod::Runs ? runs_test(seq)
                                                   : proportion_test(rec.n_success, rec.n_observations, 0.5, method);
    csv << rec.prime << ',' << rec.depth << ',' << to_string(t) << ',' << to_string(mode) << ','
        << rec.n_observations << ',' << rec.n_success << ',' << format_g(r.p_two_sided) << ','
        << format_g(r.p_less) << ',' << format_g(r.p_greater) << ',' << convention << ',' << rng << '\n';
    Json j = Json::object();
    j["prime"] = rec.prime;
    j["depth"] = rec.depth;
    j["type"] = to_string(t);
    j["mode"] = to_string(mode);
    j["n"] = rec.n_observations;
    j["ones"] = rec.n_success;
    // NaN is not valid JSON
    auto num = [](double x) { return std::isnan(x) ? Json(nullptr) : Json(x); };
    j["p_two"] = num(r.p_two_sided);
    j["p_less"] = num(r.p_less);
    j["p_greater"] = num(r.p_greater);
    j["statistic"] = num(r.statistic);
    j["convention"] = convention;
    j["rng"] = rng;
    records.push_back(j);
    for (std::uint8_t b : seq) bit_lines << static_cast<char>('0' + b);
    bit_lines << '\n';
  }
  o.fields["records"] = records;
  o.csv = csv.str();
  o.text = csv.str();

  if (!a.bits_file.empty()) {
    std::ofstream f(a.bits_file);
    if (!f) throw UsageError("cannot open " + a.bits_file + " for writing");
    f << bit_lines.str();
    if (!f) throw DomainError("failed writing " + a.bits_file);
  }
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permutation polynomials over prime fields: generation, Carlitz rank, measures and tree experiments"};
  app.name("ppgen");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string format_name;
  unsigned threads = 1;
  bool no_timestamp = false;
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", no_timestamp, "Omit generated_at from the metadata");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  u64 p = 0;
  auto add_p = [&](CLI::App* s) { s->add_option("--p", p, "Odd prime")->required(); };

  bool adjoin_negation = false;
  CLI::App* verify = sub("verify-theorem", "Order and verdict of the group generated by x+1 and x^(p-2)");
  add_p(verify);
  verify->add_flag("--adjoin-negation", adjoin_negation, "Also adjoin x -> -x");

  std::string perm_text;
  bool weak = false;
  unsigned max_n = 6;
  std::string lead_set;
  u64 state_budget = RankSearchOptions{}.state_budget;
  CLI::App* rank = sub("rank", "Exact (weak) Carlitz rank by layered search");
  add_p(rank);
  rank->add_option("--perm", perm_text, "Cycle notation, e.g. \"(0 1)(2 3)\"")->required();
  rank->add_flag("--weak", weak, "Restrict the innermost multiplier");
  rank->add_option("--max-n", max_n, "Largest number of inversion layers searched");
  rank->add_option("--lead-set", lead_set, "Innermost multipliers allowed for --weak")
      ->check(CLI::IsMember({"one", "pm1", "any"}));
  rank->add_option("--budget", state_budget, "State budget");

  bool lemma = false;
  std::string word_text;
  CLI::App* word = sub("word", "Evaluate a word in S<k> and D");
  add_p(word);
  auto* lemma_opt = word->add_flag("--lemma", lemma, "Use the built-in word for (0 1)(2 3)");
  auto* word_opt = word->add_option("--word", word_text, "Tokens such as \"D S3 D S-1\"");
  lemma_opt->excludes(word_opt);

  CLI::App* meas = sub("measures", "Linearity, weight, degree and rank lower bounds");
  add_p(meas);
  meas->add_option("--perm", perm_text, "Cycle notation")->required();

  u64 alpha = 0;
  CLI::App* linear = sub("check-linear-theorem", "Exhaustive alpha-linearity check of forms with up to 4 layers");
  add_p(linear);
  linear->add_option("--alpha", alpha)->required();

  CLI::App* fib = sub("fib-cycle", "Cycle of the iterated inversion-plus-alpha map");
  add_p(fib);
  fib->add_option("--alpha", alpha)->required();

  TreeArgs tree;
  CLI::App* tree_cmd = sub("tree-exp", "Same-cycle experiments on the inverse tree");
  tree_cmd->add_option("--p", tree.p)->required();
  tree_cmd->add_option("--depth", tree.depth)->required();
  tree_cmd->add_flag("--exhaustive", tree.exhaustive);
  tree_cmd->add_option("--samples", tree.samples)->check(CLI::PositiveNumber);
  tree_cmd->add_option("--seed", tree.seed);
  tree_cmd->add_option("--type", tree.type)->check(CLI::IsMember({"first", "second", "both"}));
  tree_cmd->add_option("--bits", tree.bits_file, "Write the bit strings, one line per type");
  tree_cmd->add_option("--test", tree.test)->check(CLI::IsMember({"z", "exact", "runs"}));
  tree_cmd->add_option("--labeling", tree.labeling, "Which leaf is called first type")
      ->check(CLI::IsMember({"shift-last", "inversion-last"}));
  tree_cmd->add_option("--budget", tree.budget, "Leaf budget for --exhaustive");

  CLI::App* count = sub("count-perms", "Number of distinct permutations x^d + c");
  add_p(count);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("ppgen");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();

  try {
    Format format = Format::Json;
    if (name == "word" || name == "count-perms") format = Format::Text;
    if (name == "tree-exp") format = Format::Csv;
    if (format_name == "json") format = Format::Json;
    if (format_name == "csv") format = Format::Csv;
    if (format_name == "text") format = Format::Text;

    Output o;
    if (chosen == verify) {
      const PrimeModulus m(p);
      const GenerationVerdict v = verify_generation(m, adjoin_negation);
      o.prime = v.prime;
      o.fields["prime"] = v.prime;
      o.fields["verdict"] = to_string(v.verdict);
      o.fields["order"] = v.order.str();
      o.fields["witness_odd"] = v.witness_odd ? Json(to_cycle_string(*v.witness_odd)) : Json(nullptr);
      o.conventions["generators"] = adjoin_negation ? "x+1, x^(p-2), -x" : "x+1, x^(p-2)";
    } else if (chosen == rank) {
      const PrimeModulus m(p);
      const Permutation target = parse_cycles(perm_text, m);
      const LeadSet leads = !weak ? LeadSet::Any : lead_set.empty() ? LeadSet::One : parse_lead_set(lead_set);
      if (!weak && !lead_set.empty() && lead_set != "any") throw UsageError("--lead-set needs --weak");
      RankSearchOptions opts;
      opts.state_budget = state_budget;
      const RankResult r = rank_search(target, max_n, leads, opts);
      o.prime = m.value();
      o.fields["perm"] = to_cycle_string(target);
      o.fields["weak"] = weak;
      o.fields["lead_set"] = lead_set_name(leads);
      o.fields["max_n"] = max_n;
      o.fields["rank"] = r.rank ? Json(*r.rank) : Json(nullptr);
      o.fields["certified_exact"] = r.certified_exact;
      o.fields["witness_coefficients"] = r.witness ? form_json(*r.witness) : Json(nullptr);
      o.fields["states_explored"] = r.states_explored;
      o.conventions["form"] = "y = lead*x + s0, then y = y^(p-2) + s_k for k = 1..n";
    } else if (chosen == word) {
      if (!lemma && word_opt->count() == 0) throw UsageError("give --lemma or --word");
      const PrimeModulus m(p);
      const SigmaDeltaWord w = lemma ? lemma_word(m) : SigmaDeltaWord::parse(word_text, m);
      const std::string cycles = to_cycle_string(word_eval(w));
      o.prime = m.value();
      o.fields["word"] = w.to_string();
      o.fields["inversions"] = w.inversion_count();
      o.fields["cycles"] = cycles;
      o.text = cycles + "\n";
    } else if (chosen == meas) {
      const PrimeModulus m(p);
      const Permutation f = parse_cycles(perm_text, m);
      const MeasureReport r = measures(f);
      o.prime = m.value();
      o.fields["perm"] = to_cycle_string(f);
      o.fields["linearity"] = r.linearity;
      o.fields["weight"] = r.weight;
      o.fields["degree"] = r.degree;
      o.fields["bound_from_linearity"] = r.bound_from_linearity;
      o.fields["bound_from_degree"] = r.bound_from_degree;
      o.fields["bound_from_weight"] = r.bound_from_weight ? Json(*r.bound_from_weight) : Json(nullptr);
    } else if (chosen == linear) {
      const PrimeModulus m(p);
      const AlphaLinearCheck r = check_alpha_linear_theorem(m, m.reduce(static_cast<i64>(alpha % m.value())), threads);
      o.prime = m.value();
      o.fields["alpha"] = alpha % m.value();
      o.fields["holds"] = r.holds;
      o.fields["counterexample"] = r.counterexample ? form_json(*r.counterexample) : Json(nullptr);
      o.fields["forms_checked"] = r.forms_checked;
    } else if (chosen == fib) {
      const PrimeModulus m(p);
      const FieldElement a(m, static_cast<i64>(alpha % m.value()));
      if (a.is_zero()) throw UsageError("alpha must be nonzero mod p");
      const FibCycleReport r = iterate_check(a);
      o.prime = r.prime;
      o.fields["alpha"] = r.alpha;
      o.fields["prime"] = r.prime;
      o.fields["ramified"] = r.ramified;
      o.fields["n_zero"] = r.n_zero ? Json(*r.n_zero) : Json(nullptr);
      if (!r.ramified) o.fields["ratio_order"] = ratio_order(a);
      o.fields["hypothesis_met"] = r.hypothesis_met;
      o.fields["divides_p2_minus_1"] = r.divides_p2_minus_1;
      o.fields["successor_identity"] = r.successor_identity;
      o.fields["cycle_matches"] = r.cycle_matches;
      o.fields["cycle"] = to_cycle_string(r.cycle);
      o.fields["predicted"] = to_cycle_string(r.predicted);
      o.conventions["fibonacci"] = "F0 = 0, F1 = 1, F(n+1) = alpha F(n) + F(n-1)";
    } else if (chosen == tree_cmd) {
      o = tree_experiment(tree, threads);
    } else {
      const PrimeModulus m(p);
      const u64 n = count_distinct_fdc(m);
      o.prime = m.value();
      o.fields["count"] = n;
      o.fields["cosets"] = coset_count(m);
      o.text = std::to_string(n) + "\n";
    }
    emit(o, name, format, !no_timestamp, out);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ppgen::cli
