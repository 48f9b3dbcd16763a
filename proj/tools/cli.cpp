#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "undesign/db.hpp"
#include "undesign/design.hpp"
#include "undesign/lpg.hpp"

namespace undesign::cli {
namespace {

using nlohmann::json;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string params_path;
  double budget_m = 1e10;
  long budget_n = 100000;
  int budget_k = 100;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string db_path;
  std::string format = "text";
  std::string out_path;

  const ParameterSet& params() {
    if (params_path.empty()) return default_parameters();
    if (!loaded) {
      std::ifstream in(params_path);
      if (!in) throw DataError("cannot read parameter file " + params_path);
      loaded = std::make_unique<ParameterSet>(load_parameters(in));
    }
    return *loaded;
  }
  SearchBudget budget() const {
    SearchBudget b;
    b.M = budget_m;
    b.N = budget_n;
    b.K = budget_k;
    return b;
  }
  int thread_count() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("UNDESIGN_THREADS")) {
      int t = std::atoi(env);
      if (t > 0) return t;
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  std::unique_ptr<ParameterSet> loaded;
};

std::string kcal(Energy e) {
  if (e >= kInf) return "inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << e / 100.0;
  return s.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<StructureRecord> read_structures(const std::string& path) {
  if (path == "-") return read_structure_records(std::cin);
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  return read_structure_records(in);
}

// A structure given inline, or a file of records when the argument names one.
std::vector<StructureRecord> structures_arg(const std::string& arg) {
  if (arg.find_first_not_of("().") == std::string::npos) return {{"input", parse_dotbracket(arg)}};
  return read_structures(arg);
}

// "dotbracket|loops=..." or a standalone shape with "[]".
Motif motif_arg(const std::string& text) {
  if (text.find('|') != std::string::npos) return parse_motif(text);
  return embed_standalone(text).motif;
}

std::string positions(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

std::string pairs_text(const std::vector<Pair>& ps) {
  std::string s;
  for (std::size_t k = 0; k < ps.size(); ++k)
    s += (k ? " " : "") + std::string("(") + std::to_string(ps[k].first) + "," + std::to_string(ps[k].second) + ")";
  return s;
}

void cmd_decompose(Common& c, const std::string& input, std::ostream& out) {
  for (const auto& rec : structures_arg(input)) {
    const auto& y = rec.structure;
    auto loops = decompose_loops(y);
    if (c.format == "json") {
      json j{{"id", rec.id}, {"structure", to_dotbracket(y)}, {"loops", json::array()}};
      for (std::size_t k = 0; k < loops.size(); ++k) {
        const Loop& l = loops[k];
        json pl = json::array();
        for (auto [i, jj] : l.pairs) pl.push_back({i, jj});
        j["loops"].push_back({{"id", k},
                              {"kind", loop_name(l.kind)},
                              {"pairs", pl},
                              {"critical", critical_positions(l, y.length(), false)}});
      }
      out << j.dump() << '\n';
      continue;
    }
    if (c.format == "dot") {
      out << build_graph(y).to_dot();
      continue;
    }
    out << "# " << rec.id << '\t' << to_dotbracket(y) << '\n';
    for (std::size_t k = 0; k < loops.size(); ++k) {
      const Loop& l = loops[k];
      out << k << '\t' << loop_name(l.kind) << '\t' << pairs_text(l.pairs) << '\t'
          << positions(critical_positions(l, y.length(), false)) << '\n';
    }
  }
}

void cmd_energy(Common& c, const std::string& seq, const std::string& db, std::ostream& out) {
  Sequence x(seq);
  auto y = parse_dotbracket(db);
  if (x.length() != y.length()) throw DataError("sequence and structure lengths differ");
  const auto& p = c.params();
  auto loops = decompose_loops(y);
  Energy total = structure_energy(p, x, y);
  if (c.format == "json") {
    json j{{"sequence", x.str()}, {"structure", db}, {"energy", total}, {"loops", json::array()}};
    for (std::size_t k = 0; k < loops.size(); ++k)
      j["loops"].push_back({{"id", k}, {"kind", loop_name(loops[k].kind)}, {"energy", loop_energy(p, loops[k], x)}});
    out << j.dump() << '\n';
    return;
  }
  for (std::size_t k = 0; k < loops.size(); ++k)
    out << k << '\t' << loop_name(loops[k].kind) << '\t' << pairs_text(loops[k].pairs) << '\t'
        << kcal(loop_energy(p, loops[k], x)) << '\n';
  out << "total\t" << kcal(total) << " kcal/mol\n";
}

void cmd_fold(Common& c, const std::string& seq, const std::string& constraint, std::ostream& out) {
  Sequence x(seq);
  FoldConstraint fc = constraint.empty() ? FoldConstraint::unconstrained(x.length()) : FoldConstraint::parse(constraint);
  if (fc.n != x.length()) throw DataError("constraint and sequence lengths differ");
  FoldResult r = fold_constrained(c.params(), x, fc);
  if (c.format == "json") {
    json j{{"sequence", x.str()},
           {"structure", to_dotbracket(r.structure)},
           {"mfe", r.mfe},
           {"cooptimal", r.cooptimal}};
    j["alternative"] = r.alternative ? json(to_dotbracket(*r.alternative)) : json(nullptr);
    out << j.dump() << '\n';
    return;
  }
  out << x.str() << '\n' << to_dotbracket(r.structure) << " (" << kcal(r.mfe) << ")";
  if (r.cooptimal) out << " cooptimal";
  out << '\n';
}

void cmd_canon(Common& c, const std::string& text, std::ostream& out) {
  Motif m = motif_arg(text);
  CanonicalForm cf = canonical_form(m);
  if (c.format == "dot") {
    out << motif_subgraph(m).to_dot();
  } else if (c.format == "json") {
    out << json{{"motif", m.str()}, {"canonical", cf.canonical}, {"length", cf.length}, {"cardinality", cf.cardinality}}
               .dump()
        << '\n';
  } else {
    out << cf.canonical << '\n';
  }
}

void cmd_verify(Common& c, const std::string& target_text, const std::string& rival_text, std::ostream& out) {
  Motif target = motif_arg(target_text);
  Motif rival = rival_text.find('|') != std::string::npos ? parse_motif(rival_text)
                                                           : region_motif(target, parse_dotbracket(rival_text));
  auto pos = term_difference(rival, target).positions();
  double size = enumeration_size(pos, target.structure());
  bool proved = verify_single_rival(c.params(), target, rival, c.budget_m);
  if (c.format == "json") {
    out << json{{"target", target.str()}, {"rival", rival.str()}, {"positions", pos},
                {"enumerated", size},     {"undesignable", proved}}
               .dump()
        << '\n';
    return;
  }
  out << "target " << target.str() << "\nrival  " << rival.str() << "\npositions " << positions(pos) << " ("
      << size << " assignments)\n"
      << (proved ? "undesignable: the rival is never worse" : "not proved: the target wins on some assignment")
      << '\n';
}

void preload(MotifStores& stores, const MotifDatabase& db) {
  for (const auto& [key, r] : db.records()) {
    if (r.verdict == "designable") {
      stores.add_designable(key);
      continue;
    }
    MinimalEntry e{parse_motif(r.motif), {}};
    for (const auto& s : r.rivals) e.rivals.push_back(parse_motif(s));
    stores.add_minimal(key, std::move(e));
  }
}

void print_report_text(const ScanReport& rep, std::ostream& out) {
  out << "# " << rep.structure_id << '\t' << rep.structure << '\n';
  out << "candidates " << rep.counts.candidates << ", evaluated " << rep.counts.evaluated << ", skipped-known "
      << rep.counts.skipped_known << ", skipped-superset " << rep.counts.skipped_superset << '\n';
  for (const auto& r : rep.results) {
    if (r.status != CandidateStatus::Minimal && r.status != CandidateStatus::Unknown) continue;
    out << status_name(r.status) << "\tloops=" << positions(r.loops) << '\t' << r.canonical;
    if (r.status == CandidateStatus::Unknown) out << '\t' << reason_name(r.reason);
    else out << "\trivals=" << r.rivals.size();
    out << '\n';
  }
}

void cmd_scan(Common& c, const std::string& input, const std::string& dataset, bool timing, std::ostream& out,
              std::ostream& err) {
  const auto& p = c.params();
  auto records = read_structures(input);
  MotifDatabase db = c.db_path.empty() ? MotifDatabase{} : MotifDatabase::load_file(c.db_path);
  MotifStores stores;
  preload(stores, db);
  ScanOptions opt;
  opt.budget = c.budget();
  opt.seed = c.seed;
  opt.threads = c.thread_count();
  Provenance prov = make_provenance(p, opt.budget, c.seed);
  int minimal = 0;
  double seconds = 0;
  for (const auto& rec : records) {
    ScanReport rep = fast_motif(p, make_host(rec.structure), opt, stores, rec.id);
    seconds += rep.seconds;
    minimal += static_cast<int>(rep.minimal().size());
    if (c.format == "json") out << report_to_json(rep, timing) << '\n';
    else print_report_text(rep, out);
    for (auto& r : records_from_report(rep, dataset, prov)) db.add(std::move(r));
  }
  if (!c.db_path.empty()) db.save_file(c.db_path);
  if (timing)
    err << records.size() << " structures, " << minimal << " minimal undesignable motifs, " << std::fixed
        << std::setprecision(3) << (records.empty() ? 0.0 : seconds / records.size()) << " s per structure\n";
}

void cmd_enum(Common& c, int max_len, bool cross_check, std::ostream& out) {
  const auto& p = c.params();
  SearchBudget b = c.budget();
  Provenance prov = make_provenance(p, b, c.seed);
  MotifDatabase db = c.db_path.empty() ? MotifDatabase{} : MotifDatabase::load_file(c.db_path);
  auto shapes = standalone_shapes(max_len);
  std::vector<Verdict> verdicts(shapes.size());
  std::vector<std::optional<VerdictKind>> oracle(shapes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < shapes.size();) {
      Motif m = embed_standalone(shapes[k]).motif;
      verdicts[k] = rival_motif_search(p, m, b, candidate_seed(c.seed, {static_cast<int>(k)}));
      if (cross_check) oracle[k] = brute_force_decide(p, m).kind;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < c.thread_count(); ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  long designable = 0, undesignable = 0, unknown = 0, disagree = 0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const Verdict& v = verdicts[k];
    if (v.kind == VerdictKind::Unknown) {
      ++unknown;
      continue;
    }
    if (oracle[k] && *oracle[k] != v.kind) ++disagree;
    auto e = embed_standalone(shapes[k]);
    MotifRecord r;
    r.canonical = canonical_form(e.motif).canonical;
    r.length = e.motif.length();
    r.cardinality = e.motif.cardinality();
    r.verdict = verdict_name(v.kind);
    r.motif = e.motif.str();
    for (const Motif& rv : v.rivals) r.rivals.push_back(rv.str());
    r.occurrences.push_back({"enum", shapes[k], e.motif.loop_ids()});
    r.provenance = prov;
    db.add(std::move(r));
    (v.kind == VerdictKind::Designable ? designable : undesignable)++;
  }
  if (!c.db_path.empty()) db.save_file(c.db_path);
  if (c.format == "json") {
    json j{{"max_len", max_len},         {"shapes", shapes.size()}, {"designable", designable},
           {"undesignable", undesignable}, {"unknown", unknown},     {"unique", db.size()}};
    if (cross_check) j["disagreements"] = disagree;
    out << j.dump() << '\n';
    return;
  }
  out << "shapes " << shapes.size() << ", designable " << designable << ", undesignable " << undesignable
      << ", unknown " << unknown << '\n';
  if (cross_check) out << "brute-force disagreements " << disagree << '\n';
  if (cross_check && disagree) throw DataError("rival search disagrees with brute force");
}

void cmd_db_merge(Common& c, const std::vector<std::string>& inputs, bool force, std::ostream& out) {
  MotifDatabase db;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path);
    db = merge(db, MotifDatabase::load(in), force);
  }
  if (!c.db_path.empty()) db.save_file(c.db_path);
  else db.save(out);
}

void cmd_db_stats(Common& c, const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  auto s = database_stats(MotifDatabase::load(in));
  if (c.format != "json") {
    out << format_stats(s);
    return;
  }
  json j{{"unique", s.all.unique_motifs},
         {"total", s.all.total_motifs},
         {"designable_unique", s.all.designable_unique},
         {"datasets", json::array()}};
  for (const auto& d : s.datasets)
    j["datasets"].push_back({{"dataset", d.dataset},
                             {"structures", d.structures},
                             {"total", d.total_motifs},
                             {"unique", d.unique_motifs},
                             {"designable_unique", d.designable_unique}});
  out << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out_default, std::ostream& err) {
  Common c;
  CLI::App app{"Undesignable RNA motif toolkit"};
  app.require_subcommand(1);
  app.add_option("--params", c.params_path, "Energy parameter file (ViennaRNA format)");
  app.add_option("--budget-m", c.budget_m, "Max enumeration size per rival")->check(CLI::PositiveNumber);
  app.add_option("--budget-n", c.budget_n, "Max rival count")->check(CLI::PositiveNumber);
  app.add_option("--budget-k", c.budget_k, "Samples per round")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--threads", c.threads, "Worker threads (default: UNDESIGN_THREADS or all cores)");
  app.add_option("--db", c.db_path, "Motif database (JSON lines)");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--out", c.out_path, "Write output here instead of standard out");

  std::string input, seq, db, constraint, target, rival, dataset = "default";
  int max_len = 10;
  bool cross_check = false, force = false, timing = false;
  std::vector<std::string> inputs;

  auto* dec = app.add_subcommand("decompose", "Loop table of a structure or structure file");
  dec->add_option("structure", input)->required();
  auto* en = app.add_subcommand("energy", "Total and per-loop free energy");
  en->add_option("sequence", seq)->required();
  en->add_option("structure", db)->required();
  auto* fo = app.add_subcommand("fold", "Minimum free energy structure");
  fo->add_option("sequence", seq)->required();
  fo->add_option("--constraint", constraint, "'(' ')' forced pair, '.' free, 'x' unpaired");
  auto* ca = app.add_subcommand("canon", "Canonical form of a motif");
  ca->add_option("motif", target, "'dotbracket|loops=i,j' or a shape like '(.[].)'")->required();
  auto* ve = app.add_subcommand("verify", "Check a single rival against a target motif");
  ve->add_option("target", target)->required();
  ve->add_option("rival", rival, "Rival motif or full folded structure")->required();
  auto* sc = app.add_subcommand("scan", "Find minimal undesignable motifs");
  sc->add_option("structures", input, "Structure file ('-' for stdin)")->required();
  sc->add_option("--dataset", dataset, "Dataset name recorded in the database");
  sc->add_flag("--timing", timing, "Report timing");
  auto* enm = app.add_subcommand("enum", "Classify every standalone motif up to a length");
  enm->add_option("--max-len", max_len)->check(CLI::Range(5, 24));
  enm->add_flag("--brute-force", cross_check, "Cross-check every verdict by exhaustive enumeration");
  auto* dbc = app.add_subcommand("db", "Motif database operations");
  dbc->require_subcommand(1);
  auto* dm = dbc->add_subcommand("merge", "Merge databases");
  dm->add_option("inputs", inputs)->required()->expected(1, -1);
  dm->add_flag("--force", force, "Merge even when parameter digests differ");
  auto* ds = dbc->add_subcommand("stats", "Database statistics");
  ds->add_option("database", input)->required();

  std::vector<std::string> argv_s{"undesign"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out_default, err);
    return code == 0 ? 0 : 1;
  }

  std::ofstream file;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) {
      err << "error: cannot write " << c.out_path << '\n';
      return 2;
    }
  }
  std::ostream& out = c.out_path.empty() ? out_default : file;

  try {
    if (*dec) cmd_decompose(c, input, out);
    else if (*en) cmd_energy(c, seq, db, out);
    else if (*fo) cmd_fold(c, seq, constraint, out);
    else if (*ca) cmd_canon(c, target, out);
    else if (*ve) cmd_verify(c, target, rival, out);
    else if (*sc) cmd_scan(c, input, dataset, timing, out, err);
    else if (*enm) cmd_enum(c, max_len, cross_check, out);
    else if (*dm) cmd_db_merge(c, inputs, force, out);
    else if (*ds) cmd_db_stats(c, input, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace undesign::cli
