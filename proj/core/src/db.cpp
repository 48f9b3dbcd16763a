#include "undesign/db.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace undesign {

using nlohmann::json;

VerdictConflict::VerdictConflict(const std::string& c)
    : std::runtime_error("verdict conflict for motif " + c), canonical(c) {}

namespace {

json occurrence_json(const Occurrence& o) {
  return json{{"dataset", o.dataset}, {"structure", o.structure_id}, {"loops", o.loops}};
}

json provenance_json(const Provenance& p) {
  return json{{"tool_version", p.tool_version}, {"seed", p.seed},       {"budget_m", p.budget_m},
              {"budget_n", p.budget_n},         {"budget_k", p.budget_k}, {"params_digest", p.params_digest}};
}

}  // namespace

std::string to_json_line(const MotifRecord& r) {
  json j{{"canonical", r.canonical}, {"length", r.length}, {"cardinality", r.cardinality},
         {"verdict", r.verdict},     {"motif", r.motif},   {"rivals", r.rivals}};
  j["occurrences"] = json::array();
  for (const auto& o : r.occurrences) j["occurrences"].push_back(occurrence_json(o));
  j["provenance"] = provenance_json(r.provenance);
  return j.dump();
}

MotifRecord record_from_json(const std::string& line) {
  try {
    json j = json::parse(line);
    MotifRecord r;
    r.canonical = j.at("canonical").get<std::string>();
    r.length = j.at("length").get<int>();
    r.cardinality = j.at("cardinality").get<int>();
    r.verdict = j.at("verdict").get<std::string>();
    r.motif = j.at("motif").get<std::string>();
    r.rivals = j.at("rivals").get<std::vector<std::string>>();
    for (const auto& o : j.at("occurrences"))
      r.occurrences.push_back({o.at("dataset").get<std::string>(), o.at("structure").get<std::string>(),
                               o.at("loops").get<std::vector<int>>()});
    const auto& p = j.at("provenance");
    r.provenance = {p.at("tool_version").get<std::string>(), p.at("seed").get<std::uint64_t>(),
                    p.at("budget_m").get<double>(),          p.at("budget_n").get<long>(),
                    p.at("budget_k").get<int>(),             p.at("params_digest").get<std::string>()};
    if (r.verdict != "designable" && r.verdict != "undesignable") throw RecordError("unknown verdict " + r.verdict);
    if (r.occurrences.empty()) throw RecordError("record without occurrences");
    if (r.verdict == "undesignable" && r.rivals.empty()) throw RecordError("undesignable record without rivals");
    return r;
  } catch (const json::exception& e) {
    throw RecordError(std::string("bad record: ") + e.what());
  }
}

void MotifDatabase::add(MotifRecord r, bool force) {
  auto it = records_.find(r.canonical);
  if (it == records_.end()) {
    std::sort(r.occurrences.begin(), r.occurrences.end());
    r.occurrences.erase(std::unique(r.occurrences.begin(), r.occurrences.end()), r.occurrences.end());
    records_.emplace(r.canonical, std::move(r));
    return;
  }
  MotifRecord& have = it->second;
  if (have.verdict != r.verdict) throw VerdictConflict(r.canonical);
  if (!force && have.provenance.params_digest != r.provenance.params_digest)
    throw DigestMismatch("parameter digests differ for motif " + r.canonical);
  auto& occ = have.occurrences;
  occ.insert(occ.end(), r.occurrences.begin(), r.occurrences.end());
  std::sort(occ.begin(), occ.end());
  occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
}

MotifDatabase MotifDatabase::load(std::istream& in) {
  MotifDatabase db;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      db.add(record_from_json(line), true);
    } catch (const RecordError& e) {
      throw RecordError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return db;
}

MotifDatabase MotifDatabase::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  return load(in);
}

void MotifDatabase::save(std::ostream& out) const {
  for (const auto& [k, r] : records_) out << to_json_line(r) << '\n';
}

void MotifDatabase::save_file(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    save(out);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace " + path);
}

MotifDatabase merge(const MotifDatabase& a, const MotifDatabase& b, bool force) {
  MotifDatabase out = a;
  for (const auto& [k, r] : b.records()) out.add(r, force);
  return out;
}

DatabaseStats database_stats(const MotifDatabase& db) {
  DatabaseStats s;
  std::map<std::string, std::set<std::string>> structures, unique, designable;
  std::map<std::string, int> total;
  std::set<std::string> all_structures;
  long length_sum = 0;
  int undesignable = 0;
  for (const auto& [key, r] : db.records()) {
    for (const auto& o : r.occurrences) {
      if (r.verdict == "designable") {
        designable[o.dataset].insert(key);
        continue;
      }
      structures[o.dataset].insert(o.structure_id);
      all_structures.insert(o.dataset + "\t" + o.structure_id);
      unique[o.dataset].insert(key);
      ++total[o.dataset];
    }
    if (r.verdict == "designable") {
      ++s.all.designable_unique;
      continue;
    }
    ++undesignable;
    s.all.total_motifs += static_cast<int>(r.occurrences.size());
    length_sum += r.length;
    if (undesignable == 1) {
      s.min_length = s.max_length = r.length;
      s.min_cardinality = s.max_cardinality = r.cardinality;
    }
    s.min_length = std::min(s.min_length, r.length);
    s.max_length = std::max(s.max_length, r.length);
    s.min_cardinality = std::min(s.min_cardinality, r.cardinality);
    s.max_cardinality = std::max(s.max_cardinality, r.cardinality);
  }
  std::set<std::string> names;
  for (const auto& [d, v] : structures) names.insert(d);
  for (const auto& [d, v] : designable) names.insert(d);
  for (const auto& d : names) {
    DatasetStats ds{d, static_cast<int>(structures[d].size()), total[d], static_cast<int>(unique[d].size()),
                    static_cast<int>(designable[d].size())};
    s.datasets.push_back(ds);
  }
  s.all.dataset = "All";
  s.all.structures = static_cast<int>(all_structures.size());
  s.all.unique_motifs = undesignable;
  s.avg_length = undesignable ? static_cast<double>(length_sum) / undesignable : 0;
  return s;
}

std::string format_stats(const DatabaseStats& s) {
  std::ostringstream out;
  auto row = [&](const DatasetStats& d) {
    out << std::left << std::setw(24) << d.dataset << std::right << std::setw(8) << d.structures << std::setw(8)
        << d.total_motifs << std::setw(8) << d.unique_motifs << std::setw(12) << d.designable_unique << '\n';
  };
  out << std::left << std::setw(24) << "dataset" << std::right << std::setw(8) << "undes." << std::setw(8) << "total"
      << std::setw(8) << "unique" << std::setw(12) << "designable" << '\n';
  for (const auto& d : s.datasets) row(d);
  row(s.all);
  out << "unique minimal undesignable motifs: " << s.all.unique_motifs;
  if (s.all.unique_motifs)
    out << "; length: [" << s.min_length << ", " << s.max_length << "] (avg " << std::fixed << std::setprecision(1)
        << s.avg_length << "); cardinality: [" << s.min_cardinality << ", " << s.max_cardinality << "]";
  out << '\n';
  return out.str();
}

Provenance make_provenance(const ParameterSet& p, const SearchBudget& b, std::uint64_t seed) {
  return {UNDESIGN_VERSION, seed, b.M, b.N, b.K, p.digest};
}

std::vector<MotifRecord> records_from_report(const ScanReport& rep, const std::string& dataset, const Provenance& prov) {
  std::vector<MotifRecord> out;
  for (const CandidateResult* r : rep.minimal()) {
    MotifRecord m;
    m.canonical = r->canonical;
    m.verdict = "undesignable";
    auto host = make_host(parse_dotbracket(rep.structure));
    Motif motif(host, r->loops);
    m.length = motif.length();
    m.cardinality = motif.cardinality();
    m.motif = motif.str();
    for (const Motif& rv : r->rivals) m.rivals.push_back(rv.str());
    m.occurrences.push_back({dataset, rep.structure_id, r->loops});
    m.provenance = prov;
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

CandidateStatus status_from(const std::string& s) {
  for (auto c : {CandidateStatus::Designable, CandidateStatus::Minimal, CandidateStatus::Undesignable,
                 CandidateStatus::Unknown, CandidateStatus::SkippedSuperset})
    if (s == status_name(c)) return c;
  throw RecordError("unknown status " + s);
}

UnknownReason reason_from(const std::string& s) {
  for (auto r : {UnknownReason::None, UnknownReason::BudgetN, UnknownReason::BudgetM, UnknownReason::Timeout})
    if (s == reason_name(r)) return r;
  throw RecordError("unknown reason " + s);
}

}  // namespace

std::string report_to_json(const ScanReport& rep, bool with_timing) {
  json j;
  j["structure_id"] = rep.structure_id;
  j["structure"] = rep.structure;
  j["seed"] = rep.seed;
  j["budget"] = {{"m", rep.budget.M},
                 {"n", rep.budget.N},
                 {"k", rep.budget.K},
                 {"join_retries", rep.budget.join_retries},
                 {"join_steps", rep.budget.join_steps}};
  j["counts"] = {{"candidates", rep.counts.candidates},
                 {"evaluated", rep.counts.evaluated},
                 {"skipped_known", rep.counts.skipped_known},
                 {"skipped_superset", rep.counts.skipped_superset}};
  j["results"] = json::array();
  for (const auto& r : rep.results) {
    json e{{"center", r.center},
           {"loops", r.loops},
           {"canonical", r.canonical},
           {"status", status_name(r.status)},
           {"source", r.source},
           {"reason", reason_name(r.reason)},
           {"stats",
            {{"iterations", r.stats.iterations},
             {"samples", r.stats.samples},
             {"rivals_considered", r.stats.rivals_considered},
             {"join_failures", r.stats.join_failures}}}};
    e["rivals"] = json::array();
    for (const Motif& m : r.rivals) e["rivals"].push_back(m.str());
    e["witness"] = r.witness ? json(r.witness->str()) : json(nullptr);
    j["results"].push_back(std::move(e));
  }
  if (with_timing) j["seconds"] = rep.seconds;
  return j.dump();
}

ScanReport report_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    ScanReport rep;
    rep.structure_id = j.at("structure_id").get<std::string>();
    rep.structure = j.at("structure").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    const auto& b = j.at("budget");
    rep.budget.M = b.at("m").get<double>();
    rep.budget.N = b.at("n").get<long>();
    rep.budget.K = b.at("k").get<int>();
    rep.budget.join_retries = b.at("join_retries").get<int>();
    rep.budget.join_steps = b.at("join_steps").get<long>();
    const auto& c = j.at("counts");
    rep.counts = {c.at("candidates").get<long>(), c.at("evaluated").get<long>(), c.at("skipped_known").get<long>(),
                  c.at("skipped_superset").get<long>()};
    for (const auto& e : j.at("results")) {
      CandidateResult r;
      r.center = e.at("center").get<int>();
      r.loops = e.at("loops").get<std::vector<int>>();
      r.canonical = e.at("canonical").get<std::string>();
      r.status = status_from(e.at("status").get<std::string>());
      r.source = e.at("source").get<std::string>();
      r.reason = reason_from(e.at("reason").get<std::string>());
      const auto& s = e.at("stats");
      r.stats = {s.at("iterations").get<long>(), s.at("samples").get<long>(), s.at("rivals_considered").get<long>(),
                 s.at("join_failures").get<long>()};
      for (const auto& m : e.at("rivals")) r.rivals.push_back(parse_motif(m.get<std::string>()));
      if (!e.at("witness").is_null()) r.witness = Sequence(e.at("witness").get<std::string>());
      rep.results.push_back(std::move(r));
    }
    if (j.contains("seconds")) rep.seconds = j.at("seconds").get<double>();
    return rep;
  } catch (const json::exception& e) {
    throw RecordError(std::string("bad report: ") + e.what());
  }
}

}  // namespace undesign
