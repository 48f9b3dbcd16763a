#include <sstream>

#include "doctest.h"
#include "undesign/db.hpp"

using namespace undesign;

namespace {

const ParameterSet& params() { return default_parameters(); }

MotifRecord sample_record(const std::string& structure_id, const std::string& digest = "abc") {
  auto e = embed_standalone("((...).)");
  MotifRecord r;
  r.canonical = canonical_form(e.motif).canonical;
  r.length = e.motif.length();
  r.cardinality = e.motif.cardinality();
  r.verdict = "undesignable";
  r.motif = e.motif.str();
  r.rivals = {"(((......)))|loops=1"};
  r.occurrences = {{"demo", structure_id, {1, 2}}};
  r.provenance = {"0.1.0", 5, 1e10, 100000, 100, digest};
  return r;
}

MotifDatabase single(const MotifRecord& r) {
  MotifDatabase db;
  db.add(r);
  return db;
}

std::string dump(const MotifDatabase& db) {
  std::ostringstream s;
  db.save(s);
  return s.str();
}

}  // namespace

TEST_CASE("record json round trip") {
  MotifRecord r = sample_record("s1");
  CHECK(record_from_json(to_json_line(r)) == r);
  CHECK(to_json_line(record_from_json(to_json_line(r))) == to_json_line(r));
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(record_from_json("{"), RecordError);
  MotifRecord r = sample_record("s1");
  r.rivals.clear();
  CHECK_THROWS_AS(record_from_json(to_json_line(r)), RecordError);
  r = sample_record("s1");
  r.occurrences.clear();
  CHECK_THROWS_AS(record_from_json(to_json_line(r)), RecordError);
  r = sample_record("s1");
  r.verdict = "maybe";
  CHECK_THROWS_AS(record_from_json(to_json_line(r)), RecordError);
}

TEST_CASE("database file round trip") {
  MotifDatabase db = single(sample_record("s1"));
  std::istringstream in(dump(db));
  CHECK(dump(MotifDatabase::load(in)) == dump(db));
  std::istringstream bad("not json\n");
  CHECK_THROWS_AS(MotifDatabase::load(bad), RecordError);
}

TEST_CASE("merge") {
  MotifDatabase a = single(sample_record("s1"));
  SUBCASE("with empty is identity") {
    CHECK(dump(merge(a, MotifDatabase{})) == dump(a));
    CHECK(dump(merge(MotifDatabase{}, a)) == dump(a));
  }
  SUBCASE("same motif in two structures gives one record with two occurrences") {
    auto m = merge(a, single(sample_record("s2")));
    REQUIRE(m.size() == 1);
    CHECK(m.records().begin()->second.occurrences.size() == 2);
    // Repeated occurrences are not duplicated.
    CHECK(merge(m, a).records().begin()->second.occurrences.size() == 2);
  }
  SUBCASE("verdict conflict is an error") {
    MotifRecord d = sample_record("s2");
    d.verdict = "designable";
    d.rivals.clear();
    CHECK_THROWS_AS(merge(a, single(d)), VerdictConflict);
    CHECK_THROWS_AS(merge(a, single(d), true), VerdictConflict);
  }
  SUBCASE("different parameter digests need force") {
    MotifDatabase b = single(sample_record("s2", "other"));
    CHECK_THROWS_AS(merge(a, b), DigestMismatch);
    CHECK(merge(a, b, true).size() == 1);
  }
}

TEST_CASE("stats") {
  MotifRecord r1 = sample_record("s1");
  MotifRecord r2 = sample_record("s2");
  r2.occurrences[0].dataset = "other";
  auto e = embed_standalone("(((...)))");
  MotifRecord d;
  d.canonical = canonical_form(e.motif).canonical;
  d.length = e.motif.length();
  d.cardinality = e.motif.cardinality();
  d.verdict = "designable";
  d.motif = e.motif.str();
  d.occurrences = {{"demo", "s3", {1}}};
  d.provenance = r1.provenance;
  MotifDatabase db;
  db.add(r1);
  db.add(r2);
  db.add(d);
  auto s = database_stats(db);
  REQUIRE(s.datasets.size() == 2);
  CHECK(s.datasets[0].dataset == "demo");
  CHECK(s.datasets[0].structures == 1);
  CHECK(s.datasets[0].total_motifs == 1);
  CHECK(s.datasets[0].designable_unique == 1);
  CHECK(s.all.unique_motifs == 1);
  CHECK(s.all.total_motifs == 2);
  CHECK(s.min_length == 8);
  CHECK(format_stats(s).find("demo") != std::string::npos);
}

TEST_CASE("scan reports round trip through json") {
  MotifStores stores;
  ScanOptions o;
  o.budget.M = 1e7;
  auto rep = fast_motif(params(), make_host(parse_dotbracket("((((...).)))")), o, stores, "q");
  std::string text = report_to_json(rep);
  CHECK(report_to_json(report_from_json(text)) == text);
  auto recs = records_from_report(rep, "demo", make_provenance(params(), o.budget, o.seed));
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].occurrences[0].loops == std::vector<int>{3, 4});
  CHECK(recs[0].provenance.params_digest == params().digest);
  CHECK_THROWS_AS(report_from_json("[]"), RecordError);
}
