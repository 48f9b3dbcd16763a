#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "undesign/design.hpp"

namespace undesign {

struct VerdictConflict : std::runtime_error {
  std::string canonical;
  explicit VerdictConflict(const std::string& c);
};
struct DigestMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Occurrence {
  std::string dataset, structure_id;
  std::vector<int> loops;
  auto operator<=>(const Occurrence&) const = default;
};

struct Provenance {
  std::string tool_version;
  std::uint64_t seed = 0;
  double budget_m = 0;
  long budget_n = 0;
  int budget_k = 0;
  std::string params_digest;
  bool operator==(const Provenance&) const = default;
};

struct MotifRecord {
  std::string canonical;
  int length = 0;
  int cardinality = 0;
  std::string verdict;  // "designable" or "undesignable"
  std::string motif;    // Motif::str() of the first occurrence
  std::vector<std::string> rivals;
  std::vector<Occurrence> occurrences;
  Provenance provenance;
  bool operator==(const MotifRecord&) const = default;
};

std::string to_json_line(const MotifRecord& r);
MotifRecord record_from_json(const std::string& line);  // throws RecordError

// JSON-lines file, one record per line, keyed by canonical form.
class MotifDatabase {
 public:
  const std::map<std::string, MotifRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  // Merges occurrences into an existing record. Throws VerdictConflict and,
  // unless force, DigestMismatch.
  void add(MotifRecord r, bool force = false);

  static MotifDatabase load(std::istream& in);
  static MotifDatabase load_file(const std::string& path);  // missing file = empty
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

 private:
  std::map<std::string, MotifRecord> records_;
};

MotifDatabase merge(const MotifDatabase& a, const MotifDatabase& b, bool force = false);

// Per-dataset summary in the usual results-table layout.
struct DatasetStats {
  std::string dataset;
  int structures = 0;         // structures with at least one occurrence
  int total_motifs = 0;       // minimal undesignable occurrences
  int unique_motifs = 0;      // distinct canonical forms
  int designable_unique = 0;  // distinct designable canonical forms
};
struct DatabaseStats {
  std::vector<DatasetStats> datasets;
  DatasetStats all;
  int min_length = 0, max_length = 0, min_cardinality = 0, max_cardinality = 0;
  double avg_length = 0;
};
DatabaseStats database_stats(const MotifDatabase& db);
std::string format_stats(const DatabaseStats& s);

Provenance make_provenance(const ParameterSet& p, const SearchBudget& b, std::uint64_t seed);
// Records for the minimal motifs of a report.
std::vector<MotifRecord> records_from_report(const ScanReport& rep, const std::string& dataset, const Provenance& prov);

std::string report_to_json(const ScanReport& rep, bool with_timing = false);
ScanReport report_from_json(const std::string& text);  // throws RecordError

}  // namespace undesign
