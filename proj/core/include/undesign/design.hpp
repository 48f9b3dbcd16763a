#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "undesign/lpg.hpp"
#include "undesign/motif.hpp"

namespace undesign {

struct BudgetExceeded : std::runtime_error {
  double size;
  explicit BudgetExceeded(double s);
};
struct JoinFailed : std::runtime_error {
  bool exhausted;  // the whole search tree was visited, not just the step limit
  explicit JoinFailed(bool exhausted_);
};
struct TooLarge : std::runtime_error {
  double size;
  explicit TooLarge(double s);
};

struct SearchBudget {
  double M = 1e10;  // enumeration size per rival
  long N = 100000;  // rivals
  int K = 100;      // samples per round
  int join_retries = 64;
  long join_steps = 200000;  // backtracking nodes per draw
  void validate() const;     // throws std::invalid_argument
};

// Tuples over at most 32 positions, two bits per position (base code - 1),
// position k of positions() at bit 2k. Sorted and unique.
class Constraint {
 public:
  static constexpr std::size_t kMaxPositions = 32;
  using Tuple = std::uint64_t;

  Constraint() = default;
  Constraint(CriticalPositions positions, std::vector<Tuple> tuples);

  const CriticalPositions& positions() const { return positions_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  std::vector<Tuple>& mutable_tuples() { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  static int base(Tuple t, std::size_t k) { return static_cast<int>((t >> (2 * k)) & 3u) + 1; }
  NucleotideAssignment assignment(Tuple t, int n) const;
  bool contains(const Sequence& x) const;

 private:
  CriticalPositions positions_;
  std::vector<Tuple> tuples_;
};

// 6 per target pair with both ends in the set, 4 per other position.
double enumeration_size(const CriticalPositions& positions, const SecondaryStructure& target);

// True iff the rival never loses: ΔΔG(rival, target) <= 0 on every
// assignment of the differential positions. Throws std::invalid_argument
// when the motifs do not differ.
bool verify_single_rival(const ParameterSet& p, const Motif& target, const Motif& rival, double M = 1e10);
// Assignments on which the target strictly beats the rival.
Constraint constraint_from_rival(const ParameterSet& p, const Motif& target, const Motif& rival, double M = 1e10);

enum class SpaceStatus { Open, Empty };

class DesignSpace {
 public:
  const std::vector<Constraint>& constraints() const { return cs_; }
  SpaceStatus status() const { return status_; }
  bool empty() const { return status_ == SpaceStatus::Empty; }
  // Adds c and prunes everything it overlaps back to a fixed point.
  SpaceStatus add(Constraint c);

 private:
  void propagate(std::vector<std::size_t> queue);
  std::vector<Constraint> cs_;
  SpaceStatus status_ = SpaceStatus::Open;
};

struct Intersection {
  std::vector<Constraint> constraints;
  SpaceStatus status;
};
Intersection intersect_constraints(std::vector<Constraint> cs);

// Draws a sequence consistent with every constraint. Positions outside all
// constraints get C-G on pairs of y and A elsewhere.
Sequence sample_sequence(const std::vector<Constraint>& cs, const SecondaryStructure& y, std::uint64_t seed,
                         long max_steps = 200000);

enum class VerdictKind { Designable, Undesignable, Unknown };
enum class UnknownReason { None, BudgetN, BudgetM, Timeout };

struct SearchStats {
  long iterations = 0, samples = 0, rivals_considered = 0, join_failures = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Sequence> witness;
  std::vector<Motif> rivals;
  UnknownReason reason = UnknownReason::None;
  SearchStats stats;
};

const char* verdict_name(VerdictKind k);
const char* reason_name(UnknownReason r);

Verdict rival_motif_search(const ParameterSet& p, const Motif& target, const SearchBudget& b, std::uint64_t seed);

// True if some rival has ΔΔG <= 0 against the target on x.
bool rivals_defeat(const ParameterSet& p, const Motif& target, const std::vector<Motif>& rivals, const Sequence& x);

struct BruteForceResult {
  VerdictKind kind;  // Designable or Undesignable
  std::optional<Sequence> witness;
  long enumerated = 0;
};
BruteForceResult brute_force_decide(const ParameterSet& p, const Motif& target, double cap = 1e7);
double brute_force_size(const Motif& target);

// Connected loop sets of d, by increasing size then lexicographically.
std::vector<std::vector<int>> connected_loop_sets(const LoopDecomposition& d, int max_size = 0);

// Minimal undesignable motifs, by increasing cardinality. `undesignable`
// decides a motif.
std::vector<Motif> bottom_up_scan(const HostPtr& y, const std::function<bool(const Motif&)>& undesignable);

// Canonical-form keyed verdict caches shared across scans. First writer wins.
struct MinimalEntry {
  Motif motif;
  std::vector<Motif> rivals;
};
class MotifStores {
 public:
  bool is_designable(const std::string& canonical) const;
  const MinimalEntry* minimal(const std::string& canonical) const;
  bool add_designable(const std::string& canonical);
  bool add_minimal(const std::string& canonical, MinimalEntry e);
  std::size_t designable_count() const;
  std::size_t minimal_count() const;
  std::vector<std::string> designable_keys() const;
  std::vector<std::pair<std::string, MinimalEntry>> minimal_entries() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, bool> designable_;
  std::map<std::string, MinimalEntry> minimal_;
};

enum class CandidateStatus { Designable, Minimal, Undesignable, Unknown, SkippedSuperset };
const char* status_name(CandidateStatus s);

struct CandidateResult {
  int center = 0;
  std::vector<int> loops;  // sorted
  std::string canonical;
  CandidateStatus status = CandidateStatus::Unknown;
  // search: rival search ran; store: verdict came from a store; skip
  std::string source;
  UnknownReason reason = UnknownReason::None;
  std::vector<Motif> rivals;
  std::optional<Sequence> witness;
  SearchStats stats;
};

struct ScanCounts {
  long candidates = 0, evaluated = 0, skipped_known = 0, skipped_superset = 0;
};

struct ScanReport {
  std::string structure_id;
  std::string structure;
  std::uint64_t seed = 0;
  SearchBudget budget;
  std::vector<CandidateResult> results;  // (center, subset size) order
  ScanCounts counts;
  double seconds = 0;

  std::vector<const CandidateResult*> minimal() const;
};

struct ScanOptions {
  SearchBudget budget;
  std::uint64_t seed = 1;
  int threads = 1;
  int max_neighbors = 3;
};

ScanReport fast_motif(const ParameterSet& p, const HostPtr& y, const ScanOptions& opt, MotifStores& stores,
                      std::string structure_id = "");

// Candidate seed derived from the scan seed and the loop set.
std::uint64_t candidate_seed(std::uint64_t seed, const std::vector<int>& loops);

}  // namespace undesign
