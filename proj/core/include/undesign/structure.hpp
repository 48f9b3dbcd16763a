#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace undesign {

// Nucleotide codes follow the parameter-file column order: 0 is the "no base"
// slot, then A, C, G, U.
enum Base : std::uint8_t { kNoBase = 0, kA = 1, kC = 2, kG = 3, kU = 4 };

char base_char(int b);
int base_code(char c);  // -1 when not a nucleotide

class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::string_view text);  // throws SequenceError

  int length() const { return static_cast<int>(codes_.size()) - 1; }
  // 1-based access
  int operator[](int i) const { return codes_[i]; }
  void set(int i, int b) { codes_[i] = static_cast<std::uint8_t>(b); }
  std::string str() const;
  bool operator==(const Sequence&) const = default;

  static Sequence filled(int n, int b);

 private:
  std::vector<std::uint8_t> codes_{0};
};

struct SequenceError : std::runtime_error {
  int index;
  SequenceError(int idx, const std::string& msg) : std::runtime_error(msg), index(idx) {}
};

struct StructureError : std::runtime_error {
  enum class Kind { UnbalancedBrackets, InvalidCharacter, InvalidHairpin, Crossing, Conflict, OutOfRange };
  Kind kind;
  int position;
  StructureError(Kind k, int pos, const std::string& msg)
      : std::runtime_error(msg), kind(k), position(pos) {}
};

using Pair = std::pair<int, int>;

constexpr int kMinHairpin = 3;

class SecondaryStructure {
 public:
  SecondaryStructure() = default;
  // Validates: in range, no shared index, no crossing, hairpins >= 3.
  SecondaryStructure(int n, std::vector<Pair> pairs);

  int length() const { return n_; }
  const std::vector<Pair>& pairs() const { return pairs_; }  // sorted by 5' index
  int partner(int i) const { return pt_[i]; }                  // 0 if unpaired
  bool paired(int i) const { return pt_[i] != 0; }
  bool has_pair(int i, int j) const { return i >= 1 && i <= n_ && pt_[i] == j; }
  bool operator==(const SecondaryStructure& o) const { return n_ == o.n_ && pairs_ == o.pairs_; }

 private:
  int n_ = 0;
  std::vector<Pair> pairs_;
  std::vector<int> pt_{0};
};

SecondaryStructure parse_dotbracket(std::string_view text);
std::string to_dotbracket(const SecondaryStructure& s);

enum class LoopKind { External, Hairpin, Stack, Bulge, Internal, Multi };

char loop_letter(LoopKind k);
const char* loop_name(LoopKind k);

// pairs: for closed loops the closing pair comes first, then the enclosed
// branch pairs 5'->3'. For the external loop only the branches are listed.
// unpaired[k] counts the bases after pairs[k] going 5'->3' around the loop;
// the external loop carries one extra leading entry for the 5' tail.
struct Loop {
  LoopKind kind;
  std::vector<Pair> pairs;
  std::vector<int> unpaired;

  bool operator==(const Loop&) const = default;
  int total_unpaired() const;
  // Positions of the unpaired bases of this loop, ascending.
  std::vector<int> unpaired_positions(int n) const;
};

std::vector<Loop> decompose_loops(const SecondaryStructure& s);

// Pair positions first, then mismatch positions, deduplicated. With
// special_hairpins, hairpins of 3, 4 or 6 unpaired bases list every unpaired
// base, since the triloop/tetraloop/hexaloop tables key on the full loop.
using CriticalPositions = std::vector<int>;
CriticalPositions critical_positions(const Loop& l, int n, bool special_hairpins = true);

// Loops of a structure plus the loop-pair incidence needed by motifs.
class LoopDecomposition {
 public:
  explicit LoopDecomposition(SecondaryStructure s);

  const SecondaryStructure& structure() const { return s_; }
  const std::vector<Loop>& loops() const { return loops_; }
  const Loop& loop(int id) const { return loops_[id]; }
  int size() const { return static_cast<int>(loops_.size()); }

  // Index of a pair in structure().pairs(), -1 if absent.
  int pair_index(int i) const;
  // The loop a pair closes and the loop holding it as a branch.
  int inner_loop(int pair_idx) const { return inner_[pair_idx]; }
  int outer_loop(int pair_idx) const { return outer_[pair_idx]; }
  // Neighbours in 5'->3' order of the shared pair.
  std::vector<int> neighbors(int loop_id) const;
  int largest_two_pair_loop() const;

 private:
  SecondaryStructure s_;
  std::vector<Loop> loops_;
  std::vector<int> pair_of_;  // 5' position -> pair index
  std::vector<int> inner_, outer_;
};

// Dot-bracket records: "id<TAB>dotbracket" or bare dot-bracket, '#' comments.
struct StructureRecord {
  std::string id;
  SecondaryStructure structure;
};
std::vector<StructureRecord> read_structure_records(std::istream& in);

}  // namespace undesign
