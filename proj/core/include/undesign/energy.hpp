#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "undesign/params.hpp"
#include "undesign/structure.hpp"

namespace undesign {

struct MissingPosition : std::runtime_error {
  int index;
  explicit MissingPosition(int i) : std::runtime_error("position " + std::to_string(i) + " not assigned"), index(i) {}
};

// Partial map position -> nucleotide over [1, n].
class NucleotideAssignment {
 public:
  NucleotideAssignment() = default;
  explicit NucleotideAssignment(int n) : base_(n + 1, -1) {}

  int length() const { return static_cast<int>(base_.size()) - 1; }
  bool has(int i) const { return i >= 1 && i <= length() && base_[i] >= 0; }
  int operator[](int i) const {
    if (!has(i)) throw MissingPosition(i);
    return base_[i];
  }
  void set(int i, int b) { base_[i] = static_cast<signed char>(b); }
  std::vector<int> domain() const;

 private:
  std::vector<signed char> base_{-1};
};

struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

NucleotideAssignment project(const Sequence& x, const CriticalPositions& I);
NucleotideAssignment full_assignment(const Sequence& x);

// A loop's free energy split into additive pieces. Pieces with the same key
// are the same function of the same positions, so they cancel between two
// motifs that share them.
struct EnergyTerm {
  enum class Kind { Hairpin, TwoPair, MultiClosing, MultiStem, ExteriorStem, MultiConstant };
  Kind kind;
  int i = 0, j = 0, k = 0, l = 0;  // pair coordinates; MultiConstant keeps the unpaired count in k
  std::vector<int> positions;

  bool same_as(const EnergyTerm& o) const {
    return kind == o.kind && i == o.i && j == o.j && k == o.k && l == o.l;
  }
  bool operator<(const EnergyTerm& o) const;
};

std::vector<EnergyTerm> loop_terms(const Loop& l, int n);

Energy term_energy(const ParameterSet& p, const EnergyTerm& t, const NucleotideAssignment& a);
Energy term_energy(const ParameterSet& p, const EnergyTerm& t, const Sequence& x);

Energy loop_energy(const ParameterSet& p, const Loop& l, const NucleotideAssignment& a);
Energy loop_energy(const ParameterSet& p, const Loop& l, const Sequence& x);

Energy structure_energy(const ParameterSet& p, const Sequence& x, const SecondaryStructure& y);

// Building blocks shared with the folding engine. Bases are codes 1..4; a
// neighbour argument of -1 means "no base" (sequence end).
namespace nn {
Energy hairpin(const ParameterSet& p, int i, int j, const Sequence& x);
Energy interior(const ParameterSet& p, int i, int j, int k, int l, const Sequence& x);
Energy multi_stem(const ParameterSet& p, int type, int n5, int n3);
Energy exterior_stem(const ParameterSet& p, int type, int n5, int n3);
}  // namespace nn

}  // namespace undesign
