#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "undesign/params.hpp"
#include "undesign/structure.hpp"

namespace undesign {

// Per-position directive. Forced pairs are fixed; free positions may pair
// with other free positions; every other position stays unpaired.
struct FoldConstraint {
  int n = 0;
  std::vector<int> forced;  // partner, 0 if none (1-based, size n + 1)
  std::vector<char> free;   // size n + 1
  int max_interior = 30;    // largest bulge/interior loop (unpaired bases)

  static FoldConstraint unconstrained(int n);
  // '(' ')' forced pair, '.' free, 'x' unpaired.
  static FoldConstraint parse(std::string_view text);
  std::string str() const;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FoldResult {
  Energy mfe = kInf;
  SecondaryStructure structure;
  bool cooptimal = false;
  // A second optimal structure when cooptimal, in traceback order.
  std::optional<SecondaryStructure> alternative;
};

// Folds only the free region; positions fixed by the constraint contribute a
// constant. Free positions must all lie in one region, i.e. share the same
// innermost enclosing forced pair (or none).
FoldResult fold_constrained(const ParameterSet& p, const Sequence& x, const FoldConstraint& c);

// Up to `limit` distinct optimal structures, in deterministic order.
std::vector<SecondaryStructure> optimal_structures(const ParameterSet& p, const Sequence& x, const FoldConstraint& c,
                                                   int limit);

// True iff folding under c yields exactly y and no other structure ties.
bool umfe_holds(const ParameterSet& p, const Sequence& x, const SecondaryStructure& y, const FoldConstraint& c);

}  // namespace undesign
