#pragma once
// Exhaustive folding oracle shared by the fold tests and the acceptance run.

#include <functional>
#include <vector>

#include "undesign/energy.hpp"
#include "undesign/fold.hpp"

namespace oracle {

using namespace undesign;

// Every structure allowed by the constraint, by plain recursion.
inline void all_structures(const Sequence& x, const FoldConstraint& c, std::vector<SecondaryStructure>& out) {
  const int n = x.length();
  std::vector<Pair> cur;
  std::function<void(int, int, std::vector<Pair>&, const std::function<void()>&)> span;
  // Calls done() once per way of filling [i, j].
  span = [&](int i, int j, std::vector<Pair>& acc, const std::function<void()>& done) {
    if (i > j) {
      done();
      return;
    }
    if (c.forced[i]) {
      int q = c.forced[i];
      if (q < i || q > j) return;
      acc.emplace_back(i, q);
      span(i + 1, q - 1, acc, [&] { span(q + 1, j, acc, done); });
      acc.pop_back();
      return;
    }
    span(i + 1, j, acc, done);  // i unpaired
    if (!c.free[i]) return;
    for (int q = i + kMinHairpin + 1; q <= j; ++q) {
      if (!c.free[q] || !pair_type(x[i], x[q])) continue;
      acc.emplace_back(i, q);
      span(i + 1, q - 1, acc, [&] { span(q + 1, j, acc, done); });
      acc.pop_back();
    }
  };
  span(1, n, cur, [&] { out.emplace_back(n, cur); });
}

struct Oracle {
  Energy mfe = kInf;
  int count = 0;
};

inline Oracle brute_force(const ParameterSet& p, const Sequence& x, const FoldConstraint& c) {
  std::vector<SecondaryStructure> all;
  all_structures(x, c, all);
  Oracle o;
  for (const auto& s : all) {
    Energy e = structure_energy(p, x, s);
    if (e < o.mfe) {
      o.mfe = e;
      o.count = 1;
    } else if (e == o.mfe) {
      ++o.count;
    }
  }
  return o;
}

}  // namespace oracle
