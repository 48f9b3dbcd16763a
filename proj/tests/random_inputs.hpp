#pragma once
// Seeded generators shared by the property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "undesign/motif.hpp"
#include "undesign/structure.hpp"

namespace gen {

// Random valid dot-bracket of length n (hairpins >= 3).
inline std::string dotbracket(std::mt19937& rng, int n, int pair_bias = 3) {
  std::string db(n, '.');
  std::vector<int> open;
  for (int k = 0; k < n; ++k) {
    int r = static_cast<int>(rng() % pair_bias);
    if (r == 0 && n - k > 4) {
      open.push_back(k);
      db[k] = '(';
    } else if (r == 1 && !open.empty() && k - open.back() > 3) {
      db[k] = ')';
      open.pop_back();
    }
  }
  for (int k : open) db[k] = '.';
  return db;
}

inline undesign::Sequence sequence(std::mt19937& rng, int n) {
  std::string s;
  for (int k = 0; k < n; ++k) s.push_back("ACGU"[rng() % 4]);
  return undesign::Sequence(s);
}

// Random sequence with a canonical pair on every pair of y.
inline undesign::Sequence compatible_sequence(std::mt19937& rng, const undesign::SecondaryStructure& y) {
  undesign::Sequence x = sequence(rng, y.length());
  static const char* kPairs[] = {"CG", "GC", "AU", "UA", "GU", "UG"};
  for (auto [i, j] : y.pairs()) {
    const char* p = kPairs[rng() % 6];
    x.set(i, undesign::base_code(p[0]));
    x.set(j, undesign::base_code(p[1]));
  }
  return x;
}

// Connected loop set grown from a random seed loop.
inline std::vector<int> connected_loops(std::mt19937& rng, const undesign::LoopDecomposition& d, int max_size) {
  std::vector<int> ids{static_cast<int>(rng() % d.size())};
  int target = 1 + static_cast<int>(rng() % max_size);
  for (int attempt = 0; attempt < 50 && static_cast<int>(ids.size()) < target; ++attempt) {
    int from = ids[rng() % ids.size()];
    auto nb = d.neighbors(from);
    if (nb.empty()) continue;
    int v = nb[rng() % nb.size()];
    if (std::find(ids.begin(), ids.end(), v) == ids.end()) ids.push_back(v);
  }
  return ids;
}

}  // namespace gen
