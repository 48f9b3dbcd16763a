#include "undesign/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace undesign {

std::vector<int> NucleotideAssignment::domain() const {
  std::vector<int> out;
  for (int i = 1; i <= length(); ++i)
    if (base_[i] >= 0) out.push_back(i);
  return out;
}

NucleotideAssignment project(const Sequence& x, const CriticalPositions& I) {
  NucleotideAssignment a(x.length());
  for (int i : I) {
    if (i < 1 || i > x.length())
      throw OutOfRange("position " + std::to_string(i) + " outside sequence of length " + std::to_string(x.length()));
    a.set(i, x[i]);
  }
  return a;
}

NucleotideAssignment full_assignment(const Sequence& x) {
  NucleotideAssignment a(x.length());
  for (int i = 1; i <= x.length(); ++i) a.set(i, x[i]);
  return a;
}

bool EnergyTerm::operator<(const EnergyTerm& o) const {
  return std::tie(kind, i, j, k, l) < std::tie(o.kind, o.i, o.j, o.k, o.l);
}

namespace {

Energy extrapolate(const Energy (&table)[31], double lxc, int size) {
  if (size <= 30) return table[size];
  return table[30] + static_cast<Energy>(lxc * std::log(size / 30.0));
}

template <class Get>
Energy hairpin_t(const ParameterSet& p, int i, int j, Get get) {
  int type = pair_type(get(i), get(j));
  if (!type) return kInf;
  int size = j - i - 1;
  if (size < kMinHairpin) return kInf;
  Energy e = extrapolate(p.hairpin, p.lxc, size);
  auto loop_string = [&]() {
    std::string s;
    for (int k = i; k <= j; ++k) s.push_back(base_char(get(k)));
    return s;
  };
  if (size == 4) {
    auto it = p.tetraloops.find(loop_string());
    if (it != p.tetraloops.end()) return it->second;
  } else if (size == 6) {
    auto it = p.hexaloops.find(loop_string());
    if (it != p.hexaloops.end()) return it->second;
  } else if (size == 3) {
    auto it = p.triloops.find(loop_string());
    if (it != p.triloops.end()) return it->second;
    return e + (type > 2 ? p.terminal_au : 0);
  }
  return e + p.mismatch_hairpin[type][get(i + 1)][get(j - 1)];
}

template <class Get>
Energy interior_t(const ParameterSet& p, int i, int j, int k, int l, Get get) {
  int type = pair_type(get(i), get(j));
  int type2 = pair_type(get(l), get(k));
  if (!type || !type2) return kInf;
  int n1 = k - i - 1, n2 = j - l - 1;
  int nl = std::max(n1, n2), ns = std::min(n1, n2);
  if (nl == 0) return p.stack[type][type2];
  if (ns == 0) {
    Energy e = extrapolate(p.bulge, p.lxc, nl);
    if (nl == 1) {
      e += p.stack[type][type2];
    } else {
      if (type > 2) e += p.terminal_au;
      if (type2 > 2) e += p.terminal_au;
    }
    return e;
  }
  int si = get(i + 1), sj = get(j - 1), sp = get(k - 1), sq = get(l + 1);
  if (ns == 1) {
    if (nl == 1 && p.has_int11) return p.int11[type][type2][si][sj];
    if (nl == 2 && p.has_int21) {
      if (n1 == 1) return p.int21[type][type2][si][sq][sj];
      return p.int21[type2][type][sq][si][sp];
    }
    if (nl > 2) {
      Energy e = extrapolate(p.interior, p.lxc, nl + 1);
      e += std::min(p.ninio_max, (nl - ns) * p.ninio);
      e += p.mismatch_interior_1n[type][si][sj] + p.mismatch_interior_1n[type2][sq][sp];
      return e;
    }
  } else if (ns == 2) {
    if (nl == 2 && p.has_int22 && type <= 6 && type2 <= 6) return p.int22[type][type2][si][sp][sq][sj];
    if (nl == 3) {
      Energy e = p.interior[5] + p.ninio;
      e += p.mismatch_interior_23[type][si][sj] + p.mismatch_interior_23[type2][sq][sp];
      return e;
    }
  }
  Energy e = extrapolate(p.interior, p.lxc, nl + ns);
  e += std::min(p.ninio_max, (nl - ns) * p.ninio);
  e += p.mismatch_interior[type][si][sj] + p.mismatch_interior[type2][sq][sp];
  return e;
}

Energy stem_t(const ParameterSet& p, const Energy (&mm)[8][5][5], int type, int n5, int n3) {
  Energy e = 0;
  if (n5 >= 0 && n3 >= 0) e += mm[type][n5][n3];
  else if (n5 >= 0) e += p.dangle5[type][n5];
  else if (n3 >= 0) e += p.dangle3[type][n3];
  if (type > 2) e += p.terminal_au;
  return e;
}

template <class Get>
Energy term_t(const ParameterSet& p, const EnergyTerm& t, Get get) {
  using K = EnergyTerm::Kind;
  switch (t.kind) {
    case K::Hairpin:
      return hairpin_t(p, t.i, t.j, get);
    case K::TwoPair:
      return interior_t(p, t.i, t.j, t.k, t.l, get);
    case K::MultiClosing: {
      int type = pair_type(get(t.i), get(t.j));
      if (!type) return kInf;
      return nn::multi_stem(p, reverse_pair_type(type), get(t.j - 1), get(t.i + 1));
    }
    case K::MultiStem: {
      int type = pair_type(get(t.i), get(t.j));
      if (!type) return kInf;
      return nn::multi_stem(p, type, get(t.i - 1), get(t.j + 1));
    }
    case K::ExteriorStem: {
      int type = pair_type(get(t.i), get(t.j));
      if (!type) return kInf;
      int n = t.k;
      return nn::exterior_stem(p, type, t.i > 1 ? get(t.i - 1) : -1, t.j < n ? get(t.j + 1) : -1);
    }
    case K::MultiConstant:
      return p.ml_closing + p.ml_base * t.k;
  }
  return kInf;
}

}  // namespace

namespace nn {

Energy hairpin(const ParameterSet& p, int i, int j, const Sequence& x) {
  return hairpin_t(p, i, j, [&](int k) { return x[k]; });
}

Energy interior(const ParameterSet& p, int i, int j, int k, int l, const Sequence& x) {
  return interior_t(p, i, j, k, l, [&](int q) { return x[q]; });
}

Energy multi_stem(const ParameterSet& p, int type, int n5, int n3) {
  return stem_t(p, p.mismatch_multi, type, n5, n3) + p.ml_intern;
}

Energy exterior_stem(const ParameterSet& p, int type, int n5, int n3) {
  return stem_t(p, p.mismatch_exterior, type, n5, n3);
}

}  // namespace nn

std::vector<EnergyTerm> loop_terms(const Loop& l, int n) {
  using K = EnergyTerm::Kind;
  std::vector<EnergyTerm> out;
  switch (l.kind) {
    case LoopKind::External:
      for (auto [i, j] : l.pairs) {
        EnergyTerm t{K::ExteriorStem, i, j, n, 0, {i, j}};
        if (i > 1) t.positions.push_back(i - 1);
        if (j < n) t.positions.push_back(j + 1);
        out.push_back(std::move(t));
      }
      break;
    case LoopKind::Hairpin:
      out.push_back({K::Hairpin, l.pairs[0].first, l.pairs[0].second, 0, 0, critical_positions(l, n)});
      break;
    case LoopKind::Stack:
    case LoopKind::Bulge:
    case LoopKind::Internal: {
      auto [i, j] = l.pairs[0];
      auto [k, q] = l.pairs[1];
      EnergyTerm t{K::TwoPair, i, j, k, q, {i, j, k, q}};
      if (l.kind == LoopKind::Internal) t.positions.insert(t.positions.end(), {i + 1, j - 1, k - 1, q + 1});
      out.push_back(std::move(t));
      break;
    }
    case LoopKind::Multi: {
      auto [i, j] = l.pairs[0];
      out.push_back({K::MultiClosing, i, j, 0, 0, {i, j, i + 1, j - 1}});
      for (std::size_t b = 1; b < l.pairs.size(); ++b) {
        auto [a, c] = l.pairs[b];
        out.push_back({K::MultiStem, a, c, 0, 0, {a, c, a - 1, c + 1}});
      }
      out.push_back({K::MultiConstant, i, j, l.total_unpaired(), 0, {}});
      break;
    }
  }
  return out;
}

Energy term_energy(const ParameterSet& p, const EnergyTerm& t, const NucleotideAssignment& a) {
  return term_t(p, t, [&](int k) { return a[k]; });
}

Energy term_energy(const ParameterSet& p, const EnergyTerm& t, const Sequence& x) {
  return term_t(p, t, [&](int k) { return x[k]; });
}

namespace {
template <class Assign>
Energy loop_energy_t(const ParameterSet& p, const Loop& l, const Assign& a, int n) {
  Energy e = 0;
  for (const auto& t : loop_terms(l, n)) {
    e = add_energy(e, term_energy(p, t, a));
    if (e >= kInf) return kInf;
  }
  return e;
}
}  // namespace

Energy loop_energy(const ParameterSet& p, const Loop& l, const NucleotideAssignment& a) {
  return loop_energy_t(p, l, a, a.length());
}

Energy loop_energy(const ParameterSet& p, const Loop& l, const Sequence& x) {
  return loop_energy_t(p, l, x, x.length());
}

Energy structure_energy(const ParameterSet& p, const Sequence& x, const SecondaryStructure& y) {
  if (x.length() != y.length())
    throw std::invalid_argument("sequence length " + std::to_string(x.length()) + " does not match structure length " +
                                std::to_string(y.length()));
  Energy e = 0;
  for (const Loop& l : decompose_loops(y)) {
    e = add_energy(e, loop_energy(p, l, x));
    if (e >= kInf) return kInf;
  }
  return e;
}

}  // namespace undesign
