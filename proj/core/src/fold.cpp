#include "undesign/fold.hpp"

#include <algorithm>
#include <cstdint>

#include "undesign/energy.hpp"

namespace undesign {

FoldConstraint FoldConstraint::unconstrained(int n) {
  FoldConstraint c;
  c.n = n;
  c.forced.assign(n + 1, 0);
  c.free.assign(n + 1, 1);
  c.free[0] = 0;
  return c;
}

FoldConstraint FoldConstraint::parse(std::string_view text) {
  FoldConstraint c;
  c.n = static_cast<int>(text.size());
  c.forced.assign(c.n + 1, 0);
  c.free.assign(c.n + 1, 0);
  std::vector<int> stack;
  for (int k = 1; k <= c.n; ++k) {
    switch (text[k - 1]) {
      case '(':
        stack.push_back(k);
        break;
      case ')':
        if (stack.empty()) throw std::invalid_argument("unbalanced ')' at " + std::to_string(k));
        c.forced[k] = stack.back();
        c.forced[stack.back()] = k;
        stack.pop_back();
        break;
      case '.':
        c.free[k] = 1;
        break;
      case 'x':
        break;
      default:
        throw std::invalid_argument(std::string("bad constraint character '") + text[k - 1] + "'");
    }
  }
  if (!stack.empty()) throw std::invalid_argument("unbalanced '(' at " + std::to_string(stack.back()));
  return c;
}

std::string FoldConstraint::str() const {
  std::string s;
  for (int k = 1; k <= n; ++k) {
    if (forced[k]) s.push_back(forced[k] > k ? '(' : ')');
    else s.push_back(free[k] ? '.' : 'x');
  }
  return s;
}

namespace {

using Count = std::uint8_t;  // number of optimal derivations, saturated at 2
Count cmul(Count a, Count b) { return static_cast<Count>(std::min(2, a * b)); }
Count cadd(Count a, Count b) { return static_cast<Count>(std::min(2, a + b)); }

struct Cell {
  Energy e = kInf;
  Count c = 0;
  void offer(Energy v, Count k) {
    if (v >= kInf || !k) return;
    if (v < e) {
      e = v;
      c = k;
    } else if (v == e) {
      c = cadd(c, k);
    }
  }
};

enum class Slot : std::uint8_t { Free, Fixed, BlockL, BlockR, RootL, RootR };

struct Task {
  enum Kind : std::uint8_t { V, WM, WM1, W } k = V;
  int a = 0, b = 0;
};

// Folding restricted to one loop region. Indices s, t run over the region's
// level positions: free and fixed bases, the two ends of every forced pair
// directly inside, and the enclosing forced pair if there is one. A forced
// inner pair is an opaque block with energy 0; its interior is constant.
class Region {
 public:
  Region(const ParameterSet& p, const Sequence& x, const FoldConstraint& c) : p_(p), x_(x), n_(x.length()) {
    if (c.n != n_) throw std::invalid_argument("constraint length does not match sequence length");
    std::vector<Pair> forced_pairs;
    for (int k = 1; k <= n_; ++k) {
      int q = c.forced[k];
      if (!q) continue;
      if (q < 1 || q > n_ || c.forced[q] != k) throw std::invalid_argument("forced pairs are not symmetric");
      if (c.free[k]) throw std::invalid_argument("position " + std::to_string(k) + " is both forced and free");
      if (q > k) {
        forced_pairs.emplace_back(k, q);
        if (!pair_type(x[k], x[q]))
          throw Infeasible("forced pair (" + std::to_string(k) + "," + std::to_string(q) + ") is not canonical");
      }
    }
    forced_ = SecondaryStructure(n_, forced_pairs);
    max_loop_ = c.max_interior;

    std::vector<int> enclosing(n_ + 1, 0), stack;
    for (int k = 1; k <= n_; ++k) {
      int q = c.forced[k];
      if (q && q < k) stack.pop_back();
      enclosing[k] = stack.empty() ? 0 : stack.back();
      if (q > k) stack.push_back(k);
    }
    int root = -1;
    for (int k = 1; k <= n_; ++k) {
      if (!c.free[k]) continue;
      if (root < 0) root = enclosing[k];
      else if (root != enclosing[k]) throw std::invalid_argument("free positions span more than one loop region");
    }
    if (root < 0) {
      trivial_ = true;
      return;
    }
    root_ = root;
    if (root_) {
      pos_.push_back(root_);
      slot_.push_back(Slot::RootL);
    }
    int lo = root_ ? root_ + 1 : 1, hi = root_ ? c.forced[root_] - 1 : n_;
    for (int k = lo; k <= hi; ++k) {
      if (enclosing[k] != root_) continue;
      pos_.push_back(k);
      if (c.free[k]) slot_.push_back(Slot::Free);
      else if (!c.forced[k]) slot_.push_back(Slot::Fixed);
      else slot_.push_back(c.forced[k] > k ? Slot::BlockL : Slot::BlockR);
    }
    if (root_) {
      pos_.push_back(c.forced[root_]);
      slot_.push_back(Slot::RootR);
    }
    r_ = static_cast<int>(pos_.size());
    bad_.assign(r_ + 1, 0);
    for (int s = 0; s < r_; ++s) bad_[s + 1] = bad_[s] + (unpairable(s) ? 0 : 1);

    // Energy of everything outside the region loop.
    auto loops = decompose_loops(forced_);
    for (const Loop& l : loops) {
      bool region_loop = root_ ? (l.kind != LoopKind::External && l.pairs[0].first == root_)
                               : l.kind == LoopKind::External;
      if (!region_loop) constant_ = add_energy(constant_, loop_energy(p_, l, x_));
    }
    fill();
  }

  Energy mfe() const {
    if (trivial_) return structure_energy(p_, x_, forced_);
    return add_energy(constant_, top().e);
  }
  Count count() const { return trivial_ ? 1 : top().c; }

  std::vector<SecondaryStructure> enumerate(int limit) {
    std::vector<SecondaryStructure> out;
    if (limit <= 0) return out;
    if (trivial_) {
      out.push_back(forced_);
      return out;
    }
    if (top().e >= kInf) return out;
    std::vector<Pair> pairs = forced_.pairs();
    Task t = root_ ? Task{Task::V, 0, r_ - 1} : Task{Task::W, 0, r_};
    explore({t}, pairs, out, limit);
    return out;
  }

 private:
  bool unpairable(int s) const { return slot_[s] == Slot::Free || slot_[s] == Slot::Fixed; }
  bool all_unpaired(int a, int b) const { return a > b || bad_[b + 1] == bad_[a]; }
  int type(int s, int t) const { return pair_type(x_[pos_[s]], x_[pos_[t]]); }
  std::size_t at(int a, int b) const { return static_cast<std::size_t>(a) * r_ + b; }
  const Cell& top() const { return root_ ? V_[at(0, r_ - 1)] : W_[r_]; }

  const Cell& cell(const Task& t) const {
    switch (t.k) {
      case Task::V:
        return V_[at(t.a, t.b)];
      case Task::WM:
        return WM_[at(t.a, t.b)];
      case Task::WM1:
        return WM1_[at(t.a, t.b)];
      case Task::W:
        return W_[t.b];
    }
    return W_[0];
  }
  // WM over an empty interval is infeasible.
  const Cell& wm(int a, int b) const { return a > b ? empty_ : WM_[at(a, b)]; }

  Energy ml_stem(int s, int t) const {
    return nn::multi_stem(p_, type(s, t), x_[pos_[s] - 1], x_[pos_[t] + 1]);
  }
  Energy ext_stem(int s, int t) const {
    int i = pos_[s], j = pos_[t];
    return nn::exterior_stem(p_, type(s, t), i > 1 ? x_[i - 1] : -1, j < n_ ? x_[j + 1] : -1);
  }

  // Calls f(energy, count, sub1, sub2, nsub) for every decomposition of t.
  template <class F>
  void alternatives(const Task& task, F&& f) const {
    const int a = task.a, b = task.b;
    const Energy cu = p_.ml_base;
    switch (task.k) {
      case Task::V: {
        if (slot_[a] == Slot::BlockL) {
          if (b == a + 1 && slot_[b] == Slot::BlockR) f(0, Count{1}, Task{}, Task{}, 0);
          return;
        }
        bool ok = (slot_[a] == Slot::Free && slot_[b] == Slot::Free && type(a, b)) ||
                  (slot_[a] == Slot::RootL && slot_[b] == Slot::RootR);
        if (!ok) return;
        const int i = pos_[a], j = pos_[b];
        if (all_unpaired(a + 1, b - 1) && j - i - 1 >= kMinHairpin)
          f(nn::hairpin(p_, i, j, x_), Count{1}, Task{}, Task{}, 0);
        for (int c = a + 1; c < b - 1; ++c) {
          if (!all_unpaired(a + 1, c - 1)) break;
          int u1 = pos_[c] - i - 1;
          if (u1 > max_loop_) break;
          for (int d = b - 1; d > c; --d) {
            if (!all_unpaired(d + 1, b - 1)) break;
            int u2 = j - pos_[d] - 1;
            if (u1 + u2 > max_loop_) break;
            const Cell& in = V_[at(c, d)];
            if (in.e >= kInf) continue;
            f(add_energy(nn::interior(p_, i, j, pos_[c], pos_[d], x_), in.e), in.c, Task{Task::V, c, d}, Task{}, 1);
          }
        }
        Energy closing = p_.ml_closing + nn::multi_stem(p_, reverse_pair_type(type(a, b)), x_[j - 1], x_[i + 1]);
        for (int u = a + 2; u < b; ++u) {
          const Cell& l = wm(a + 1, u - 1);
          const Cell& rgt = WM1_[at(u, b - 1)];
          if (l.e >= kInf || rgt.e >= kInf) continue;
          f(closing + l.e + rgt.e, cmul(l.c, rgt.c), Task{Task::WM, a + 1, u - 1}, Task{Task::WM1, u, b - 1}, 2);
        }
        return;
      }
      case Task::WM1: {
        const Cell& v = V_[at(a, b)];
        if (v.e < kInf) f(v.e + ml_stem(a, b), v.c, Task{Task::V, a, b}, Task{}, 1);
        if (b > a && unpairable(b)) {
          const Cell& w = WM1_[at(a, b - 1)];
          if (w.e < kInf) f(w.e + cu, w.c, Task{Task::WM1, a, b - 1}, Task{}, 1);
        }
        return;
      }
      case Task::WM: {
        const Cell& one = WM1_[at(a, b)];
        if (one.e < kInf) f(one.e, one.c, Task{Task::WM1, a, b}, Task{}, 1);
        for (int l = a + 1; l < b; ++l) {
          const Cell& v = V_[at(a, l)];
          const Cell& rest = WM_[at(l + 1, b)];
          if (v.e >= kInf || rest.e >= kInf) continue;
          f(v.e + ml_stem(a, l) + rest.e, cmul(v.c, rest.c), Task{Task::V, a, l}, Task{Task::WM, l + 1, b}, 2);
        }
        if (a < b && unpairable(a)) {
          const Cell& w = WM_[at(a + 1, b)];
          if (w.e < kInf) f(w.e + cu, w.c, Task{Task::WM, a + 1, b}, Task{}, 1);
        }
        return;
      }
      case Task::W: {
        // prefix of length b
        if (b == 0) {
          f(0, Count{1}, Task{}, Task{}, 0);
          return;
        }
        const int t = b - 1;
        for (int s = 0; s < t; ++s) {
          const Cell& v = V_[at(s, t)];
          const Cell& w = W_[s];
          if (v.e >= kInf || w.e >= kInf) continue;
          f(w.e + v.e + ext_stem(s, t), cmul(w.c, v.c), Task{Task::W, 0, s}, Task{Task::V, s, t}, 2);
        }
        if (unpairable(t) && W_[t].e < kInf) f(W_[t].e, W_[t].c, Task{Task::W, 0, t}, Task{}, 1);
        return;
      }
    }
  }

  void fill() {
    const std::size_t cells = static_cast<std::size_t>(r_) * r_;
    V_.assign(cells, Cell{});
    WM_.assign(cells, Cell{});
    WM1_.assign(cells, Cell{});
    for (int d = 0; d < r_; ++d) {
      for (int a = 0; a + d < r_; ++a) {
        const int b = a + d;
        for (auto* table : {&V_, &WM1_, &WM_}) {
          Task::Kind k = table == &V_ ? Task::V : table == &WM1_ ? Task::WM1 : Task::WM;
          if (k == Task::V && d == 0) continue;
          Cell& cell = (*table)[at(a, b)];
          alternatives(Task{k, a, b}, [&](Energy e, Count c, Task, Task, int) { cell.offer(e, c); });
        }
      }
    }
    if (!root_) {
      W_.assign(r_ + 1, Cell{});
      for (int t = 0; t <= r_; ++t)
        alternatives(Task{Task::W, 0, t}, [&](Energy e, Count c, Task, Task, int) { W_[t].offer(e, c); });
    }
  }

  void explore(std::vector<Task> stack, std::vector<Pair>& pairs, std::vector<SecondaryStructure>& out,
               int limit) const {
    if (static_cast<int>(out.size()) >= limit) return;
    if (stack.empty()) {
      out.emplace_back(n_, pairs);
      return;
    }
    Task task = stack.back();
    stack.pop_back();
    const Energy target = cell(task).e;
    bool adds_pair = task.k == Task::V && slot_[task.a] == Slot::Free;
    if (adds_pair) pairs.emplace_back(pos_[task.a], pos_[task.b]);
    alternatives(task, [&](Energy e, Count, Task s1, Task s2, int nsub) {
      if (e != target || static_cast<int>(out.size()) >= limit) return;
      std::vector<Task> next = stack;
      if (nsub == 2) next.push_back(s2);
      if (nsub >= 1) next.push_back(s1);
      explore(std::move(next), pairs, out, limit);
    });
    if (adds_pair) pairs.pop_back();
  }

  const ParameterSet& p_;
  const Sequence& x_;
  int n_;
  int max_loop_ = 30;
  SecondaryStructure forced_;
  bool trivial_ = false;
  int root_ = 0;
  int r_ = 0;
  std::vector<int> pos_;
  std::vector<Slot> slot_;
  std::vector<int> bad_;
  Energy constant_ = 0;
  std::vector<Cell> V_, WM_, WM1_, W_;
  Cell empty_;
};

}  // namespace

FoldResult fold_constrained(const ParameterSet& p, const Sequence& x, const FoldConstraint& c) {
  Region region(p, x, c);
  FoldResult r;
  r.mfe = region.mfe();
  if (r.mfe >= kInf) throw Infeasible("no structure satisfies the constraint");
  auto all = region.enumerate(2);
  r.structure = all.front();
  r.cooptimal = region.count() >= 2;
  if (all.size() > 1) r.alternative = all[1];
  return r;
}

std::vector<SecondaryStructure> optimal_structures(const ParameterSet& p, const Sequence& x, const FoldConstraint& c,
                                                   int limit) {
  Region region(p, x, c);
  return region.enumerate(limit);
}

bool umfe_holds(const ParameterSet& p, const Sequence& x, const SecondaryStructure& y, const FoldConstraint& c) {
  try {
    FoldResult r = fold_constrained(p, x, c);
    return !r.cooptimal && r.structure == y;
  } catch (const Infeasible&) {
    return false;
  }
}

}  // namespace undesign
