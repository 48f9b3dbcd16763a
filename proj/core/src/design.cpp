#include "undesign/design.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <thread>
#include <unordered_set>

namespace undesign {

BudgetExceeded::BudgetExceeded(double s)
    : std::runtime_error("enumeration size " + std::to_string(static_cast<long double>(s)) + " exceeds budget"),
      size(s) {}
JoinFailed::JoinFailed(bool exhausted_)
    : std::runtime_error(exhausted_ ? "constraint join exhausted" : "constraint join step limit reached"),
      exhausted(exhausted_) {}
TooLarge::TooLarge(double s)
    : std::runtime_error("brute-force size " + std::to_string(static_cast<long double>(s)) + " exceeds cap"),
      size(s) {}

void SearchBudget::validate() const {
  if (!(M > 0) || N <= 0 || K <= 0 || join_retries <= 0 || join_steps <= 0)
    throw std::invalid_argument("search budgets must be positive");
}

Constraint::Constraint(CriticalPositions positions, std::vector<Tuple> tuples)
    : positions_(std::move(positions)), tuples_(std::move(tuples)) {
  if (positions_.size() > kMaxPositions) throw std::invalid_argument("constraint over more than 32 positions");
  if (!std::is_sorted(positions_.begin(), positions_.end())) throw std::invalid_argument("positions must be sorted");
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

NucleotideAssignment Constraint::assignment(Tuple t, int n) const {
  NucleotideAssignment a(n);
  for (std::size_t k = 0; k < positions_.size(); ++k) a.set(positions_[k], base(t, k));
  return a;
}

bool Constraint::contains(const Sequence& x) const {
  Tuple t = 0;
  for (std::size_t k = 0; k < positions_.size(); ++k) t |= static_cast<Tuple>(x[positions_[k]] - 1) << (2 * k);
  return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

double enumeration_size(const CriticalPositions& positions, const SecondaryStructure& target) {
  double size = 1;
  for (int q : positions) {
    int partner = target.partner(q);
    bool both = partner && std::binary_search(positions.begin(), positions.end(), partner);
    if (!both) size *= 4;
    else if (q < partner) size *= 6;
  }
  return size;
}

namespace {

constexpr int kCanonical[6][2] = {{kC, kG}, {kG, kC}, {kA, kU}, {kU, kA}, {kG, kU}, {kU, kG}};

bool can_pair(int a, int b) {
  for (auto& c : kCanonical)
    if (c[0] == a && c[1] == b) return true;
  return false;
}

// One energy term tabulated over the codes of its positions.
struct TermTable {
  std::vector<int> slots;  // indices into the enumerated position list
  std::vector<Energy> table;
};

TermTable tabulate(const ParameterSet& p, const EnergyTerm& t, const CriticalPositions& pos, int n) {
  TermTable out;
  for (int q : t.positions)
    out.slots.push_back(static_cast<int>(std::lower_bound(pos.begin(), pos.end(), q) - pos.begin()));
  const std::size_t m = t.positions.size();
  out.table.resize(std::size_t{1} << (2 * m));
  Sequence x = Sequence::filled(n, kA);
  for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
    for (std::size_t k = 0; k < m; ++k) x.set(t.positions[k], static_cast<int>((idx >> (2 * k)) & 3u) + 1);
    out.table[idx] = term_energy(p, t, x);
  }
  return out;
}

// Calls f(tuple, ΔΔG(rival, target)) for every assignment of the refined
// differential positions with canonical target pairs. Return false from f to
// stop early.
template <class F>
CriticalPositions enumerate_difference(const ParameterSet& p, const Motif& target, const Motif& rival, double M,
                                       F&& f) {
  TermDifference d = term_difference(rival, target);
  CriticalPositions pos = d.positions();
  if (d.rival.empty() && d.target.empty()) throw std::invalid_argument("rival and target motifs do not differ");
  const SecondaryStructure& y = target.structure();
  double size = enumeration_size(pos, y);
  if (size > M || pos.size() > Constraint::kMaxPositions) throw BudgetExceeded(size);

  const int n = y.length();
  std::vector<TermTable> rt, tt;
  for (const auto& t : d.rival) rt.push_back(tabulate(p, t, pos, n));
  for (const auto& t : d.target) tt.push_back(tabulate(p, t, pos, n));

  // groups: a target pair inside pos (6 options) or a single slot (4)
  struct Group {
    int a, b;  // b = -1 for singles
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    int partner = y.partner(pos[k]);
    auto it = std::lower_bound(pos.begin(), pos.end(), partner);
    bool both = partner && it != pos.end() && *it == partner;
    if (!both) groups.push_back({static_cast<int>(k), -1});
    else if (pos[k] < partner) groups.push_back({static_cast<int>(k), static_cast<int>(it - pos.begin())});
  }

  // Terms touching each slot, so a digit change only re-reads those terms.
  struct Live {
    const TermTable* t;
    bool rival;
    std::size_t idx = 0;
  };
  std::vector<Live> live;
  for (const auto& t : rt) live.push_back({&t, true});
  for (const auto& t : tt) live.push_back({&t, false});
  std::vector<std::vector<std::pair<int, int>>> touch(pos.size());  // slot -> (term, bit shift)
  for (std::size_t q = 0; q < live.size(); ++q)
    for (std::size_t k = 0; k < live[q].t->slots.size(); ++k)
      touch[live[q].t->slots[k]].emplace_back(static_cast<int>(q), static_cast<int>(2 * k));

  std::vector<int> code(pos.size(), 0), digit(groups.size(), 0);
  Energy rsum = 0, tsum = 0;
  int rinf = 0, tinf = 0;
  Constraint::Tuple tup = 0;
  auto account = [&](const Live& l, int sign) {
    Energy e = l.t->table[l.idx];
    Energy& sum = l.rival ? rsum : tsum;
    int& inf = l.rival ? rinf : tinf;
    if (e >= kInf) inf += sign;
    else sum += sign * e;
  };
  for (const auto& l : live) account(l, +1);
  auto set_slot = [&](int slot, int c) {
    if (code[slot] == c) return;
    for (auto [q, shift] : touch[slot]) {
      Live& l = live[q];
      account(l, -1);
      l.idx = (l.idx & ~(std::size_t{3} << shift)) | (static_cast<std::size_t>(c) << shift);
      account(l, +1);
    }
    tup = (tup & ~(Constraint::Tuple{3} << (2 * slot))) | (static_cast<Constraint::Tuple>(c) << (2 * slot));
    code[slot] = c;
  };
  auto apply = [&](std::size_t g) {
    const Group& gr = groups[g];
    if (gr.b < 0) {
      set_slot(gr.a, digit[g]);
    } else {
      set_slot(gr.a, kCanonical[digit[g]][0] - 1);
      set_slot(gr.b, kCanonical[digit[g]][1] - 1);
    }
  };
  for (std::size_t g = 0; g < groups.size(); ++g) apply(g);
  while (true) {
    Energy ddg = tinf ? -kInf : rinf ? kInf : rsum - tsum;
    if (!f(tup, ddg)) break;
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      int radix = groups[g].b < 0 ? 4 : 6;
      if (++digit[g] < radix) {
        apply(g);
        break;
      }
      digit[g] = 0;
      apply(g);
    }
    if (g == groups.size()) break;
  }
  return pos;
}

// Removes tuples of a with no support in b on their shared positions.
bool revise(Constraint& a, const Constraint& b) {
  std::vector<std::pair<int, int>> shared;  // slot in a, slot in b
  const auto& pa = a.positions();
  const auto& pb = b.positions();
  for (std::size_t i = 0, j = 0; i < pa.size() && j < pb.size();) {
    if (pa[i] == pb[j]) shared.emplace_back(static_cast<int>(i++), static_cast<int>(j++));
    else if (pa[i] < pb[j]) ++i;
    else ++j;
  }
  if (shared.empty()) return false;
  auto key = [&](Constraint::Tuple t, bool first) {
    std::uint64_t k = 0;
    for (std::size_t r = 0; r < shared.size(); ++r) {
      int slot = first ? shared[r].first : shared[r].second;
      k |= ((t >> (2 * slot)) & 3u) << (2 * r);
    }
    return k;
  };
  auto& ts = a.mutable_tuples();
  std::size_t before = ts.size();
  if (shared.size() <= 12) {
    std::vector<char> support(std::size_t{1} << (2 * shared.size()), 0);
    for (auto t : b.tuples()) support[key(t, false)] = 1;
    std::erase_if(ts, [&](Constraint::Tuple t) { return !support[key(t, true)]; });
  } else {
    std::unordered_set<std::uint64_t> support;
    support.reserve(b.size() * 2);
    for (auto t : b.tuples()) support.insert(key(t, false));
    std::erase_if(ts, [&](Constraint::Tuple t) { return !support.count(key(t, true)); });
  }
  return ts.size() != before;
}

bool overlaps(const Constraint& a, const Constraint& b) {
  const auto& pa = a.positions();
  const auto& pb = b.positions();
  for (std::size_t i = 0, j = 0; i < pa.size() && j < pb.size();) {
    if (pa[i] == pb[j]) return true;
    pa[i] < pb[j] ? ++i : ++j;
  }
  return false;
}

}  // namespace

bool verify_single_rival(const ParameterSet& p, const Motif& target, const Motif& rival, double M) {
  bool never_loses = true;
  enumerate_difference(p, target, rival, M, [&](Constraint::Tuple, Energy ddg) {
    if (ddg > 0) never_loses = false;
    return never_loses;
  });
  return never_loses;
}

Constraint constraint_from_rival(const ParameterSet& p, const Motif& target, const Motif& rival, double M) {
  std::vector<Constraint::Tuple> wins;
  auto pos = enumerate_difference(p, target, rival, M, [&](Constraint::Tuple t, Energy ddg) {
    if (ddg > 0) wins.push_back(t);
    return true;
  });
  return Constraint(std::move(pos), std::move(wins));
}

void DesignSpace::propagate(std::vector<std::size_t> queue) {
  std::vector<char> queued(cs_.size(), 0);
  for (auto i : queue) queued[i] = 1;
  while (!queue.empty()) {
    std::size_t i = queue.back();
    queue.pop_back();
    queued[i] = 0;
    for (std::size_t j = 0; j < cs_.size(); ++j) {
      if (j == i || !overlaps(cs_[i], cs_[j])) continue;
      if (revise(cs_[j], cs_[i])) {
        if (cs_[j].empty()) {
          status_ = SpaceStatus::Empty;
          return;
        }
        if (!queued[j]) queued[j] = 1, queue.push_back(j);
      }
    }
  }
}

SpaceStatus DesignSpace::add(Constraint c) {
  if (status_ == SpaceStatus::Empty) return status_;
  cs_.push_back(std::move(c));
  std::size_t me = cs_.size() - 1;
  for (std::size_t j = 0; j < me; ++j) revise(cs_[me], cs_[j]);
  if (cs_[me].empty()) return status_ = SpaceStatus::Empty;
  propagate({me});
  return status_;
}

Intersection intersect_constraints(std::vector<Constraint> cs) {
  DesignSpace ds;
  // Seed with every constraint so each arc gets revised at least once.
  for (auto& c : cs) {
    if (c.empty()) return {std::move(cs), SpaceStatus::Empty};
  }
  Intersection out{std::move(cs), SpaceStatus::Open};
  std::vector<char> queued(out.constraints.size(), 1);
  std::vector<std::size_t> queue(out.constraints.size());
  for (std::size_t k = 0; k < queue.size(); ++k) queue[k] = k;
  auto& v = out.constraints;
  while (!queue.empty()) {
    std::size_t i = queue.back();
    queue.pop_back();
    queued[i] = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i || !overlaps(v[i], v[j])) continue;
      if (revise(v[j], v[i])) {
        if (v[j].empty()) {
          out.status = SpaceStatus::Empty;
          return out;
        }
        if (!queued[j]) queued[j] = 1, queue.push_back(j);
      }
    }
  }
  return out;
}

namespace {

int complement(int b) {
  switch (b) {
    case kA: return kU;
    case kC: return kG;
    case kG: return kC;
    default: return kA;
  }
}

class Joiner {
 public:
  Joiner(const std::vector<Constraint>& cs, const SecondaryStructure& y, std::uint64_t seed, long max_steps)
      : cs_(cs), y_(y), rng_(seed), max_steps_(max_steps), code_(y.length() + 1, 0) {
    order_constraints();
  }

  std::vector<int> run() {
    if (!dfs(0)) throw JoinFailed(true);
    return code_;
  }

 private:
  void order_constraints() {
    std::vector<char> used(cs_.size(), 0), seen(y_.length() + 1, 0);
    for (std::size_t step = 0; step < cs_.size(); ++step) {
      std::size_t best = cs_.size();
      long best_overlap = -1;
      for (std::size_t k = 0; k < cs_.size(); ++k) {
        if (used[k]) continue;
        long ov = 0;
        for (int q : cs_[k].positions()) ov += seen[q];
        if (ov > best_overlap || (ov == best_overlap && cs_[k].size() < cs_[best].size())) best = k, best_overlap = ov;
      }
      used[best] = 1;
      order_.push_back(best);
      for (int q : cs_[best].positions()) seen[q] = 1;
    }
  }

  bool dfs(std::size_t depth) {
    if (depth == order_.size()) return true;
    const Constraint& c = cs_[order_[depth]];
    const auto& ts = c.tuples();
    const auto& pos = c.positions();
    if (ts.empty()) return false;
    std::size_t offset = static_cast<std::size_t>(rng_() % ts.size());
    std::vector<int> placed;
    for (std::size_t q = 0; q < ts.size(); ++q) {
      if (++steps_ > max_steps_) throw JoinFailed(false);
      auto t = ts[(offset + q) % ts.size()];
      placed.clear();
      bool ok = true;
      for (std::size_t k = 0; k < pos.size() && ok; ++k) {
        int b = Constraint::base(t, k);
        int& cur = code_[pos[k]];
        if (cur == 0) cur = b, placed.push_back(pos[k]);
        else if (cur != b) ok = false;
      }
      for (std::size_t k = 0; k < placed.size() && ok; ++k) {
        int partner = y_.partner(placed[k]);
        if (partner && code_[partner] && !can_pair(code_[std::min(placed[k], partner)], code_[std::max(placed[k], partner)]))
          ok = false;
      }
      if (ok && dfs(depth + 1)) return true;
      for (int i : placed) code_[i] = 0;
    }
    return false;
  }

  const std::vector<Constraint>& cs_;
  const SecondaryStructure& y_;
  std::mt19937_64 rng_;
  long max_steps_, steps_ = 0;
  std::vector<int> code_;
  std::vector<std::size_t> order_;
};

}  // namespace

Sequence sample_sequence(const std::vector<Constraint>& cs, const SecondaryStructure& y, std::uint64_t seed,
                         long max_steps) {
  std::vector<int> code = Joiner(cs, y, seed, max_steps).run();
  const int n = y.length();
  Sequence x = Sequence::filled(n, kA);
  for (int i = 1; i <= n; ++i) {
    if (code[i]) {
      x.set(i, code[i]);
      continue;
    }
    int j = y.partner(i);
    if (!j) continue;
    if (code[j]) x.set(i, complement(code[j]));
    else x.set(i, i < j ? kC : kG);
  }
  return x;
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Designable: return "designable";
    case VerdictKind::Undesignable: return "undesignable";
    default: return "unknown";
  }
}

const char* reason_name(UnknownReason r) {
  switch (r) {
    case UnknownReason::BudgetN: return "budget-n";
    case UnknownReason::BudgetM: return "budget-m";
    case UnknownReason::Timeout: return "timeout";
    default: return "";
  }
}

Verdict rival_motif_search(const ParameterSet& p, const Motif& target, const SearchBudget& b, std::uint64_t seed) {
  b.validate();
  const SecondaryStructure& y = target.structure();
  const FoldConstraint fc = target.constraint();
  std::mt19937_64 rng(seed);
  DesignSpace space;
  Verdict v;
  std::set<std::string> seen;

  while (true) {
    if (space.empty()) {
      v.kind = VerdictKind::Undesignable;
      return v;
    }
    if (static_cast<long>(v.rivals.size()) > b.N) {
      v.reason = UnknownReason::BudgetN;
      return v;
    }
    ++v.stats.iterations;
    bool added = false;
    for (int k = 0; k < b.K && !space.empty(); ++k) {
      ++v.stats.samples;
      Sequence x;
      try {
        x = sample_sequence(space.constraints(), y, rng(), b.join_steps);
      } catch (const JoinFailed&) {
        if (++v.stats.join_failures > b.join_retries) {
          v.reason = UnknownReason::Timeout;
          return v;
        }
        continue;
      }
      FoldResult r = fold_constrained(p, x, fc);
      if (r.structure == y && !r.cooptimal && umfe_holds(p, x, target)) {
        v.kind = VerdictKind::Designable;
        v.witness = x;
        return v;
      }
      const SecondaryStructure& folded = r.structure == y ? *r.alternative : r.structure;
      if (!seen.insert(to_dotbracket(folded)).second) continue;
      ++v.stats.rivals_considered;
      Motif rival = region_motif(target, folded);
      Constraint c;
      try {
        c = constraint_from_rival(p, target, rival, b.M);
      } catch (const BudgetExceeded&) {
        continue;
      }
      v.rivals.push_back(std::move(rival));
      space.add(std::move(c));
      added = true;
    }
    if (!added && !space.empty()) {
      v.reason = UnknownReason::BudgetM;
      return v;
    }
  }
}

bool rivals_defeat(const ParameterSet& p, const Motif& target, const std::vector<Motif>& rivals, const Sequence& x) {
  auto a = full_assignment(x);
  for (const Motif& r : rivals)
    if (delta_delta_g(p, a, r, target) <= 0) return true;
  return false;
}

double brute_force_size(const Motif& target) {
  return std::pow(6.0, static_cast<double>(target.pairs().size())) *
         std::pow(4.0, static_cast<double>(target.unpaired_positions().size()));
}

BruteForceResult brute_force_decide(const ParameterSet& p, const Motif& target, double cap) {
  double size = brute_force_size(target);
  if (size > cap) throw TooLarge(size);
  const SecondaryStructure& y = target.structure();
  const FoldConstraint fc = target.constraint();
  BruteForceResult out{VerdictKind::Undesignable, std::nullopt, 0};

  Sequence x = default_fill(y);
  auto designs = [&] {
    ++out.enumerated;
    FoldResult r = fold_constrained(p, x, fc);
    return r.structure == y && !r.cooptimal;
  };
  // The constructive fill first: most motifs are designable and this is cheap.
  if (designs()) {
    out.kind = VerdictKind::Designable;
    out.witness = x;
    return out;
  }
  const auto& pairs = target.pairs();
  const auto& unpaired = target.unpaired_positions();
  std::vector<int> digit(pairs.size() + unpaired.size(), 0);
  auto apply = [&](std::size_t g) {
    if (g < pairs.size()) {
      x.set(pairs[g].first, kCanonical[digit[g]][0]);
      x.set(pairs[g].second, kCanonical[digit[g]][1]);
    } else {
      x.set(unpaired[g - pairs.size()], digit[g] + 1);
    }
  };
  out.enumerated = 0;
  for (std::size_t g = 0; g < digit.size(); ++g) apply(g);
  while (true) {
    if (designs()) {
      out.kind = VerdictKind::Designable;
      out.witness = x;
      return out;
    }
    std::size_t g = 0;
    for (; g < digit.size(); ++g) {
      int radix = g < pairs.size() ? 6 : 4;
      if (++digit[g] < radix) {
        apply(g);
        break;
      }
      digit[g] = 0;
      apply(g);
    }
    if (g == digit.size()) break;
  }
  return out;
}

std::vector<std::vector<int>> connected_loop_sets(const LoopDecomposition& d, int max_size) {
  if (max_size <= 0) max_size = d.size();
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> level;
  for (int u = 0; u < d.size(); ++u) level.insert({u});
  for (int size = 1; size <= max_size && !level.empty(); ++size) {
    out.insert(out.end(), level.begin(), level.end());
    std::set<std::vector<int>> next;
    for (const auto& s : level)
      for (int v : s)
        for (int u : d.neighbors(v)) {
          if (std::binary_search(s.begin(), s.end(), u)) continue;
          auto t = s;
          t.insert(std::lower_bound(t.begin(), t.end(), u), u);
          next.insert(std::move(t));
        }
    level = std::move(next);
  }
  return out;
}

std::vector<Motif> bottom_up_scan(const HostPtr& y, const std::function<bool(const Motif&)>& undesignable) {
  std::vector<Motif> found;
  for (const auto& ids : connected_loop_sets(*y)) {
    bool superset = false;
    for (const Motif& m : found)
      superset = superset || std::includes(ids.begin(), ids.end(), m.loop_ids().begin(), m.loop_ids().end());
    if (superset) continue;  // undesignable but not minimal
    Motif m(y, ids);
    if (undesignable(m)) found.push_back(std::move(m));
  }
  return found;
}

bool MotifStores::is_designable(const std::string& canonical) const {
  std::lock_guard lock(mu_);
  return designable_.count(canonical) != 0;
}

const MinimalEntry* MotifStores::minimal(const std::string& canonical) const {
  std::lock_guard lock(mu_);
  auto it = minimal_.find(canonical);
  return it == minimal_.end() ? nullptr : &it->second;
}

bool MotifStores::add_designable(const std::string& canonical) {
  std::lock_guard lock(mu_);
  return designable_.emplace(canonical, true).second;
}

bool MotifStores::add_minimal(const std::string& canonical, MinimalEntry e) {
  std::lock_guard lock(mu_);
  return minimal_.emplace(canonical, std::move(e)).second;
}

std::size_t MotifStores::designable_count() const {
  std::lock_guard lock(mu_);
  return designable_.size();
}

std::size_t MotifStores::minimal_count() const {
  std::lock_guard lock(mu_);
  return minimal_.size();
}

std::vector<std::string> MotifStores::designable_keys() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : designable_) out.push_back(k);
  return out;
}

std::vector<std::pair<std::string, MinimalEntry>> MotifStores::minimal_entries() const {
  std::lock_guard lock(mu_);
  return {minimal_.begin(), minimal_.end()};
}

const char* status_name(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Designable: return "designable";
    case CandidateStatus::Minimal: return "minimal";
    case CandidateStatus::Undesignable: return "undesignable";
    case CandidateStatus::SkippedSuperset: return "skipped-superset";
    default: return "unknown";
  }
}

std::vector<const CandidateResult*> ScanReport::minimal() const {
  std::vector<const CandidateResult*> out;
  for (const auto& r : results)
    if (r.status == CandidateStatus::Minimal) out.push_back(&r);
  return out;
}

std::uint64_t candidate_seed(std::uint64_t seed, const std::vector<int>& loops) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (int l : loops) h = mix(h ^ static_cast<std::uint64_t>(l));
  return h;
}

ScanReport fast_motif(const ParameterSet& p, const HostPtr& y, const ScanOptions& opt, MotifStores& stores,
                      std::string structure_id) {
  opt.budget.validate();
  auto start = std::chrono::steady_clock::now();
  ScanReport rep;
  rep.structure_id = std::move(structure_id);
  rep.structure = to_dotbracket(y->structure());
  rep.seed = opt.seed;
  rep.budget = opt.budget;

  // Candidates grouped by subset size; within a size, by center then subset.
  std::vector<std::vector<std::pair<int, std::vector<int>>>> levels;
  std::set<std::vector<int>> taken;
  for (int u = 0; u < y->size(); ++u) {
    auto nb = loop_neighborhood(*y, u);
    int k = static_cast<int>(nb.size());
    if (k > opt.max_neighbors) continue;
    if (static_cast<int>(levels.size()) < k) levels.resize(k);
    for (int size = 1; size <= k; ++size)
      for (unsigned mask = 1; mask < (1u << k); ++mask) {
        if (std::popcount(mask) != size) continue;
        std::vector<int> ids{u};
        for (int b = 0; b < k; ++b)
          if (mask >> b & 1u) ids.push_back(nb[b]);
        std::sort(ids.begin(), ids.end());
        if (taken.insert(ids).second) levels[size - 1].emplace_back(u, std::move(ids));
      }
  }

  std::vector<std::size_t> undesignable;  // indices into rep.results
  auto is_sub = [](const std::vector<int>& small, const std::vector<int>& big) {
    return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  for (auto& level : levels) {
    std::size_t base = rep.results.size();
    std::vector<Motif> motifs;
    std::vector<std::size_t> pending;  // indices into level
    for (std::size_t c = 0; c < level.size(); ++c) {
      auto& [center, ids] = level[c];
      motifs.emplace_back(y, ids);
      CandidateResult r;
      r.center = center;
      r.loops = ids;
      r.canonical = canonical_form(motifs.back()).canonical;
      ++rep.counts.candidates;
      bool superset = false;
      for (std::size_t u : undesignable) superset = superset || is_sub(rep.results[u].loops, ids);
      if (superset) {
        r.status = CandidateStatus::SkippedSuperset;
        r.source = "skip";
        ++rep.counts.skipped_superset;
      } else if (const MinimalEntry* known = stores.minimal(r.canonical)) {
        r.status = CandidateStatus::Minimal;
        r.source = "store";
        r.rivals = known->rivals;
        ++rep.counts.skipped_known;
      } else if (stores.is_designable(r.canonical)) {
        r.status = CandidateStatus::Designable;
        r.source = "store";
        ++rep.counts.evaluated;
      } else {
        // Rotation-equivalent candidates in one batch are searched separately:
        // rivals live on each occurrence's own region.
        r.source = "search";
        ++rep.counts.evaluated;
        pending.push_back(c);
      }
      rep.results.push_back(std::move(r));
    }

    std::vector<Verdict> verdicts(level.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < pending.size();) {
        std::size_t c = pending[k];
        verdicts[c] = rival_motif_search(p, motifs[c], opt.budget, candidate_seed(opt.seed, level[c].second));
      }
    };
    int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(pending.size())));
    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }

    for (std::size_t c = 0; c < level.size(); ++c) {
      CandidateResult& r = rep.results[base + c];
      if (r.source != "search") {
        if (r.status == CandidateStatus::Minimal) undesignable.push_back(base + c);
        continue;
      }
      const Verdict& v = verdicts[c];
      r.stats = v.stats;
      if (v.kind == VerdictKind::Designable) {
        r.status = CandidateStatus::Designable;
        r.witness = v.witness;
        stores.add_designable(r.canonical);
      } else if (v.kind == VerdictKind::Unknown) {
        r.status = CandidateStatus::Unknown;
        r.reason = v.reason;
      } else {
        r.rivals = v.rivals;
        bool minimal = true;
        for (std::size_t e = 0; e < base + c; ++e) {
          const CandidateResult& s = rep.results[e];
          if (is_sub(s.loops, r.loops) && s.status != CandidateStatus::Designable) minimal = false;
        }
        r.status = minimal ? CandidateStatus::Minimal : CandidateStatus::Undesignable;
        if (minimal) stores.add_minimal(r.canonical, {motifs[c], r.rivals});
        undesignable.push_back(base + c);
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace undesign
