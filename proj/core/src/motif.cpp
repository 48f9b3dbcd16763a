#include "undesign/motif.hpp"

#include <algorithm>
#include <sstream>

namespace undesign {

HostPtr make_host(SecondaryStructure s) { return std::make_shared<const LoopDecomposition>(std::move(s)); }

Motif::Motif(HostPtr host, std::vector<int> loop_ids) : host_(std::move(host)), ids_(std::move(loop_ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  if (ids_.empty()) throw std::invalid_argument("motif needs at least one loop");
  for (int id : ids_)
    if (id < 0 || id >= host_->size()) throw std::out_of_range("loop id " + std::to_string(id) + " out of range");

  std::vector<int> seen{ids_.front()};
  for (std::size_t k = 0; k < seen.size(); ++k)
    for (int v : host_->neighbors(seen[k]))
      if (contains(v) && std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
  if (seen.size() != ids_.size()) throw NotContiguous("loops do not form a connected motif");

  const int n = host_->structure().length();
  for (int id : ids_) {
    const Loop& l = host_->loop(id);
    for (const Pair& p : l.pairs) pairs_.push_back(p);
    for (int q : l.unpaired_positions(n)) unpaired_.push_back(q);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  std::sort(unpaired_.begin(), unpaired_.end());
  for (const Pair& p : pairs_) {
    int k = host_->pair_index(p.first);
    if (contains(host_->inner_loop(k)) && contains(host_->outer_loop(k))) internal_.push_back(p);
    else boundary_.push_back(p);
  }
}

bool Motif::contains(int loop_id) const { return std::binary_search(ids_.begin(), ids_.end(), loop_id); }

Pair Motif::outer_pair() const {
  for (const Pair& p : boundary_) {
    int k = host_->pair_index(p.first);
    if (contains(host_->inner_loop(k))) return p;
  }
  throw std::invalid_argument("motif contains the exterior loop and has no outer pair");
}

std::vector<int> Motif::free_positions() const {
  std::vector<int> out = unpaired_;
  for (auto [i, j] : internal_) out.insert(out.end(), {i, j});
  std::sort(out.begin(), out.end());
  return out;
}

FoldConstraint Motif::constraint() const {
  const SecondaryStructure& s = structure();
  FoldConstraint c = FoldConstraint::unconstrained(s.length());
  std::fill(c.free.begin(), c.free.end(), 0);
  for (auto [i, j] : s.pairs()) c.forced[i] = j, c.forced[j] = i;
  for (auto [i, j] : internal_) c.forced[i] = c.forced[j] = 0;
  for (int k : free_positions()) c.free[k] = 1;
  c.max_interior = std::max(30, host_->largest_two_pair_loop());
  return c;
}

std::string Motif::str() const {
  std::string s = to_dotbracket(structure()) + "|loops=";
  for (std::size_t k = 0; k < ids_.size(); ++k) s += (k ? "," : "") + std::to_string(ids_[k]);
  return s;
}

bool Motif::operator==(const Motif& o) const { return ids_ == o.ids_ && structure() == o.structure(); }

Motif extract_motif(const HostPtr& host, std::vector<int> ids) { return Motif(host, std::move(ids)); }

Motif extract_motif(const SecondaryStructure& y, std::vector<int> ids) { return Motif(make_host(y), std::move(ids)); }

Motif parse_motif(std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos || text.substr(bar + 1, 6) != "loops=")
    throw std::invalid_argument("motif text must look like 'dotbracket|loops=1,2'");
  SecondaryStructure s = parse_dotbracket(text.substr(0, bar));
  std::vector<int> ids;
  std::istringstream in(std::string(text.substr(bar + 7)));
  for (std::string tok; std::getline(in, tok, ',');) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != tok.size()) throw std::invalid_argument("bad loop id '" + tok + "'");
    ids.push_back(v);
  }
  return Motif(make_host(std::move(s)), std::move(ids));
}

bool is_submotif(const Motif& a, const Motif& b) {
  if (!(a.structure() == b.structure())) throw DifferentHost("motifs belong to different structures");
  return std::includes(b.loop_ids().begin(), b.loop_ids().end(), a.loop_ids().begin(), a.loop_ids().end());
}

std::vector<int> loop_neighborhood(const LoopDecomposition& d, int loop_id) { return d.neighbors(loop_id); }

LoopDifference loop_difference(const Motif& rival, const Motif& target) {
  if (rival.structure().length() != target.structure().length())
    throw DifferentHost("motifs come from structures of different lengths");
  LoopDifference d;
  auto only = [](const Motif& a, const Motif& b, std::vector<Loop>& out) {
    for (int id : a.loop_ids()) {
      const Loop& l = a.host().loop(id);
      bool shared = false;
      for (int other : b.loop_ids())
        if (b.host().loop(other) == l) shared = true;
      if (!shared) out.push_back(l);
    }
  };
  only(rival, target, d.rival_only);
  only(target, rival, d.target_only);
  return d;
}

CriticalPositions differential_positions(const Motif& rival, const Motif& target) {
  auto d = loop_difference(rival, target);
  const int n = rival.structure().length();
  CriticalPositions out;
  for (const auto* side : {&d.rival_only, &d.target_only})
    for (const Loop& l : *side)
      for (int q : critical_positions(l, n)) out.push_back(q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CriticalPositions TermDifference::positions() const {
  CriticalPositions out;
  for (const auto* side : {&rival, &target})
    for (const EnergyTerm& t : *side) out.insert(out.end(), t.positions.begin(), t.positions.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TermDifference term_difference(const Motif& rival, const Motif& target) {
  auto d = loop_difference(rival, target);
  const int n = rival.structure().length();
  TermDifference out;
  for (const Loop& l : d.rival_only)
    for (auto& t : loop_terms(l, n)) out.rival.push_back(std::move(t));
  std::vector<char> used;
  std::vector<EnergyTerm> target_terms;
  for (const Loop& l : d.target_only)
    for (auto& t : loop_terms(l, n)) target_terms.push_back(std::move(t));
  used.assign(target_terms.size(), 0);
  std::vector<EnergyTerm> kept;
  for (auto& t : out.rival) {
    bool cancelled = false;
    for (std::size_t k = 0; k < target_terms.size() && !cancelled; ++k)
      if (!used[k] && target_terms[k].same_as(t)) used[k] = 1, cancelled = true;
    if (!cancelled) kept.push_back(std::move(t));
  }
  out.rival = std::move(kept);
  for (std::size_t k = 0; k < target_terms.size(); ++k)
    if (!used[k]) out.target.push_back(std::move(target_terms[k]));
  return out;
}

Energy motif_energy(const ParameterSet& p, const NucleotideAssignment& a, const Motif& m) {
  Energy e = 0;
  for (int id : m.loop_ids()) e = add_energy(e, loop_energy(p, m.host().loop(id), a));
  return e;
}

Energy motif_energy(const ParameterSet& p, const Sequence& x, const Motif& m) {
  Energy e = 0;
  for (int id : m.loop_ids()) e = add_energy(e, loop_energy(p, m.host().loop(id), x));
  return e;
}

Energy delta_delta_g(const ParameterSet& p, const TermDifference& d, const NucleotideAssignment& a) {
  Energy target = 0, rival = 0;
  for (const auto& t : d.target) target = add_energy(target, term_energy(p, t, a));
  if (target >= kInf) return -kInf;  // the target cannot form at all
  for (const auto& t : d.rival) rival = add_energy(rival, term_energy(p, t, a));
  if (rival >= kInf) return kInf;
  return rival - target;
}

Energy delta_delta_g(const ParameterSet& p, const NucleotideAssignment& a, const Motif& rival, const Motif& target) {
  return delta_delta_g(p, term_difference(rival, target), a);
}

Motif region_motif(const Motif& target, const SecondaryStructure& folded) {
  HostPtr host = make_host(folded);
  std::vector<int> ids;
  if (target.has_exterior()) ids.push_back(0);
  else ids.push_back(host->pair_index(target.outer_pair().first) + 1);
  for (int k : target.free_positions()) {
    int q = folded.partner(k);
    if (q > k) ids.push_back(host->pair_index(k) + 1);
  }
  return Motif(host, std::move(ids));
}

bool umfe_holds(const ParameterSet& p, const Sequence& x, const Motif& target) {
  return umfe_holds(p, x, target.structure(), target.constraint());
}

StandaloneEmbedding embed_standalone(std::string_view shape) {
  if (shape.size() < 2 || shape.front() != '(' || shape.back() != ')')
    throw MalformedShape("shape must be enclosed by its outer pair");
  std::string host;
  std::vector<int> context, inner;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    char ch = shape[k];
    if (ch == '[') {
      if (k + 1 >= shape.size() || shape[k + 1] != ']') throw MalformedShape("'[' must be followed by ']'");
      inner.push_back(static_cast<int>(host.size()) + 1);
      host += "(";
      for (int q = 0; q < 3; ++q) context.push_back(static_cast<int>(host.size()) + 1), host += ".";
      host += ")";
      ++k;
    } else if (ch == '(' || ch == ')' || ch == '.') {
      host.push_back(ch);
    } else {
      throw MalformedShape(std::string("bad shape character '") + ch + "'");
    }
  }
  HostPtr h;
  try {
    h = make_host(parse_dotbracket(host));
  } catch (const StructureError& e) {
    throw MalformedShape(std::string("shape is not a valid structure: ") + e.what());
  }
  if (h->structure().partner(1) != static_cast<int>(host.size()))
    throw MalformedShape("shape must be enclosed by its outer pair");
  std::vector<int> ids;
  for (int id = 1; id < h->size(); ++id) {
    const Loop& l = h->loop(id);
    bool context_hairpin = l.kind == LoopKind::Hairpin &&
                           std::find(inner.begin(), inner.end(), l.pairs[0].first) != inner.end();
    if (!context_hairpin) ids.push_back(id);
  }
  return {std::string(shape), Motif(h, std::move(ids)), std::move(context)};
}

std::string motif_shape(const Motif& m) {
  Pair outer = m.outer_pair();
  const SecondaryStructure& s = m.structure();
  std::string out;
  for (int k = outer.first; k <= outer.second; ++k) {
    int q = s.partner(k);
    bool inner_boundary = q > k && k != outer.first &&
                          std::find(m.boundary_pairs().begin(), m.boundary_pairs().end(), Pair{k, q}) !=
                              m.boundary_pairs().end();
    if (inner_boundary) {
      out += "[]";
      k = q;
    } else if (q) {
      out.push_back(q > k ? '(' : ')');
    } else {
      out.push_back('.');
    }
  }
  return out;
}

Sequence default_fill(const SecondaryStructure& y) {
  Sequence x = Sequence::filled(y.length(), kA);
  for (auto [i, j] : y.pairs()) x.set(i, kC), x.set(j, kG);
  return x;
}

}  // namespace undesign

namespace undesign {

std::vector<std::string> standalone_shapes(int max_len) {
  std::vector<std::string> out;
  std::string cur = "(";
  // depth counts open '(' inside the outer pair
  auto rec = [&](auto&& self, int depth) -> void {
    int len = static_cast<int>(cur.size());
    if (depth == 0 && len + 1 <= max_len && len >= 4) {
      cur.push_back(')');
      try {
        embed_standalone(cur);
        out.push_back(cur);
      } catch (const MalformedShape&) {
      }
      cur.pop_back();
    }
    if (len + 1 >= max_len) return;  // room for the closing ')'
    for (const char* tok : {".", "(", ")", "[]"}) {
      std::string t = tok;
      if (len + static_cast<int>(t.size()) + 1 > max_len) continue;
      if (t == ")" && depth == 0) continue;
      int open_needed = depth + (t == "(") - (t == ")");
      if (len + static_cast<int>(t.size()) + open_needed + 1 > max_len) continue;
      cur += t;
      self(self, open_needed);
      cur.resize(len);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace undesign
