#include "undesign/structure.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace undesign {

char base_char(int b) {
  static const char kChars[] = "NACGU";
  return (b >= 0 && b <= 4) ? kChars[b] : 'N';
}

int base_code(char c) {
  switch (c) {
    case 'A': case 'a': return kA;
    case 'C': case 'c': return kC;
    case 'G': case 'g': return kG;
    case 'U': case 'u': case 'T': case 't': return kU;
    default: return -1;
  }
}

Sequence::Sequence(std::string_view text) {
  if (text.empty()) throw SequenceError(0, "empty sequence");
  codes_.reserve(text.size() + 1);
  for (std::size_t k = 0; k < text.size(); ++k) {
    int b = base_code(text[k]);
    if (b < 0)
      throw SequenceError(static_cast<int>(k) + 1,
                          "invalid nucleotide '" + std::string(1, text[k]) + "' at " + std::to_string(k + 1));
    codes_.push_back(static_cast<std::uint8_t>(b));
  }
}

std::string Sequence::str() const {
  std::string s;
  s.reserve(codes_.size());
  for (std::size_t k = 1; k < codes_.size(); ++k) s.push_back(base_char(codes_[k]));
  return s;
}

Sequence Sequence::filled(int n, int b) {
  Sequence s;
  s.codes_.assign(n + 1, static_cast<std::uint8_t>(b));
  s.codes_[0] = 0;
  return s;
}

SecondaryStructure::SecondaryStructure(int n, std::vector<Pair> pairs) : n_(n), pairs_(std::move(pairs)) {
  using K = StructureError::Kind;
  pt_.assign(n + 1, 0);
  for (auto& [i, j] : pairs_) {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n || i == j)
      throw StructureError(K::OutOfRange, i, "pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    if (pt_[i] || pt_[j])
      throw StructureError(K::Conflict, pt_[i] ? i : j, "position paired twice");
    pt_[i] = j;
    pt_[j] = i;
  }
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<int> stack;
  for (int k = 1; k <= n; ++k) {
    if (!pt_[k]) continue;
    if (pt_[k] > k) {
      stack.push_back(k);
    } else {
      if (stack.empty() || stack.back() != pt_[k])
        throw StructureError(K::Crossing, k, "pseudoknot at " + std::to_string(k));
      stack.pop_back();
    }
  }
  for (auto [i, j] : pairs_) {
    bool hairpin = true;
    for (int k = i + 1; k < j && hairpin; ++k) hairpin = !pt_[k];
    if (hairpin && j - i - 1 < kMinHairpin)
      throw StructureError(K::InvalidHairpin, i,
                           "hairpin closed by (" + std::to_string(i) + "," + std::to_string(j) + ") has fewer than 3 unpaired bases");
  }
}

SecondaryStructure parse_dotbracket(std::string_view text) {
  using K = StructureError::Kind;
  if (text.empty()) throw StructureError(K::UnbalancedBrackets, 0, "empty structure");
  std::vector<int> stack;
  std::vector<Pair> pairs;
  const int n = static_cast<int>(text.size());
  for (int k = 1; k <= n; ++k) {
    char c = text[k - 1];
    if (c == '(') {
      stack.push_back(k);
    } else if (c == ')') {
      if (stack.empty()) throw StructureError(K::UnbalancedBrackets, k, "unmatched ')' at " + std::to_string(k));
      pairs.emplace_back(stack.back(), k);
      stack.pop_back();
    } else if (c != '.') {
      throw StructureError(K::InvalidCharacter, k, "invalid character '" + std::string(1, c) + "' at " + std::to_string(k));
    }
  }
  if (!stack.empty())
    throw StructureError(K::UnbalancedBrackets, stack.front(), "unmatched '(' at " + std::to_string(stack.front()));
  return SecondaryStructure(n, std::move(pairs));
}

std::string to_dotbracket(const SecondaryStructure& s) {
  std::string out(s.length(), '.');
  for (auto [i, j] : s.pairs()) {
    out[i - 1] = '(';
    out[j - 1] = ')';
  }
  return out;
}

char loop_letter(LoopKind k) {
  switch (k) {
    case LoopKind::External: return 'E';
    case LoopKind::Hairpin: return 'H';
    case LoopKind::Stack: return 'S';
    case LoopKind::Bulge: return 'B';
    case LoopKind::Internal: return 'I';
    case LoopKind::Multi: return 'M';
  }
  return '?';
}

const char* loop_name(LoopKind k) {
  switch (k) {
    case LoopKind::External: return "External";
    case LoopKind::Hairpin: return "Hairpin";
    case LoopKind::Stack: return "Stack";
    case LoopKind::Bulge: return "Bulge";
    case LoopKind::Internal: return "Internal";
    case LoopKind::Multi: return "Multi";
  }
  return "?";
}

int Loop::total_unpaired() const {
  int t = 0;
  for (int u : unpaired) t += u;
  return t;
}

std::vector<int> Loop::unpaired_positions(int) const {
  std::vector<int> out;
  auto run = [&](int from, int count) {
    for (int k = 0; k < count; ++k) out.push_back(from + k);
  };
  if (kind == LoopKind::External) {
    run(1, unpaired[0]);
    for (std::size_t b = 0; b < pairs.size(); ++b) run(pairs[b].second + 1, unpaired[b + 1]);
  } else {
    run(pairs[0].first + 1, unpaired[0]);
    for (std::size_t b = 1; b < pairs.size(); ++b) run(pairs[b].second + 1, unpaired[b]);
  }
  return out;
}

namespace {

// Branches directly enclosed by (i, j); i = 0, j = n + 1 for the exterior.
std::vector<Pair> branches(const SecondaryStructure& s, int i, int j) {
  std::vector<Pair> out;
  for (int k = i + 1; k < j; ++k) {
    if (s.paired(k)) {
      out.emplace_back(k, s.partner(k));
      k = s.partner(k);
    }
  }
  return out;
}

Loop make_loop(const SecondaryStructure& s, int i, int j) {
  Loop l;
  auto br = branches(s, i, j);
  if (i == 0) {
    l.kind = LoopKind::External;
    l.pairs = br;
    int prev = 0;
    for (auto [a, b] : br) {
      l.unpaired.push_back(a - prev - 1);
      prev = b;
    }
    l.unpaired.push_back(j - prev - 1);
    return l;
  }
  l.pairs.emplace_back(i, j);
  for (auto p : br) l.pairs.push_back(p);
  int prev = i;
  for (auto [a, b] : br) {
    l.unpaired.push_back(a - prev - 1);
    prev = b;
  }
  l.unpaired.push_back(j - prev - 1);
  if (br.empty()) {
    l.kind = LoopKind::Hairpin;
  } else if (br.size() == 1) {
    int n1 = l.unpaired[0], n2 = l.unpaired[1];
    if (n1 == 0 && n2 == 0) l.kind = LoopKind::Stack;
    else if (n1 == 0 || n2 == 0) l.kind = LoopKind::Bulge;
    else l.kind = LoopKind::Internal;
  } else {
    l.kind = LoopKind::Multi;
  }
  return l;
}

}  // namespace

std::vector<Loop> decompose_loops(const SecondaryStructure& s) {
  std::vector<Loop> loops;
  loops.reserve(s.pairs().size() + 1);
  loops.push_back(make_loop(s, 0, s.length() + 1));
  // pairs are sorted by 5' index, which is a pre-order of the nesting tree
  for (auto [i, j] : s.pairs()) loops.push_back(make_loop(s, i, j));
  return loops;
}

CriticalPositions critical_positions(const Loop& l, int n, bool special_hairpins) {
  std::vector<int> pos;
  auto add = [&](int p) {
    if (p >= 1 && p <= n && std::find(pos.begin(), pos.end(), p) == pos.end()) pos.push_back(p);
  };
  for (auto [i, j] : l.pairs) {
    add(i);
    add(j);
  }
  switch (l.kind) {
    case LoopKind::External:
      for (auto [i, j] : l.pairs) {
        add(i - 1);
        add(j + 1);
      }
      break;
    case LoopKind::Hairpin: {
      auto [i, j] = l.pairs[0];
      add(i + 1);
      add(j - 1);
      int size = j - i - 1;
      if (special_hairpins && (size == 3 || size == 4 || size == 6))
        for (int k = i + 1; k < j; ++k) add(k);
      break;
    }
    case LoopKind::Stack:
    case LoopKind::Bulge:
      break;
    case LoopKind::Internal:
    case LoopKind::Multi: {
      auto [i, j] = l.pairs[0];
      add(i + 1);
      add(j - 1);
      for (std::size_t b = 1; b < l.pairs.size(); ++b) {
        add(l.pairs[b].first - 1);
        add(l.pairs[b].second + 1);
      }
      break;
    }
  }
  return pos;
}

LoopDecomposition::LoopDecomposition(SecondaryStructure s) : s_(std::move(s)), loops_(decompose_loops(s_)) {
  const auto& ps = s_.pairs();
  pair_of_.assign(s_.length() + 2, -1);
  inner_.assign(ps.size(), -1);
  outer_.assign(ps.size(), -1);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    pair_of_[ps[k].first] = static_cast<int>(k);
    inner_[k] = static_cast<int>(k) + 1;
  }
  for (int id = 0; id < size(); ++id) {
    const Loop& l = loops_[id];
    std::size_t first = l.kind == LoopKind::External ? 0 : 1;
    for (std::size_t b = first; b < l.pairs.size(); ++b) outer_[pair_of_[l.pairs[b].first]] = id;
  }
}

int LoopDecomposition::pair_index(int i) const {
  if (i < 1 || i > s_.length()) return -1;
  return pair_of_[i];
}

std::vector<int> LoopDecomposition::neighbors(int loop_id) const {
  const Loop& l = loops_[loop_id];
  std::vector<int> out;
  for (std::size_t b = 0; b < l.pairs.size(); ++b) {
    int pk = pair_of_[l.pairs[b].first];
    bool closing = l.kind != LoopKind::External && b == 0;
    out.push_back(closing ? outer_[pk] : inner_[pk]);
  }
  return out;
}

int LoopDecomposition::largest_two_pair_loop() const {
  int best = 0;
  for (const Loop& l : loops_)
    if (l.kind == LoopKind::Bulge || l.kind == LoopKind::Internal) best = std::max(best, l.total_unpaired());
  return best;
}

std::vector<StructureRecord> read_structure_records(std::istream& in) {
  std::vector<StructureRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string id, db;
    std::istringstream fields(line);
    std::string a, b;
    fields >> a >> b;
    if (b.empty()) {
      id = "line" + std::to_string(lineno);
      db = a;
    } else {
      id = a;
      db = b;
    }
    try {
      out.push_back({id, parse_dotbracket(db)});
    } catch (const StructureError& e) {
      throw StructureError(e.kind, e.position, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace undesign
