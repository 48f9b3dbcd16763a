#include "undesign/lpg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace undesign {

int LoopPairGraph::add_node(Node n) {
  nodes_.push_back(n);
  adj_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void LoopPairGraph::add_edge(int loop, int pair, int weight) {
  edges_.push_back({loop, pair, weight});
  int e = static_cast<int>(edges_.size()) - 1;
  adj_[loop].push_back(e);
  adj_[pair].push_back(e);
}

int LoopPairGraph::node_of_loop(int loop_id) const {
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k].type == NodeType::Loop && nodes_[k].loop_id == loop_id) return static_cast<int>(k);
  return -1;
}

int LoopPairGraph::node_of_pair(int i) const {
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k].type == NodeType::Pair && nodes_[k].pair.first == i) return static_cast<int>(k);
  return -1;
}

std::vector<int> LoopPairGraph::boundary_nodes() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k].type == NodeType::Root || (nodes_[k].type == NodeType::Pair && nodes_[k].boundary))
      out.push_back(static_cast<int>(k));
  return out;
}

std::string LoopPairGraph::to_dot() const {
  std::ostringstream out;
  out << "graph lpg {\n";
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    out << "  n" << k << " [";
    if (n.type == NodeType::Loop) {
      out << "shape=circle,label=\"" << loop_letter(n.kind) << "\"";
    } else if (n.type == NodeType::Root) {
      out << "shape=diamond,label=\"r\"";
    } else {
      out << "shape=diamond,label=\"p(" << n.pair.first << "," << n.pair.second << ")\"";
      if (n.boundary) out << ",style=filled,fillcolor=lightblue";
    }
    out << "];\n";
  }
  for (const Edge& e : edges_) out << "  n" << e.loop << " -- n" << e.pair << " [label=\"" << e.weight << "\"];\n";
  out << "}\n";
  return out.str();
}

LoopPairGraph build_graph(const SecondaryStructure& y) {
  LoopDecomposition d(y);
  LoopPairGraph g;
  for (int id = 0; id < d.size(); ++id) g.add_node({LoopPairGraph::NodeType::Loop, id, d.loop(id).kind});
  for (const Pair& p : y.pairs()) g.add_node({LoopPairGraph::NodeType::Pair, -1, LoopKind::External, p});
  g.root_ = g.add_node({LoopPairGraph::NodeType::Root});
  const int first_pair = d.size();
  for (int id = 0; id < d.size(); ++id) {
    const Loop& l = d.loop(id);
    std::size_t k = 0;
    if (l.kind == LoopKind::External) g.add_edge(id, g.root_, l.unpaired[k++]);
    for (const Pair& p : l.pairs) g.add_edge(id, first_pair + d.pair_index(p.first), l.unpaired[k++]);
  }
  return g;
}

LoopPairGraph motif_subgraph(const Motif& m) {
  const LoopDecomposition& d = m.host();
  LoopPairGraph g;
  std::vector<int> pair_node(m.structure().length() + 1, -1);
  for (int id : m.loop_ids()) g.add_node({LoopPairGraph::NodeType::Loop, id, d.loop(id).kind});
  for (const Pair& p : m.pairs()) {
    bool boundary = std::find(m.boundary_pairs().begin(), m.boundary_pairs().end(), p) != m.boundary_pairs().end();
    pair_node[p.first] = g.add_node({LoopPairGraph::NodeType::Pair, -1, LoopKind::External, p, boundary});
  }
  if (m.has_exterior()) g.root_ = g.add_node({LoopPairGraph::NodeType::Root, -1, LoopKind::External, {0, 0}, true});
  for (std::size_t node = 0; node < m.loop_ids().size(); ++node) {
    const Loop& l = d.loop(m.loop_ids()[node]);
    std::size_t k = 0;
    int v = static_cast<int>(node);
    if (l.kind == LoopKind::External) g.add_edge(v, g.root_, l.unpaired[k++]);
    for (const Pair& p : l.pairs) g.add_edge(v, pair_node[p.first], l.unpaired[k++]);
  }
  return g;
}

SecondaryStructure rebuild_structure(const LoopPairGraph& g) {
  if (g.root_node() < 0) throw std::invalid_argument("graph has no pseudo-pair node");
  std::string db;
  std::function<void(int, int)> loop = [&](int v, int from_edge) {
    const auto& inc = g.incident(v);
    auto at = std::find(inc.begin(), inc.end(), from_edge) - inc.begin();
    const int deg = static_cast<int>(inc.size());
    db.append(g.edges()[from_edge].weight, '.');
    for (int s = 1; s < deg; ++s) {
      int e = inc[(at + s) % deg];
      int pn = g.edges()[e].pair;
      db.push_back('(');
      for (int pe : g.incident(pn))
        if (pe != e) loop(g.edges()[pe].loop, pe);
      db.push_back(')');
      db.append(g.edges()[e].weight, '.');
    }
  };
  int root_edge = g.incident(g.root_node()).at(0);
  loop(g.edges()[root_edge].loop, root_edge);
  return parse_dotbracket(db);
}

std::string MotifTree::serialize() const {
  std::string out;
  std::function<void(int)> visit = [&](int v) {
    const Node& n = nodes[v];
    if (n.is_pair) {
      if (n.flag == 'r') out += "r";
      else out += n.flag == '^' ? "p^" : "p";
      if (!n.children.empty()) {
        out += "(";
        visit(n.children[0]);
        out += ")";
      }
    } else {
      out += loop_letter(n.kind);
      out += std::to_string(n.weight);
      for (int c : n.children) {
        out += ",";
        out += std::to_string(nodes[c].weight);
        visit(c);
      }
    }
  };
  visit(root);
  return out;
}

std::vector<int> MotifTree::leaves() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (static_cast<int>(k) != root && nodes[k].is_pair && nodes[k].flag != 'p') out.push_back(static_cast<int>(k));
  return out;
}

MotifTree rooted_tree(const LoopPairGraph& g, int pair_node) {
  using T = LoopPairGraph::NodeType;
  const auto& gn = g.nodes();
  if (pair_node < 0 || pair_node >= static_cast<int>(gn.size()) ||
      !(gn[pair_node].type == T::Root || (gn[pair_node].type == T::Pair && gn[pair_node].boundary)))
    throw NotBoundary("rooting node is not a boundary pair");
  MotifTree t;
  std::function<int(int, int, int, int)> visit = [&](int v, int via_edge, int parent, int child_id) -> int {
    MotifTree::Node n;
    const auto& src = gn[v];
    n.is_pair = src.type != T::Loop;
    n.flag = src.type == T::Root ? 'r' : src.boundary ? '^' : 'p';
    n.kind = src.kind;
    n.weight = via_edge >= 0 ? g.edges()[via_edge].weight : 0;
    n.parent = parent;
    n.child_id = child_id;
    int idx = static_cast<int>(t.nodes.size());
    t.nodes.push_back(n);
    std::vector<int> kids;
    const auto& inc = g.incident(v);
    if (n.is_pair) {
      for (int e : inc)
        if (e != via_edge) kids.push_back(visit(g.edges()[e].loop, e, idx, static_cast<int>(kids.size())));
    } else {
      const int deg = static_cast<int>(inc.size());
      auto at = std::find(inc.begin(), inc.end(), via_edge) - inc.begin();
      for (int s = 1; s < deg; ++s) {
        int e = inc[(at + s) % deg];
        kids.push_back(visit(g.edges()[e].pair, e, idx, static_cast<int>(kids.size())));
      }
    }
    t.nodes[idx].children = std::move(kids);
    return idx;
  };
  t.root = visit(pair_node, -1, -1, 0);
  return t;
}

MotifTree rotate(const MotifTree& t, int leaf, int child_id) {
  if (leaf < 0 || leaf >= static_cast<int>(t.nodes.size()) || !t.nodes[leaf].is_pair || t.nodes[leaf].flag == 'p')
    throw NotBoundary("rotation pivot is not a boundary pair");
  if (leaf == t.root) return t;
  if (!t.nodes[leaf].children.empty()) throw NotBoundary("rotation pivot is not a leaf");
  MotifTree out;
  std::function<int(int, int)> copy = [&](int v, int parent) -> int {
    MotifTree::Node n = t.nodes[v];
    n.parent = parent;
    n.children.clear();
    int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back(n);
    for (int c : t.nodes[v].children) {
      int k = copy(c, idx);
      out.nodes[k].child_id = static_cast<int>(out.nodes[idx].children.size());
      out.nodes[idx].children.push_back(k);
    }
    return idx;
  };
  // NewTree: the weight of the edge we arrived through becomes the parent weight.
  std::function<int(int, int, int, int)> new_tree = [&](int v, int cid, int w_in, int parent) -> int {
    MotifTree::Node n = t.nodes[v];
    n.weight = w_in;
    n.parent = parent;
    n.children.clear();
    int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back(n);
    const auto& ch = t.nodes[v].children;
    std::vector<int> kids;
    for (std::size_t k = cid + 1; k < ch.size(); ++k) kids.push_back(copy(ch[k], idx));
    if (t.nodes[v].parent >= 0) kids.push_back(new_tree(t.nodes[v].parent, t.nodes[v].child_id, t.nodes[v].weight, idx));
    for (int k = 0; k < cid && k < static_cast<int>(ch.size()); ++k) kids.push_back(copy(ch[k], idx));
    for (std::size_t k = 0; k < kids.size(); ++k) out.nodes[kids[k]].child_id = static_cast<int>(k);
    out.nodes[idx].children = std::move(kids);
    return idx;
  };
  out.root = new_tree(leaf, child_id, 0, -1);
  return out;
}

CanonicalForm canonical_form(const LoopPairGraph& g) {
  CanonicalForm f;
  for (const auto& n : g.nodes()) {
    if (n.type == LoopPairGraph::NodeType::Loop) ++f.cardinality;
    if (n.type == LoopPairGraph::NodeType::Pair) f.length += 2;
  }
  for (const auto& e : g.edges()) f.length += e.weight;
  bool first = true;
  for (int b : g.boundary_nodes()) {
    std::string s = rooted_tree(g, b).serialize();
    if (first || s < f.canonical) f.canonical = std::move(s);
    first = false;
  }
  return f;
}

CanonicalForm canonical_form(const Motif& m) { return canonical_form(motif_subgraph(m)); }

bool equivalent(const Motif& a, const Motif& b) { return canonical_form(a) == canonical_form(b); }

}  // namespace undesign
