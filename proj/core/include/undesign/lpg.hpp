#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "undesign/motif.hpp"
#include "undesign/structure.hpp"

namespace undesign {

struct NotBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bipartite tree of loop nodes and pair nodes. The pseudo-pair r stands for
// the two sequence ends and hangs off the external loop.
class LoopPairGraph {
 public:
  enum class NodeType { Loop, Pair, Root };
  struct Node {
    NodeType type;
    int loop_id = -1;  // Loop nodes
    LoopKind kind = LoopKind::External;
    Pair pair{0, 0};  // Pair nodes
    bool boundary = false;
  };
  struct Edge {
    int loop, pair, weight;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Loop node: incident edges in 5'->3' order starting at the closing pair
  // (or r). Pair node: incident edges.
  const std::vector<int>& incident(int node) const { return adj_[node]; }
  int node_of_loop(int loop_id) const;
  int node_of_pair(int i) const;  // by 5' index, -1 if absent
  int root_node() const { return root_; }  // r, -1 if absent
  std::vector<int> boundary_nodes() const;

  std::string to_dot() const;

  friend LoopPairGraph build_graph(const SecondaryStructure& y);
  friend LoopPairGraph motif_subgraph(const Motif& m);

 private:
  int add_node(Node n);
  void add_edge(int loop, int pair, int weight);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  int root_ = -1;
};

LoopPairGraph build_graph(const SecondaryStructure& y);
LoopPairGraph motif_subgraph(const Motif& m);
// Inverse of build_graph.
SecondaryStructure rebuild_structure(const LoopPairGraph& g);

// Rooted form of a motif graph. Each non-root node stores the weight of the
// edge to its parent; children keep the loop's cyclic 5'->3' order.
struct MotifTree {
  struct Node {
    bool is_pair = true;
    char flag = 'p';  // pairs: 'p' internal, '^' boundary, 'r' pseudo-pair
    LoopKind kind = LoopKind::External;
    int weight = 0;
    int parent = -1;
    int child_id = 0;  // position among the parent's children
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  int root = 0;

  // Pair: "p", "p^" or "r", then "(loop)" if it has a child.
  // Loop: kind letter, parent weight, then ",weight child" per child.
  std::string serialize() const;
  std::vector<int> leaves() const;  // boundary pair nodes other than the root
};

MotifTree rooted_tree(const LoopPairGraph& g, int pair_node);  // throws NotBoundary
// Re-root at a boundary leaf by rebuilding child lists along the path to the
// old root.
MotifTree rotate(const MotifTree& t, int leaf, int child_id = 0);  // throws NotBoundary

struct CanonicalForm {
  std::string canonical;
  int length = 0;
  int cardinality = 0;
  bool operator==(const CanonicalForm& o) const { return canonical == o.canonical; }
};

// Smallest serialization over all boundary rootings (r included).
CanonicalForm canonical_form(const LoopPairGraph& g);
CanonicalForm canonical_form(const Motif& m);
bool equivalent(const Motif& a, const Motif& b);

}  // namespace undesign
