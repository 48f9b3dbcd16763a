#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "undesign/energy.hpp"
#include "undesign/fold.hpp"
#include "undesign/structure.hpp"

namespace undesign {

struct NotContiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DifferentHost : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using HostPtr = std::shared_ptr<const LoopDecomposition>;
HostPtr make_host(SecondaryStructure s);

// A connected set of loops of a host structure.
class Motif {
 public:
  Motif(HostPtr host, std::vector<int> loop_ids);  // throws NotContiguous, std::out_of_range

  const LoopDecomposition& host() const { return *host_; }
  const HostPtr& host_ptr() const { return host_; }
  const SecondaryStructure& structure() const { return host_->structure(); }
  const std::vector<int>& loop_ids() const { return ids_; }
  bool contains(int loop_id) const;
  int cardinality() const { return static_cast<int>(ids_.size()); }

  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::vector<Pair>& internal_pairs() const { return internal_; }
  const std::vector<Pair>& boundary_pairs() const { return boundary_; }
  const std::vector<int>& unpaired_positions() const { return unpaired_; }
  int length() const { return 2 * static_cast<int>(pairs_.size()) + static_cast<int>(unpaired_.size()); }
  bool has_exterior() const { return contains(0); }

  // Closing pair of the loop nearest the root, absent for exterior motifs.
  Pair outer_pair() const;
  // Positions the motif ensemble may refold: unpaired bases and internal pairs.
  std::vector<int> free_positions() const;
  // Loops outside the motif fixed, boundary pairs forced, motif interior free.
  FoldConstraint constraint() const;

  // "dotbracket|loops=1,2"
  std::string str() const;
  bool operator==(const Motif& o) const;

 private:
  HostPtr host_;
  std::vector<int> ids_;
  std::vector<Pair> pairs_, internal_, boundary_;
  std::vector<int> unpaired_;
};

Motif extract_motif(const HostPtr& host, std::vector<int> ids);
Motif extract_motif(const SecondaryStructure& y, std::vector<int> ids);
Motif parse_motif(std::string_view text);  // throws StructureError, NotContiguous, std::invalid_argument

bool is_submotif(const Motif& a, const Motif& b);  // throws DifferentHost

std::vector<int> loop_neighborhood(const LoopDecomposition& d, int loop_id);

// Motifs are compared loop by loop on (kind, closing pairs), so two motifs of
// different hosts of the same length can be compared as long as they cover the
// same region. Throws DifferentHost if the lengths differ.
struct LoopDifference {
  std::vector<Loop> rival_only, target_only;
};
LoopDifference loop_difference(const Motif& rival, const Motif& target);

// Union of critical positions over the loops in exactly one of the motifs.
CriticalPositions differential_positions(const Motif& rival, const Motif& target);

// Energy terms that survive cancellation between the two motifs. Their
// positions are a subset of differential_positions and already decide ΔΔG.
struct TermDifference {
  std::vector<EnergyTerm> rival, target;
  CriticalPositions positions() const;
};
TermDifference term_difference(const Motif& rival, const Motif& target);

Energy motif_energy(const ParameterSet& p, const NucleotideAssignment& a, const Motif& m);
Energy motif_energy(const ParameterSet& p, const Sequence& x, const Motif& m);
// E(rival) - E(target) restricted to the loops that differ.
Energy delta_delta_g(const ParameterSet& p, const NucleotideAssignment& a, const Motif& rival, const Motif& target);
Energy delta_delta_g(const ParameterSet& p, const TermDifference& d, const NucleotideAssignment& a);

// The motif a folded structure forms in place of `target`: the region loop
// plus every loop closed by a pair that was free to form.
Motif region_motif(const Motif& target, const SecondaryStructure& folded);

// Fold under target.constraint() and check that the host is the unique MFE.
bool umfe_holds(const ParameterSet& p, const Sequence& x, const Motif& target);

// Standalone motifs. A shape is the motif's own dot-bracket with the outer
// boundary pair spanning it and every inner boundary pair written "[]"; the
// host replaces each "[]" by a closed AAA hairpin.
struct StandaloneEmbedding {
  std::string shape;
  Motif motif;
  std::vector<int> context;  // positions outside the motif (hairpin interiors)
};
StandaloneEmbedding embed_standalone(std::string_view shape);  // throws MalformedShape
// Inverse of embed_standalone for motifs with an outer pair.
std::string motif_shape(const Motif& m);  // throws std::invalid_argument on exterior motifs

// Every valid standalone shape of 5..max_len bases, sorted.
std::vector<std::string> standalone_shapes(int max_len);

// Constructive fill: C-G on every pair, A on every unpaired base.
Sequence default_fill(const SecondaryStructure& y);

}  // namespace undesign
