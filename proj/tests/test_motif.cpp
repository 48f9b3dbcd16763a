#include <algorithm>
#include <random>

#include "doctest.h"
#include "random_inputs.hpp"
#include "reference_structures.hpp"
#include "undesign/motif.hpp"

using namespace undesign;

namespace {

const ParameterSet& params() { return default_parameters(); }

HostPtr twin_host() { return make_host(parse_dotbracket(fixtures::twin_multiloop_dotbracket())); }

bool in(const std::vector<Pair>& v, Pair p) { return std::find(v.begin(), v.end(), p) != v.end(); }

}  // namespace

TEST_CASE("extract motifs from the twin multiloop structure") {
  fixtures::TwinMultiloopIds id;
  auto host = twin_host();
  Motif m1 = extract_motif(host, {id.upper_multi});
  CHECK(m1.cardinality() == 1);
  CHECK(m1.internal_pairs().empty());
  CHECK(m1.boundary_pairs().size() == 3);

  Motif m3 = extract_motif(host, {id.upper_multi, id.mid_stack, id.lower_multi});
  CHECK(m3.cardinality() == 3);
  REQUIRE(m3.internal_pairs().size() == 2);
  // the two pairs of the middle stack
  const Loop& mid = host->loop(id.mid_stack);
  CHECK(in(m3.internal_pairs(), mid.pairs[0]));
  CHECK(in(m3.internal_pairs(), mid.pairs[1]));
  CHECK(m3.boundary_pairs().size() == 4);
  CHECK(m3.outer_pair() == host->loop(id.upper_multi).pairs[0]);

  CHECK_THROWS_AS(extract_motif(host, {id.hairpin9, id.lower_multi}), NotContiguous);
  CHECK_THROWS_AS(extract_motif(host, {}), std::invalid_argument);
  CHECK_THROWS_AS(extract_motif(host, {99}), std::out_of_range);
}

TEST_CASE("submotif relation") {
  fixtures::TwinMultiloopIds id;
  auto host = twin_host();
  Motif m1 = extract_motif(host, {id.upper_multi});
  Motif m2 = extract_motif(host, {id.mid_stack, id.lower_multi});
  Motif m3 = extract_motif(host, {id.upper_multi, id.mid_stack, id.lower_multi});
  CHECK(is_submotif(m2, m3));
  CHECK(is_submotif(m3, m3));
  CHECK_FALSE(is_submotif(m1, m2));
  CHECK_FALSE(is_submotif(m3, m2));
  Motif other = extract_motif(parse_dotbracket("((...))"), {1});
  CHECK_THROWS_AS(is_submotif(other, m3), DifferentHost);
}

TEST_CASE("motif text form") {
  Motif m = parse_motif("((...))|loops=1,2");
  CHECK(m.cardinality() == 2);
  CHECK(m.str() == "((...))|loops=1,2");
  CHECK(m.length() == 7);
  CHECK_THROWS_AS(parse_motif("((...))"), std::invalid_argument);
  CHECK_THROWS_AS(parse_motif("((...))|loops=a"), std::invalid_argument);
}

TEST_CASE("pair partition and containment on random motifs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto host = make_host(parse_dotbracket(gen::dotbracket(rng, 20 + static_cast<int>(rng() % 60))));
    Motif m(host, gen::connected_loops(rng, *host, 5));
    std::vector<Pair> all = m.internal_pairs();
    all.insert(all.end(), m.boundary_pairs().begin(), m.boundary_pairs().end());
    std::sort(all.begin(), all.end());
    CHECK(all == m.pairs());
    for (const Pair& p : m.internal_pairs()) CHECK_FALSE(in(m.boundary_pairs(), p));

    // length counts every base touched once
    std::vector<int> bases = m.unpaired_positions();
    for (auto [i, j] : m.pairs()) bases.insert(bases.end(), {i, j});
    std::sort(bases.begin(), bases.end());
    CHECK(std::adjacent_find(bases.begin(), bases.end()) == bases.end());
    CHECK(static_cast<int>(bases.size()) == m.length());

    Motif sub(host, gen::connected_loops(rng, *host, 3));
    if (is_submotif(sub, m) && is_submotif(m, sub)) CHECK(sub == m);
    for (int v : m.loop_ids())
      for (int u : host->neighbors(v)) {
        auto back = host->neighbors(u);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
  }
}

TEST_CASE("neighbourhood of a hairpin is its enclosing loop") {
  auto host = twin_host();
  fixtures::TwinMultiloopIds id;
  CHECK(loop_neighborhood(*host, id.hairpin9) == std::vector<int>{id.upper_multi});
  CHECK(loop_neighborhood(*host, id.upper_multi).size() == 3);
}

TEST_CASE("differential positions") {
  auto host = twin_host();
  fixtures::TwinMultiloopIds id;
  Motif m3 = extract_motif(host, {id.upper_multi, id.mid_stack, id.lower_multi});
  CHECK(differential_positions(m3, m3).empty());
  CHECK_THROWS_AS(differential_positions(m3, extract_motif(parse_dotbracket("(...)"), {1})), DifferentHost);

  // helix of two stacks vs the same region with the middle pair dropped
  SecondaryStructure y = parse_dotbracket("(((((...)))))");
  SecondaryStructure r(13, {{1, 13}, {2, 12}, {4, 10}, {5, 9}});
  Motif tgt = extract_motif(y, {2, 3});
  Motif riv = region_motif(tgt, r);
  REQUIRE(riv.cardinality() == 1);
  const Loop& merged = riv.host().loop(riv.loop_ids()[0]);
  CHECK(merged.kind == LoopKind::Internal);  // 1x1
  std::vector<int> expect;
  for (int l : tgt.loop_ids())
    for (int q : critical_positions(tgt.host().loop(l), 13)) expect.push_back(q);
  for (int q : critical_positions(merged, 13)) expect.push_back(q);
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
  CHECK(differential_positions(riv, tgt) == expect);
  CHECK(differential_positions(tgt, riv) == expect);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Sequence x = gen::compatible_sequence(rng, y);
    auto a = full_assignment(x);
    Energy stacks = loop_energy(params(), tgt.host().loop(2), x) + loop_energy(params(), tgt.host().loop(3), x);
    Energy merged_e = loop_energy(params(), merged, x);
    if (merged_e >= kInf) continue;
    CHECK(delta_delta_g(params(), a, riv, tgt) == merged_e - stacks);
    CHECK(delta_delta_g(params(), a, tgt, riv) == stacks - merged_e);
    // the refined positions alone decide the value
    auto only = project(x, term_difference(riv, tgt).positions());
    CHECK(delta_delta_g(params(), only, riv, tgt) == merged_e - stacks);
  }
}

TEST_CASE("refined positions are a subset of differential positions") {
  std::mt19937 rng(17);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto host = make_host(parse_dotbracket(gen::dotbracket(rng, 20 + static_cast<int>(rng() % 40))));
    Motif m(host, gen::connected_loops(rng, *host, 4));
    // drop one internal pair to get a rival of the same region
    if (m.internal_pairs().empty()) continue;
    Pair drop = m.internal_pairs()[rng() % m.internal_pairs().size()];
    std::vector<Pair> kept;
    for (const Pair& p : m.structure().pairs())
      if (p != drop) kept.push_back(p);
    SecondaryStructure folded(m.structure().length(), kept);
    Motif rival = region_motif(m, folded);
    CHECK(rival.length() == m.length());
    auto loop_level = differential_positions(rival, m);
    auto refined = term_difference(rival, m).positions();
    CHECK(std::includes(loop_level.begin(), loop_level.end(), refined.begin(), refined.end()));
    for (int k = 0; k < 5; ++k) {
      Sequence x = gen::compatible_sequence(rng, m.structure());
      auto a = full_assignment(x);
      Energy lhs = delta_delta_g(params(), a, rival, m);
      auto d = loop_difference(rival, m);
      Energy r = 0, t = 0;
      for (const Loop& l : d.rival_only) r = add_energy(r, loop_energy(params(), l, x));
      for (const Loop& l : d.target_only) t = add_energy(t, loop_energy(params(), l, x));
      if (r >= kInf) continue;
      CHECK(lhs == r - t);
      CHECK(delta_delta_g(params(), a, m, rival) == -lhs);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("motif energy") {
  auto host = twin_host();
  fixtures::TwinMultiloopIds id;
  Motif m3 = extract_motif(host, {id.upper_multi, id.mid_stack, id.lower_multi});
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Sequence x = gen::compatible_sequence(rng, host->structure());
    Energy rest = 0;
    for (int l = 0; l < host->size(); ++l)
      if (!m3.contains(l)) rest += loop_energy(params(), host->loop(l), x);
    CHECK(motif_energy(params(), full_assignment(x), m3) == structure_energy(params(), x, host->structure()) - rest);
    Motif single = extract_motif(host, {id.hairpin9});
    CHECK(motif_energy(params(), x, single) == loop_energy(params(), host->loop(id.hairpin9), x));
  }
  Motif m1 = extract_motif(host, {id.upper_multi});
  CHECK_THROWS_AS(motif_energy(params(), NucleotideAssignment(host->structure().length()), m1), MissingPosition);
}

TEST_CASE("motif constraint frees exactly the motif interior") {
  auto host = twin_host();
  fixtures::TwinMultiloopIds id;
  Motif m3 = extract_motif(host, {id.upper_multi, id.mid_stack, id.lower_multi});
  FoldConstraint c = m3.constraint();
  auto free = m3.free_positions();
  for (int k = 1; k <= c.n; ++k) {
    bool is_free = std::binary_search(free.begin(), free.end(), k);
    CHECK(static_cast<bool>(c.free[k]) == is_free);
  }
  for (const Pair& p : m3.boundary_pairs()) CHECK(c.forced[p.first] == p.second);
  for (const Pair& p : m3.internal_pairs()) CHECK(c.forced[p.first] == 0);
}

TEST_CASE("standalone embedding") {
  auto e = embed_standalone("(...)");
  CHECK(to_dotbracket(e.motif.structure()) == "(...)");
  CHECK(e.motif.loop_ids() == std::vector<int>{1});
  CHECK(e.context.empty());

  auto two = embed_standalone("(.[].[].)");
  CHECK(to_dotbracket(two.motif.structure()) == "(.(...).(...).)");
  CHECK(two.context == std::vector<int>{4, 5, 6, 10, 11, 12});
  CHECK(two.motif.cardinality() == 1);
  CHECK(two.motif.boundary_pairs().size() == 3);
  CHECK(two.motif.length() == 9);
  CHECK(motif_shape(two.motif) == "(.[].[].)");

  CHECK_THROWS_AS(embed_standalone("(..)"), MalformedShape);
  CHECK_THROWS_AS(embed_standalone("(.[.)"), MalformedShape);
  CHECK_THROWS_AS(embed_standalone("(...).(...)"), MalformedShape);
  CHECK_THROWS_AS(embed_standalone("(.x.)"), MalformedShape);

  fixtures::RotationShapes s;
  for (const char* shape : {s.a, s.b, s.c, s.d, s.e}) {
    auto emb = embed_standalone(shape);
    CHECK(motif_shape(emb.motif) == shape);
    CHECK(emb.motif.length() == static_cast<int>(std::string(shape).size()));
  }
}

TEST_CASE("constructive fill folds into a single-loop motif") {
  for (const char* shape : {"(...)", "(.[].[].)", "([])", "(..[]....)", "(.[]..[].[].)"}) {
    auto e = embed_standalone(shape);
    Sequence x = default_fill(e.motif.structure());
    CHECK(umfe_holds(params(), x, e.motif));
  }
}
