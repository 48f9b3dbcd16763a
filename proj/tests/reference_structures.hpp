#pragma once
// Structures transcribed from the worked examples used throughout the tests.

#include <string>
#include <vector>

#include "undesign/structure.hpp"

namespace fixtures {

inline undesign::SecondaryStructure branched_structure() {
  return undesign::SecondaryStructure(
      51, {{3, 50}, {4, 49}, {5, 48}, {9, 24}, {10, 23}, {11, 19}, {12, 18}, {28, 44}, {29, 43}, {32, 39}, {33, 38}});
}

struct LoopRow {
  undesign::LoopKind kind;
  std::vector<undesign::Pair> pairs;
  std::vector<int> mismatches;
};

// Multiloop closing mismatches are i+1 and j-1 of (5, 48), i.e. 6 and 47.
inline std::vector<LoopRow> branched_loop_table() {
  using K = undesign::LoopKind;
  return {
      {K::External, {{3, 50}}, {2, 51}},
      {K::Stack, {{3, 50}, {4, 49}}, {}},
      {K::Stack, {{4, 49}, {5, 48}}, {}},
      {K::Multi, {{5, 48}, {9, 24}, {28, 44}}, {6, 47, 8, 25, 27, 45}},
      {K::Stack, {{9, 24}, {10, 23}}, {}},
      {K::Bulge, {{10, 23}, {11, 19}}, {}},
      {K::Stack, {{11, 19}, {12, 18}}, {}},
      {K::Hairpin, {{12, 18}}, {13, 17}},
      {K::Stack, {{28, 44}, {29, 43}}, {}},
      {K::Internal, {{29, 43}, {32, 39}}, {30, 42, 31, 40}},
      {K::Stack, {{32, 39}, {33, 38}}, {}},
      {K::Hairpin, {{33, 38}}, {34, 37}},
  };
}

// Two multiloops joined by a stack; loop-pair graph weights as in the
// loop-pair graph example (bulge 4, hairpins 9/4/4, multiloop gaps 2,2,6 and 3,3,8).
inline const char* twin_multiloop_dotbracket() {
  return "....(....((..(.........)..((...((....))...((....))........))......)))....";
}

// Loop ids in decomposition order for twin_multiloop_dotbracket().
struct TwinMultiloopIds {
  int exterior = 0, bulge = 1, stack_top = 2, upper_multi = 3, hairpin9 = 4, mid_stack = 5, lower_multi = 6;
};

}  // namespace fixtures

namespace fixtures {

// Standalone shapes: three-bulge chains where the first two are rotations
// of each other and the third is not, and a multiloop seen from either of
// its two boundary pairs.
struct RotationShapes {
  const char* a = "(.(..([].)))";
  const char* b = "(.(([].)..))";
  const char* c = "(.((.[])..))";
  const char* d = "(.(...).[].)";
  const char* e = "(.[].(...).)";
};

}  // namespace fixtures
