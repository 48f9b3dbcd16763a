#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace undesign {

// Free energies are integers in units of 0.1 kcal/mol.
using Energy = int;
constexpr Energy kInf = 10000000;

inline Energy add_energy(Energy a, Energy b) { return (a >= kInf || b >= kInf) ? kInf : a + b; }

// Pair type codes: CG=1 GC=2 GU=3 UG=4 AU=5 UA=6, 7 = non-standard, 0 = no pair.
constexpr int kPairTypes = 7;
int pair_type(int a, int b);
int reverse_pair_type(int t);

struct ParameterError : std::runtime_error {
  int line;
  ParameterError(int l, const std::string& msg) : std::runtime_error(msg), line(l) {}
};

struct MissingSection : std::runtime_error {
  std::string name;
  explicit MissingSection(const std::string& n) : std::runtime_error("missing parameter section '" + n + "'"), name(n) {}
};

// Turner-style nearest-neighbour parameters in the ViennaRNA 2.0 text layout.
struct ParameterSet {
  Energy stack[8][8] = {};
  Energy mismatch_hairpin[8][5][5] = {};
  Energy mismatch_interior[8][5][5] = {};
  Energy mismatch_interior_1n[8][5][5] = {};
  Energy mismatch_interior_23[8][5][5] = {};
  Energy mismatch_multi[8][5][5] = {};
  Energy mismatch_exterior[8][5][5] = {};
  Energy dangle5[8][5] = {};
  Energy dangle3[8][5] = {};
  Energy int11[8][8][5][5] = {};
  Energy int21[8][8][5][5][5] = {};
  Energy int22[8][8][5][5][5][5] = {};
  Energy hairpin[31] = {};
  Energy bulge[31] = {};
  Energy interior[31] = {};
  Energy ml_base = 0, ml_closing = 0, ml_intern = 0;
  Energy ninio = 0, ninio_max = 0;
  Energy terminal_au = 0;
  double lxc = 0.0;
  std::map<std::string, Energy> triloops, tetraloops, hexaloops;

  bool has_int11 = false, has_int21 = false, has_int22 = false;
  std::string digest;  // sha256 of the source text
};

ParameterSet load_parameters(std::istream& in);
ParameterSet load_parameters_file(const std::string& path);
// Bundled Turner 2004 set, located via UNDESIGN_PARAMS or the install prefix.
const ParameterSet& default_parameters();
std::string default_parameter_path();

}  // namespace undesign
