#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "reference_structures.hpp"
#include "undesign/energy.hpp"

using namespace undesign;

namespace {

const ParameterSet& params() { return default_parameters(); }

// Reads row `row`, column `col` of the first grid after "# name" straight
// from the text, skipping comment lines.
int raw_grid_entry(const std::string& name, int row, int col) {
  std::ifstream in(default_parameter_path());
  std::string line;
  while (std::getline(in, line))
    if (line == "# " + name) break;
  int r = 0;
  while (std::getline(in, line)) {
    if (line.find("/*") != std::string::npos) continue;
    if (r++ == row) {
      std::istringstream f(line);
      std::string tok;
      for (int c = 0; c <= col; ++c) f >> tok;
      return std::stoi(tok);
    }
  }
  return 0;
}

}  // namespace

TEST_CASE("parameter file readback") {
  const auto& p = params();
  // stack rows/cols are CG GC GU UG AU UA
  CHECK(p.stack[1][2] == raw_grid_entry("stack", 0, 1));
  CHECK(p.stack[5][6] == raw_grid_entry("stack", 4, 5));
  CHECK(p.hairpin[3] == raw_grid_entry("hairpin", 0, 3));
  CHECK(p.ml_closing == 930);
  CHECK(p.ml_intern == -90);
  CHECK(p.terminal_au == 50);
  CHECK(p.ninio == 60);
  CHECK(p.ninio_max == 300);
  CHECK(p.tetraloops.at("CUUCGG") == 370);
  CHECK(p.has_int11);
  CHECK(p.has_int21);
  CHECK(p.has_int22);
  CHECK(p.digest.size() == 64);
}

TEST_CASE("minimal hand-written parameter file") {
  std::ifstream full(default_parameter_path());
  std::stringstream buf;
  buf << full.rdbuf();
  std::string text = buf.str();
  std::istringstream in(text);
  CHECK_NOTHROW(load_parameters(in));

  std::string truncated = text.substr(0, text.find("# hairpin\n"));
  std::istringstream tin(truncated);
  CHECK_THROWS_AS(load_parameters(tin), MissingSection);

  std::string broken = text;
  broken.replace(broken.find("-240"), 4, "x240");
  std::istringstream bin(broken);
  CHECK_THROWS_AS(load_parameters(bin), ParameterError);
}

TEST_CASE("project") {
  Sequence x("ACGU");
  auto a = project(x, {2, 4});
  CHECK(a.domain() == std::vector<int>{2, 4});
  CHECK(a[2] == kC);
  CHECK(a[4] == kU);
  CHECK(project(x, {}).domain().empty());
  CHECK_THROWS_AS(project(x, {5}), OutOfRange);

  auto s = fixtures::branched_structure();
  auto loops = decompose_loops(s);
  Sequence y(std::string(51, 'A'));
  CHECK(project(y, critical_positions(loops[9], 51)).domain().size() == 8);
}

TEST_CASE("loop energies against table entries") {
  const auto& p = params();
  auto s = parse_dotbracket("((...))");
  auto loops = decompose_loops(s);
  Sequence x("CGAAACG");  // (1,7)=CG type 1, (2,6)=GC reversed gives type2 = pair(C,G)=CG
  CHECK(loop_energy(p, loops[1], x) == p.stack[1][pair_type(x[6], x[2])]);
  Sequence y("CCAAAGG");
  CHECK(loop_energy(p, loops[1], y) == p.stack[1][pair_type(y[6], y[2])]);

  Sequence bad("AGAAACA");  // (1,7) = AA
  CHECK(loop_energy(p, loops[0], bad) == kInf);
  CHECK(loop_energy(p, loops[1], bad) == kInf);

  auto hp = decompose_loops(parse_dotbracket("(....)"));
  Sequence tl("CUUCGG");
  CHECK(loop_energy(p, hp[1], tl) == p.tetraloops.at("CUUCGG"));
  Sequence plain("CAAAAG");
  CHECK(loop_energy(p, hp[1], plain) == p.hairpin[4] + p.mismatch_hairpin[1][kA][kA]);

  NucleotideAssignment partial(6);
  partial.set(1, kC);
  CHECK_THROWS_AS(loop_energy(p, hp[1], partial), MissingPosition);
}

TEST_CASE("empty structure energy") {
  CHECK(structure_energy(params(), Sequence("ACG"), parse_dotbracket("...")) == 0);
}

TEST_CASE("reference evaluator fixtures") {
  std::ifstream in(std::string(UNDESIGN_FIXTURE_DIR) + "/vienna_loops.tsv");
  REQUIRE(in);
  std::string line;
  int rows = 0, loop_checks = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string seq, db, loops_text;
    int total;
    f >> seq >> db >> total;
    Sequence x(seq);
    auto s = parse_dotbracket(db);
    CAPTURE(seq);
    CAPTURE(db);
    CHECK(structure_energy(params(), x, s) == total);
    auto loops = decompose_loops(s);
    for (std::string item; f >> item;) {
      int i = std::stoi(item.substr(0, item.find(':')));
      int e = std::stoi(item.substr(item.find(':') + 1));
      int id = 0;
      if (i > 0) {
        LoopDecomposition d(s);
        id = d.inner_loop(d.pair_index(i));
      }
      CAPTURE(i);
      CHECK(loop_energy(params(), loops[id], x) == e);
      ++loop_checks;
    }
    ++rows;
  }
  CHECK(rows == 400);
  CHECK(loop_checks > 2000);
}

TEST_CASE("term decomposition sums to the loop energy") {
  std::mt19937 rng(7);
  auto s = parse_dotbracket(fixtures::twin_multiloop_dotbracket());
  for (int trial = 0; trial < 50; ++trial) {
    std::string seq;
    for (int k = 0; k < s.length(); ++k) seq.push_back("ACGU"[rng() % 4]);
    for (auto [i, j] : s.pairs()) {
      const char* pairs[] = {"CG", "GC", "AU", "UA", "GU", "UG"};
      const char* pp = pairs[rng() % 6];
      seq[i - 1] = pp[0];
      seq[j - 1] = pp[1];
    }
    Sequence x(seq);
    for (const auto& l : decompose_loops(s)) {
      Energy sum = 0;
      std::vector<int> covered;
      for (const auto& t : loop_terms(l, s.length())) {
        sum += term_energy(params(), t, x);
        covered.insert(covered.end(), t.positions.begin(), t.positions.end());
      }
      CHECK(sum == loop_energy(params(), l, x));
      std::sort(covered.begin(), covered.end());
      covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
      auto cp = critical_positions(l, s.length());
      std::sort(cp.begin(), cp.end());
      CHECK(covered == cp);
    }
  }
}
