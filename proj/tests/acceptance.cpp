// Acceptance run: one PASS/FAIL/SKIP line per criterion.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fold_oracle.hpp"
#include "random_inputs.hpp"
#include "reference_structures.hpp"
#include "undesign/design.hpp"
#include "undesign/lpg.hpp"

using namespace undesign;

namespace {

const ParameterSet& params() { return default_parameters(); }

struct Outcome {
  bool pass = true;
  bool skip = false;
  std::string detail;
};

int threads() { return static_cast<int>(std::max(2u, std::thread::hardware_concurrency())); }

// Runs body(k) for k in [0, n) on a thread pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads(); ++t)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < n;) body(k);
    });
  for (auto& t : pool) t.join();
}

Outcome loop_table() {
  auto s = fixtures::branched_structure();
  auto loops = decompose_loops(s);
  auto rows = fixtures::branched_loop_table();
  Outcome o;
  if (loops.size() != rows.size()) return {false, false, "loop count " + std::to_string(loops.size())};
  int bad = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<int> expect;
    for (auto [i, j] : rows[k].pairs) expect.insert(expect.end(), {i, j});
    expect.insert(expect.end(), rows[k].mismatches.begin(), rows[k].mismatches.end());
    bad += loops[k].kind != rows[k].kind || loops[k].pairs != rows[k].pairs ||
           critical_positions(loops[k], s.length(), false) != expect;
  }
  o.pass = bad == 0;
  o.detail = std::to_string(rows.size()) + " loops, " + std::to_string(bad) + " mismatched rows";
  return o;
}

Outcome additivity() {
  std::mt19937 rng(101);
  int bad = 0, n = 1000;
  for (int t = 0; t < n; ++t) {
    auto y = parse_dotbracket(gen::dotbracket(rng, 1 + static_cast<int>(rng() % 100)));
    Sequence x = gen::compatible_sequence(rng, y);
    Energy sum = 0;
    for (const auto& l : decompose_loops(y)) sum += loop_energy(params(), l, x);
    bad += sum != structure_energy(params(), x, y);
  }
  return {bad == 0, false, std::to_string(n) + " cases, " + std::to_string(bad) + " mismatches"};
}

Outcome critical_dependence() {
  std::mt19937 rng(202);
  int bad = 0, loops = 0, mutations = 0;
  while (loops < 1000) {
    auto y = parse_dotbracket(gen::dotbracket(rng, 10 + static_cast<int>(rng() % 60)));
    const int n = y.length();
    auto ls = decompose_loops(y);
    const Loop& l = ls[rng() % ls.size()];
    Sequence x = gen::compatible_sequence(rng, y);
    Energy e = loop_energy(params(), l, x);
    auto cp = critical_positions(l, n);
    for (int k = 1; k <= n; ++k) {
      if (std::find(cp.begin(), cp.end(), k) != cp.end()) continue;
      Sequence m = x;
      m.set(k, static_cast<Base>(1 + (x[k] % 4)));
      bad += loop_energy(params(), l, m) != e;
      ++mutations;
    }
    ++loops;
  }
  // Constructed: the first mismatch of a plain hairpin moves its energy.
  auto hp = parse_dotbracket("(((....)))");
  Loop h = decompose_loops(hp)[3];
  Sequence a("GGGAAAACCC"), b("GGGGAAACCC");
  bool moves = loop_energy(params(), h, a) != loop_energy(params(), h, b);
  return {bad == 0 && moves, false,
          std::to_string(loops) + " loops, " + std::to_string(mutations) + " non-critical mutations, " +
              std::to_string(bad) + " changed; critical mutation " + (moves ? "changes" : "does not change") +
              " energy"};
}

Outcome fold_oracle() {
  std::mt19937 rng(303);
  const int n = 200;
  std::vector<Sequence> xs;
  for (int t = 0; t < n; ++t) xs.push_back(gen::sequence(rng, 5 + static_cast<int>(rng() % 11)));
  std::atomic<int> bad{0};
  parallel_for(xs.size(), [&](std::size_t k) {
    auto c = FoldConstraint::unconstrained(xs[k].length());
    auto o = oracle::brute_force(params(), xs[k], c);
    auto r = fold_constrained(params(), xs[k], c);
    if (r.mfe != o.mfe || r.cooptimal != (o.count >= 2)) ++bad;
  });
  return {bad == 0, false, std::to_string(n) + " sequences, " + std::to_string(bad.load()) + " mismatches"};
}

Outcome rotations() {
  fixtures::RotationShapes s;
  auto cf = [](const char* t) { return canonical_form(embed_standalone(t).motif).canonical; };
  bool relations = cf(s.a) == cf(s.b) && cf(s.b) != cf(s.c) && cf(s.d) == cf(s.e);
  std::mt19937 rng(404);
  int bad = 0, sequences = 0;
  while (sequences < 1000) {
    auto host = make_host(parse_dotbracket(gen::dotbracket(rng, 15 + static_cast<int>(rng() % 60))));
    Motif m(host, gen::connected_loops(rng, *host, 5));
    auto g = motif_subgraph(m);
    std::string canon = canonical_form(g).canonical;
    auto bn = g.boundary_nodes();
    MotifTree t = rooted_tree(g, bn[rng() % bn.size()]);
    int steps = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < steps; ++k) {
      auto leaves = t.leaves();
      if (leaves.empty()) break;
      t = rotate(t, leaves[rng() % leaves.size()]);
    }
    std::string best = t.serialize();
    for (int leaf : t.leaves()) best = std::min(best, rotate(t, leaf).serialize());
    bad += best != canon;
    ++sequences;
  }
  return {relations && bad == 0, false,
          std::string("example relations ") + (relations ? "hold" : "fail") + ", " + std::to_string(sequences) +
              " rotation sequences, " + std::to_string(bad) + " mismatches"};
}

Outcome single_loops() {
  std::mt19937 rng(505);
  struct Case {
    HostPtr host;
    int loop;
  };
  std::vector<Case> cases;
  while (cases.size() < 100) {
    auto host = make_host(parse_dotbracket(gen::dotbracket(rng, 8 + static_cast<int>(rng() % 50))));
    cases.push_back({host, static_cast<int>(rng() % host->size())});
  }
  std::atomic<int> bad{0};
  parallel_for(cases.size(), [&](std::size_t k) {
    Motif m(cases[k].host, {cases[k].loop});
    auto v = rival_motif_search(params(), m, SearchBudget{}, k);
    if (v.kind != VerdictKind::Designable || !umfe_holds(params(), default_fill(m.structure()), m)) ++bad;
  });
  return {bad == 0, false, "100 motifs, " + std::to_string(bad.load()) + " failures"};
}

struct EnumRun {
  std::vector<std::string> shapes;
  std::vector<Verdict> verdicts;
  long disagreements = 0, unknown = 0, undesignable = 0;
  double seconds = 0;
};

EnumRun enumerate(int max_len) {
  EnumRun r;
  auto start = std::chrono::steady_clock::now();
  r.shapes = standalone_shapes(max_len);
  r.verdicts.resize(r.shapes.size());
  std::vector<VerdictKind> oracle(r.shapes.size());
  parallel_for(r.shapes.size(), [&](std::size_t k) {
    Motif m = embed_standalone(r.shapes[k]).motif;
    r.verdicts[k] = rival_motif_search(params(), m, SearchBudget{}, candidate_seed(1, {static_cast<int>(k)}));
    oracle[k] = brute_force_decide(params(), m).kind;
  });
  for (std::size_t k = 0; k < r.shapes.size(); ++k) {
    if (r.verdicts[k].kind == VerdictKind::Unknown) {
      ++r.unknown;
      continue;
    }
    r.undesignable += r.verdicts[k].kind == VerdictKind::Undesignable;
    r.disagreements += r.verdicts[k].kind != oracle[k];
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Outcome enum_agreement(const EnumRun& r) {
  double rate = r.shapes.empty() ? 0 : static_cast<double>(r.unknown) / r.shapes.size();
  std::ostringstream d;
  d << r.shapes.size() << " motifs up to 10 nt, " << r.undesignable << " undesignable, " << r.disagreements
    << " disagreements, unknown rate " << rate * 100 << "%";
  return {r.disagreements == 0 && rate < 0.05, false, d.str()};
}

Outcome certificate_replay(const EnumRun& r) {
  std::atomic<long> failures{0}, checks{0};
  parallel_for(r.shapes.size(), [&](std::size_t k) {
    if (r.verdicts[k].kind != VerdictKind::Undesignable) return;
    Motif m = embed_standalone(r.shapes[k]).motif;
    std::mt19937 rng(static_cast<unsigned>(k));
    for (int s = 0; s < 1000; ++s) {
      Sequence x = gen::compatible_sequence(rng, m.structure());
      if (!rivals_defeat(params(), m, r.verdicts[k].rivals, x)) ++failures;
      ++checks;
    }
  });
  return {failures == 0, false,
          std::to_string(checks.load()) + " replays over " + std::to_string(r.undesignable) + " certificates, " +
              std::to_string(failures.load()) + " failures"};
}

Outcome scan_minimality() {
  std::vector<std::string> corpus{"(..(((...))((.(...)).)).)", "((((...).)))", "..((..((...))..((...)).))..",
                                  "((.((...))((...)).))"};
  std::mt19937 rng(606);
  while (corpus.size() < 30) corpus.push_back(gen::dotbracket(rng, 16 + static_cast<int>(rng() % 16), 2));
  ScanOptions opt;
  opt.budget.M = 1e7;
  opt.threads = threads();
  MotifStores stores;
  int violations = 0, minimal = 0;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    opt.seed = s;
    auto rep = fast_motif(params(), make_host(parse_dotbracket(corpus[s])), opt, stores);
    std::vector<const CandidateResult*> undesignable;
    for (const auto& c : rep.results)
      if (c.status == CandidateStatus::Minimal || c.status == CandidateStatus::Undesignable) undesignable.push_back(&c);
    for (const auto* m : rep.minimal()) {
      ++minimal;
      for (const auto* u : undesignable)
        if (u != m && u->loops.size() < m->loops.size() &&
            std::includes(m->loops.begin(), m->loops.end(), u->loops.begin(), u->loops.end()))
          ++violations;
    }
  }
  return {violations == 0 && minimal > 0, false,
          std::to_string(corpus.size()) + " structures, " + std::to_string(minimal) + " minimal motifs, " +
              std::to_string(violations) + " violations"};
}

Outcome reference_parity() {
  std::ifstream in(std::string(UNDESIGN_FIXTURE_DIR) + "/vienna_loops.tsv");
  int loops = 0, off = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string seq, db;
    int total;
    f >> seq >> db >> total;
    Sequence x(seq);
    auto y = parse_dotbracket(db);
    LoopDecomposition d(y);
    for (std::string item; f >> item;) {
      int i = std::stoi(item.substr(0, item.find(':')));
      int e = std::stoi(item.substr(item.find(':') + 1));
      int id = i > 0 ? d.inner_loop(d.pair_index(i)) : 0;
      off += std::abs(loop_energy(params(), d.loops()[id], x) - e) > 1;
      ++loops;
    }
  }
  Outcome o;
  o.skip = true;
  o.pass = off == 0 && loops > 0;
  o.detail = "parameter parity " + std::to_string(loops - off) + "/" + std::to_string(loops) +
             " loops within 0.01 kcal/mol; full-length reference structure fixtures are not bundled";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::function<Outcome()>& f) {
    auto start = std::chrono::steady_clock::now();
    Outcome o = f();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.skip ? "SKIP" : o.pass ? "PASS" : "FAIL";
    if (!o.skip && !o.pass) ++failed;
    if (o.skip && !o.pass) ++failed;  // the parity half must still hold
    std::printf("criterion %2d: %s  %s (%.2f s)\n", id, tag, o.detail.c_str(), s);
    std::fflush(stdout);
  };
  report(1, loop_table);
  report(2, additivity);
  report(3, critical_dependence);
  report(4, fold_oracle);
  report(5, rotations);
  report(6, single_loops);
  EnumRun run;
  report(7, [&] {
    run = enumerate(10);
    return enum_agreement(run);
  });
  report(8, [&] { return certificate_replay(run); });
  report(9, scan_minimality);
  report(10, reference_parity);
  return failed ? 1 : 0;
}
