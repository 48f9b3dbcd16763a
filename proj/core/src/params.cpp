#include "undesign/params.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#ifndef UNDESIGN_INSTALL_DATA_DIR
#define UNDESIGN_INSTALL_DATA_DIR ""
#endif
#ifndef UNDESIGN_DATA_DIR
#define UNDESIGN_DATA_DIR ""
#endif

namespace undesign {

int pair_type(int a, int b) {
  static const int kTable[5][5] = {
      {0, 0, 0, 0, 0},
      {0, 0, 0, 0, 5},  // A: AU
      {0, 0, 0, 1, 0},  // C: CG
      {0, 0, 2, 0, 3},  // G: GC GU
      {0, 6, 0, 4, 0},  // U: UA UG
  };
  if (a < 0 || a > 4 || b < 0 || b > 4) return 0;
  return kTable[a][b];
}

int reverse_pair_type(int t) {
  static const int kRev[8] = {0, 2, 1, 4, 3, 6, 5, 7};
  return kRev[t];
}

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(kHex[md[k] >> 4]);
    out.push_back(kHex[md[k] & 15]);
  }
  return out;
}

struct Token {
  std::string text;
  int line;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Token> tokens;
  std::vector<std::vector<Token>> rows;  // kept for the hairpin sequence tables
};

Energy to_energy(const Token& t) {
  if (t.text == "INF") return kInf;
  if (t.text == "DEF") return -50;
  char* end = nullptr;
  long v = std::strtol(t.text.c_str(), &end, 10);
  if (end == t.text.c_str() || *end != '\0')
    throw ParameterError(t.line, "expected integer, found '" + t.text + "' on line " + std::to_string(t.line));
  return static_cast<Energy>(v);
}

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_comment = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string clean;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (in_comment) {
        if (line.compare(k, 2, "*/") == 0) {
          in_comment = false;
          ++k;
        }
      } else if (line.compare(k, 2, "/*") == 0) {
        in_comment = true;
        ++k;
      } else {
        clean.push_back(line[k]);
      }
    }
    std::size_t first = clean.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (clean[first] == '#') {
      if (clean.compare(first, 2, "##") == 0) continue;  // file title
      std::istringstream h(clean.substr(first + 1));
      std::string name;
      h >> name;
      if (name == "END") break;
      out.push_back({name, lineno, {}, {}});
      continue;
    }
    if (out.empty()) throw ParameterError(lineno, "data before the first section on line " + std::to_string(lineno));
    std::istringstream fields(clean);
    std::vector<Token> row;
    for (std::string tok; fields >> tok;) row.push_back({tok, lineno});
    out.back().tokens.insert(out.back().tokens.end(), row.begin(), row.end());
    out.back().rows.push_back(std::move(row));
  }
  if (in_comment) throw ParameterError(lineno, "unterminated comment");
  return out;
}

void expect_count(const Section& s, std::size_t n) {
  if (s.tokens.size() != n)
    throw ParameterError(s.line, "section '" + s.name + "' has " + std::to_string(s.tokens.size()) +
                                     " values, expected " + std::to_string(n));
}

}  // namespace

ParameterSet load_parameters(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  ParameterSet p;
  p.digest = sha256_hex(text);

  std::map<std::string, const Section*> by_name;
  auto sections = split_sections(text);
  for (const auto& s : sections) by_name[s.name] = &s;

  auto require = [&](const std::string& name) -> const Section& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw MissingSection(name);
    return *it->second;
  };
  auto optional = [&](const std::string& name) -> const Section* {
    auto it = by_name.find(name);
    return it == by_name.end() ? nullptr : it->second;
  };

  {
    const Section& s = require("stack");
    expect_count(s, 49);
    for (int a = 1; a <= 7; ++a)
      for (int b = 1; b <= 7; ++b) p.stack[a][b] = to_energy(s.tokens[(a - 1) * 7 + (b - 1)]);
  }
  auto mismatch = [&](const Section& s, Energy (&dst)[8][5][5]) {
    expect_count(s, 175);
    std::size_t k = 0;
    for (int t = 1; t <= 7; ++t)
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) dst[t][i][j] = to_energy(s.tokens[k++]);
  };
  mismatch(require("mismatch_hairpin"), p.mismatch_hairpin);
  mismatch(require("mismatch_internal"), p.mismatch_interior);
  mismatch(require("mismatch_multi"), p.mismatch_multi);
  mismatch(require("mismatch_exterior"), p.mismatch_exterior);
  if (auto s = optional("mismatch_internal_1n")) mismatch(*s, p.mismatch_interior_1n);
  if (auto s = optional("mismatch_internal_23")) mismatch(*s, p.mismatch_interior_23);

  auto dangle = [&](const Section& s, Energy (&dst)[8][5]) {
    expect_count(s, 35);
    std::size_t k = 0;
    for (int t = 1; t <= 7; ++t)
      for (int i = 0; i < 5; ++i) dst[t][i] = to_energy(s.tokens[k++]);
  };
  dangle(require("dangle5"), p.dangle5);
  dangle(require("dangle3"), p.dangle3);

  if (auto s = optional("int11")) {
    expect_count(*s, 7 * 7 * 25);
    std::size_t k = 0;
    for (int a = 1; a <= 7; ++a)
      for (int b = 1; b <= 7; ++b)
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) p.int11[a][b][i][j] = to_energy(s->tokens[k++]);
    p.has_int11 = true;
  }
  if (auto s = optional("int21")) {
    expect_count(*s, 7 * 7 * 125);
    std::size_t k = 0;
    for (int a = 1; a <= 7; ++a)
      for (int b = 1; b <= 7; ++b)
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j)
            for (int l = 0; l < 5; ++l) p.int21[a][b][i][j][l] = to_energy(s->tokens[k++]);
    p.has_int21 = true;
  }
  if (auto s = optional("int22")) {
    expect_count(*s, 6 * 6 * 256);
    std::size_t k = 0;
    for (int a = 1; a <= 6; ++a)
      for (int b = 1; b <= 6; ++b)
        for (int i = 1; i < 5; ++i)
          for (int j = 1; j < 5; ++j)
            for (int l = 1; l < 5; ++l)
              for (int m = 1; m < 5; ++m) p.int22[a][b][i][j][l][m] = to_energy(s->tokens[k++]);
    p.has_int22 = true;
  }

  auto sizes = [&](const Section& s, Energy (&dst)[31]) {
    expect_count(s, 31);
    for (int k = 0; k < 31; ++k) dst[k] = to_energy(s.tokens[k]);
  };
  sizes(require("hairpin"), p.hairpin);
  sizes(require("bulge"), p.bulge);
  sizes(require("internal"), p.interior);

  {
    const Section& s = require("ML_params");
    expect_count(s, 6);
    p.ml_base = to_energy(s.tokens[0]);
    p.ml_closing = to_energy(s.tokens[2]);
    p.ml_intern = to_energy(s.tokens[4]);
  }
  {
    const Section& s = require("NINIO");
    expect_count(s, 3);
    p.ninio = to_energy(s.tokens[0]);
    p.ninio_max = to_energy(s.tokens[2]);
  }
  {
    const Section& s = require("Misc");
    if (s.tokens.size() < 5) throw ParameterError(s.line, "section 'Misc' needs at least 5 values");
    p.terminal_au = to_energy(s.tokens[2]);
    p.lxc = std::strtod(s.tokens[4].text.c_str(), nullptr);
  }

  auto loops = [&](const char* name, std::size_t len, std::map<std::string, Energy>& dst) {
    const Section* s = optional(name);
    if (!s) return;
    for (const auto& row : s->rows) {
      if (row.size() < 2 || row[0].text.size() != len)
        throw ParameterError(row.empty() ? s->line : row[0].line, std::string("malformed entry in '") + name + "'");
      dst[row[0].text] = to_energy(row[1]);
    }
  };
  loops("Triloops", 5, p.triloops);
  loops("Tetraloops", 6, p.tetraloops);
  loops("Hexaloops", 8, p.hexaloops);
  return p;
}

ParameterSet load_parameters_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError(0, "cannot open parameter file '" + path + "'");
  return load_parameters(in);
}

std::string default_parameter_path() {
  if (const char* env = std::getenv("UNDESIGN_PARAMS")) return env;
  namespace fs = std::filesystem;
  for (const fs::path& dir : {fs::path(UNDESIGN_DATA_DIR), fs::path(UNDESIGN_INSTALL_DATA_DIR)}) {
    fs::path candidate = dir / "rna_turner2004.par";
    if (!dir.empty() && fs::exists(candidate)) return candidate.string();
  }
  return "rna_turner2004.par";
}

const ParameterSet& default_parameters() {
  static const ParameterSet p = load_parameters_file(default_parameter_path());
  return p;
}

}  // namespace undesign
