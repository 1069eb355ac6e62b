#pragma once

// Command dispatch for the genflag tool. run_command is a library function so
// tests can drive it without a process; reports are sorted "key: value" lines.
//
// Exit codes: 0 success, 2 semantic refusal (a module declined the input),
// 1 error (usage, I/O, syntax or malformed input).

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "genflag/commens.hpp"
#include "genflag/dsl.hpp"
#include "genflag/picard.hpp"
#include "genflag/tower.hpp"

namespace genflag {

struct CommandResult {
  std::string out;
  int code = 0;
};

namespace cli {

class Report {
 public:
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set(const std::string& key, bool value) { kv_[key] = value ? "true" : "false"; }
  void set(const std::string& key, const char* value) { kv_[key] = value; }
  std::string str() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + ": " + v + "\n";
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
};

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (size_t k = 0; k < xs.size(); ++k) out += (k ? sep : "") + xs[k];
  return out;
}

template <class T, class F>
std::string join_map(const std::vector<T>& xs, const std::string& sep, F&& f) {
  std::vector<std::string> parts;
  for (const auto& x : xs) parts.push_back(f(x));
  return join(parts, sep);
}

inline std::string vectors_str(const std::vector<VectorFS>& vs) {
  return "[" + join_map(vs, ", ", [](const VectorFS& v) { return vector_str(v); }) + "]";
}

inline std::string basis_str(const BasisSpec& b) {
  if (b.replaced.empty()) return "standard";
  std::vector<std::string> parts;
  for (const auto& [s, v] : b.replaced) parts.push_back(slot_str(s) + " = " + vector_str(v));
  return join(parts, "; ");
}

inline std::string matrix_str(const MatrixQ& m) {
  std::vector<std::string> rows;
  for (size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(join(row, " "));
  }
  return "[" + join(rows, "; ") + "]";
}

inline void put_flag(Report& r, const FiniteFlag& f) {
  std::vector<std::string> d;
  for (size_t x : f.dims()) d.push_back(std::to_string(x));
  r.set("d", join(d, ","));
  r.set("level", std::to_string(f.level));
  r.set("positions", join_map(f.labels, ",", [](const Label& a) { return a.str(); }));
  r.set("steps", join_map(f.steps, " ", [](const std::vector<VectorFS>& s) { return vectors_str(s); }));
}

inline SpecDocument load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

inline GeneralizedFlagSpec as_flag(const SpecDocument& d) {
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&d.body)) return *s;
  if (const auto* c = std::get_if<ChainSpec>(&d.body)) return fl(*c);
  fail(ErrorCode::TypeMismatch, d.name + " is a " + to_string(d.kind) + ", expected a flag");
}

inline const IsotropicFlagSpec* as_iso(const SpecDocument& d) { return std::get_if<IsotropicFlagSpec>(&d.body); }

inline PicBase as_base(const SpecDocument& d) {
  if (const auto* i = as_iso(d)) return *i;
  return as_flag(d);
}

inline const PicElement& as_pic(const SpecDocument& d) {
  if (const auto* p = std::get_if<PicElement>(&d.body)) return *p;
  fail(ErrorCode::TypeMismatch, d.name + " is a " + to_string(d.kind) + ", expected a pic-element");
}

inline FiniteFlag truncate_any(const SpecDocument& d, int64_t n) {
  if (const auto* i = as_iso(d)) return truncate_isotropic(*i, n);
  return truncate(as_flag(d), n);
}

inline int64_t level_or(int64_t level, int64_t fallback) { return level >= 0 ? level : fallback; }

struct Args {
  std::vector<std::string> files;
  int64_t level = -1;
  int64_t bound = 2;
  std::string vectors;
};

inline std::vector<VectorFS> parse_vectors(const std::string& text) {
  std::vector<VectorFS> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(start, end - start);
    start = end + 1;
    if (piece.find_first_not_of(" \t") == std::string::npos) continue;
    dsl::LineParser p(piece, 1);
    out.push_back(p.vector());
    p.done();
  }
  return out;
}

}  // namespace cli
}  // namespace genflag

#include "genflag/commands.hpp"
