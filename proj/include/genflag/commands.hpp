#pragma once

// The subcommands behind run_command.

#include "genflag/cli.hpp"

namespace genflag {
namespace cli {

inline CommandResult refusal(Report r) { return {r.str(), 2}; }

inline CommandResult cmd_normalize(const Args& a) {
  auto d = load(a.files[0]);
  Report r;
  if (const auto* i = as_iso(d)) {
    r.set("basis", basis_str(i->basis));
    r.set("coloring", coloring_str(canonical(i->pos)));
    r.set("kind", "isotropic-flag");
    return {r.str(), 0};
  }
  auto s = canonical(as_flag(d));
  r.set("basis", basis_str(s.basis));
  r.set("coloring", coloring_str(s.coloring));
  r.set("kind", "flag");
  return {r.str(), 0};
}

inline CommandResult cmd_commensurable(const Args& a) {
  auto s1 = as_flag(load(a.files[0])), s2 = as_flag(load(a.files[1]));
  auto res = commensurable(s1, s2);
  Report r;
  r.set("commensurable", static_cast<bool>(res));
  if (!res) {
    r.set("reason", std::string(to_string(res.refusal.reason)));
    r.set("detail", res.refusal.detail);
    return refusal(r);
  }
  r.set("level", std::to_string(res.witness->level));
  r.set("exceptions", res.witness->exceptions.empty()
                          ? std::string("none")
                          : join_map(res.witness->exceptions, ",", [](const auto& p) { return p.first.str() + "->" + p.second.str(); }));
  return {r.str(), 0};
}

inline CommandResult cmd_truncate(const Args& a, bool embed) {
  auto d = load(a.files[0]);
  int64_t n = level_or(a.level, n_spec(as_base(d)));
  Report r;
  if (!embed) {
    put_flag(r, truncate_any(d, n));
    return {r.str(), 0};
  }
  FiniteFlag f = truncate_any(d, n), g;
  if (const auto* i = as_iso(d)) g = embed_step_isotropic(f, *i);
  else g = embed_step(f, as_flag(d));
  put_flag(r, g);
  r.set("coherent", g == truncate_any(d, n + 1));
  return {r.str(), 0};
}

inline CommandResult cmd_lift(const Args& a) {
  auto src = as_flag(load(a.files[0])), ref = as_flag(load(a.files[1]));
  int64_t n = level_or(a.level, std::max(n_spec(src), n_spec(ref)));
  auto s = lift(truncate(src, n), ref);
  Report r;
  r.set("basis", basis_str(s.basis));
  r.set("coloring", coloring_str(s.coloring));
  r.set("level", std::to_string(n));
  return {r.str(), 0};
}

inline CommandResult cmd_map_element(const Args& a) {
  auto d1 = load(a.files[0]), d2 = load(a.files[1]);
  Report r;
  GroupElement g;
  bool carried = true;
  if (as_iso(d1) && as_iso(d2)) {
    g = isotropic_mapping_element(*as_iso(d1), *as_iso(d2));
    for (int64_t m = g.window; m < g.window + 3; ++m)
      carried = carried && image_steps(g, truncate_isotropic(*as_iso(d1), m)) == truncate_isotropic(*as_iso(d2), m).steps;
  } else {
    auto s1 = as_flag(d1), s2 = as_flag(d2);
    auto res = commensurable(s1, s2);
    if (!res) fail(ErrorCode::Incommensurable, std::string(to_string(res.refusal.reason)) + ": " + res.refusal.detail);
    g = mapping_element(s1, s2);
    for (int64_t m = g.window; m < g.window + 3; ++m) carried = carried && carries(g, truncate(s1, m), truncate(s2, m), *res.witness);
  }
  r.set("carries", carried);
  r.set("det", det(g.block).str());
  r.set("matrix", matrix_str(g.block));
  r.set("window", std::to_string(g.window));
  return {r.str(), 0};
}

inline void put_coords(Report& r, const CellCoords& c) {
  r.set("in-cell", true);
  r.set("coordinates", c.maps.empty() ? std::string("none") : join_map(c.maps, " ", [](const CellMap& m) {
    return m.position.str() + ":" + matrix_str(m.matrix);
  }));
}

inline CommandResult cmd_big_cell(const Args& a, bool cover) {
  auto g = as_flag(load(a.files[0])), F = as_flag(load(a.files[1]));
  Report r;
  BasisSpec L = cover ? find_covering_cell(g, F) : F.basis;
  auto res = big_cell_coords(g, L, F);
  if (cover) r.set("cell-basis", basis_str(L));
  if (res) {
    put_coords(r, *res.coords);
  } else {
    r.set("in-cell", false);
    r.set("position", res.certificate.position.str());
    r.set("dim", std::to_string(res.certificate.dim));
  }
  return {r.str(), 0};
}

inline CommandResult cmd_isotropic_check(const Args& a) {
  auto d = load(a.files[0]);
  const auto* s = as_iso(d);
  if (!s) fail(ErrorCode::TypeMismatch, d.name + " is not an isotropic flag");
  auto rep = validate_isotropic(*s, level_or(a.level, n_spec(*s)));
  Report r;
  r.set("isotropic", rep.ok);
  r.set("fixed-point", rep.fixed_point);
  if (!rep.ok) r.set("reason", rep.reason);
  if (rep.position) r.set("position", rep.position->str());
  return {r.str(), 0};
}

inline CommandResult cmd_gram_schmidt(const Args& a) {
  auto d = load(a.files[0]);
  const auto* s = as_iso(d);
  if (!s) fail(ErrorCode::TypeMismatch, d.name + " is not an isotropic flag");
  Report r;
  IsoPairs p;
  if (a.vectors.empty()) {
    BasisSpec b = isotropic_basis(*s);
    r.set("basis", basis_str(b));
    return {r.str(), 0};
  }
  p = isotropic_gram_schmidt(parse_vectors(a.vectors), *s);
  if (p.e0) r.set("e0", vector_str(*p.e0));
  r.set("e", vectors_str(p.e));
  r.set("f", vectors_str(p.f));
  return {r.str(), 0};
}

inline CommandResult cmd_picard(const Args& a) {
  auto d = load(a.files[0]);
  PicPresentation p = as_iso(d) ? pic_presentation(*as_iso(d)) : pic_presentation(as_flag(d));
  Report r;
  r.set("generators", p.generators);
  r.set("relation", p.relation);
  r.set("rank", p.rank ? std::to_string(*p.rank) : std::string("infinite"));
  if (p.finite_positions) r.set("positions", join_map(*p.finite_positions, ",", [](const Label& x) { return x.str(); }));
  return {r.str(), 0};
}

inline std::string ints_str(const std::vector<Integer>& xs) {
  return join_map(xs, ",", [](const Integer& x) { return x.get_str(); });
}

inline CommandResult dispatch(const std::string& cmd, const Args& a) {
  Report r;
  if (cmd == "normalize") return cmd_normalize(a);
  if (cmd == "check-maximal") {
    r.set("maximal", is_maximal(as_flag(load(a.files[0]))));
  } else if (cmd == "check-flag") {
    r.set("flag", detail::base_is_flag(as_base(load(a.files[0]))));
  } else if (cmd == "commensurable") {
    return cmd_commensurable(a);
  } else if (cmd == "truncate" || cmd == "embed") {
    return cmd_truncate(a, cmd == "embed");
  } else if (cmd == "lift") {
    return cmd_lift(a);
  } else if (cmd == "map-element") {
    return cmd_map_element(a);
  } else if (cmd == "stabilizer-dim") {
    auto s = as_flag(load(a.files[0]));
    int64_t n = level_or(a.level, n_spec(s));
    r.set("dim", std::to_string(stabilizer_dim(s, n)));
    r.set("level", std::to_string(n));
  } else if (cmd == "big-cell" || cmd == "cover") {
    return cmd_big_cell(a, cmd == "cover");
  } else if (cmd == "isotropic-check") {
    return cmd_isotropic_check(a);
  } else if (cmd == "gram-schmidt") {
    return cmd_gram_schmidt(a);
  } else if (cmd == "picard") {
    return cmd_picard(a);
  } else if (cmd == "restrict") {
    auto d = load(a.files[0]);
    const auto& p = as_pic(d);
    int64_t n = level_or(a.level, n_spec(p.base));
    r.set("level", std::to_string(n));
    r.set("phi", ints_str(restrict_pic(p, n)));
  } else if (cmd == "kernel-check") {
    auto d = load(a.files[0]);
    auto b = as_base(d);
    int64_t n = level_or(a.level, n_spec(b));
    bool ok = as_iso(d) ? kernel_check(*as_iso(d), n, a.bound) : kernel_check(as_flag(d), n, a.bound);
    r.set("kernel-check", ok);
  } else if (cmd == "very-ample") {
    r.set("very-ample", is_very_ample(as_pic(load(a.files[0]))));
  } else if (cmd == "projective") {
    auto d = load(a.files[0]);
    r.set("projective", as_iso(d) ? is_projective(*as_iso(d)) : is_projective(as_flag(d)));
  } else if (cmd == "dual") {
    auto s = dual(as_flag(load(a.files[0])));
    r.set("basis", basis_str(s.basis));
    r.set("coloring", coloring_str(s.coloring));
  }
  return {r.str(), 0};
}

struct CommandInfo {
  const char* name;
  const char* help;
  int files;
};

inline const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> all = {
      {"normalize", "canonical form of a flag, or fl of a chain", 1},
      {"check-maximal", "whether every position is a single basis vector", 1},
      {"check-flag", "whether the positions embed in the integers", 1},
      {"commensurable", "decide commensurability of two flags", 2},
      {"truncate", "the finite flag at --level", 1},
      {"embed", "embed the level-n truncation one level up", 1},
      {"lift", "lift FILE's truncation into the type of REF", 2},
      {"map-element", "a det-1 element carrying the first flag to the second", 2},
      {"stabilizer-dim", "dimension of the stabilizer at --level", 1},
      {"big-cell", "coordinates of G in the big cell of F", 2},
      {"cover", "a big cell of F containing G", 2},
      {"isotropic-check", "validate an isotropic flag at --level", 1},
      {"gram-schmidt", "isotropic Gram-Schmidt of --vectors, or a compatible basis", 1},
      {"picard", "Picard group presentation", 1},
      {"restrict", "level-n coordinates of a pic-element", 1},
      {"kernel-check", "brute-force kernel check at --level with --bound", 1},
      {"very-ample", "whether a pic-element is very ample", 1},
      {"projective", "whether the ind-variety is projective", 1},
      {"dual", "the dual flag", 1},
  };
  return all;
}

}  // namespace cli

/// args excludes the program name.
inline CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"Exact computations with generalized flags", "genflag"};
  app.require_subcommand(1);
  cli::Args a;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : cli::commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("files", a.files, "input .flag files")->required()->expected(c.files);
    sub->add_option("--level", a.level, "truncation level n");
    sub->add_option("--bound", a.bound, "enumeration bound");
    sub->add_option("--vectors", a.vectors, "vectors separated by ';'");
    subs[c.name] = sub;
  }
  std::ostringstream out, err;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return {out.str() + err.str(), code == 0 ? 0 : 1};
  }
  std::string name = app.get_subcommands().front()->get_name();
  cli::Report r;
  try {
    return cli::dispatch(name, a);
  } catch (const Error& e) {
    r.set("error", std::string(to_string(e.code())));
    r.set("message", e.what());
    bool malformed = e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::SemanticError;
    return {r.str(), malformed ? 1 : 2};
  } catch (const std::exception& e) {
    r.set("error", "io");
    r.set("message", e.what());
    return {r.str(), 1};
  }
}

}  // namespace genflag
