#pragma once

// Printer for .flag documents. Output is what the parser reads back; line
// order is fixed so printing is deterministic.

#include <string>
#include <variant>

#include "genflag/picard.hpp"

namespace genflag {

enum class DocKind { Flag, Chain, IsotropicFlag, PicElement };

inline std::string to_string(DocKind k) {
  switch (k) {
    case DocKind::Flag: return "flag";
    case DocKind::Chain: return "chain";
    case DocKind::IsotropicFlag: return "isotropic-flag";
    case DocKind::PicElement: return "pic-element";
  }
  return "?";
}

using DocBody = std::variant<GeneralizedFlagSpec, ChainSpec, IsotropicFlagSpec, PicElement>;

struct SpecDocument {
  DocKind kind = DocKind::Flag;
  std::string name;
  DocBody body;
  std::optional<Scalar> basis_det;  // determinant of the replacement block, when validated
};

namespace detail {

inline char form_letter(Layout k) { return k == Layout::B ? 'B' : k == Layout::C ? 'C' : 'D'; }

inline std::string print_basis(const BasisSpec& b) {
  std::string out;
  for (const auto& [s, v] : b.replaced) out += "basis replace " + slot_str(s) + " = " + vector_str(v) + "\n";
  return out;
}

inline std::string print_coloring(const Coloring& c, const std::string& prefix) {
  std::string out;
  for (int64_t i = 1; i <= c.n0(); ++i) out += prefix + "window " + std::to_string(i) + " -> " + c.label(i).str() + "\n";
  out += prefix + "tail ";
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    out += "affine mod " + std::to_string(ra->modulus);
    for (size_t r = 0; r < ra->pieces.size(); ++r) {
      const auto& p = ra->pieces[r];
      out += " [" + std::to_string(r) + ": " + std::to_string(p.tier) + ", " + p.a.str() + ", " + p.b.str() + "]";
    }
  } else {
    const auto& d = std::get<DenseInTier>(c.tail);
    out += "dense " + std::to_string(d.tier) + (d.reversed ? " reversed" : "");
  }
  return out + "\n";
}

inline std::string print_iso_frame(const IsotropicFlagSpec& s) {
  std::string out = std::string("form ") + form_letter(s.form.kind) + "\n";
  out += print_basis(s.basis);
  out += print_coloring(s.pos, "");
  if (s.mirror != negate(s.pos)) out += print_coloring(s.mirror, "mirror ");
  return out;
}

inline std::string print_set(const std::set<int64_t>& xs) {
  std::string out = "{";
  bool first = true;
  for (int64_t x : xs) out += (first ? "" : ", ") + std::to_string(x), first = false;
  return out + "}";
}

inline std::string print_rules(const std::vector<WeightRule>& rules, const std::string& prefix) {
  std::string out;
  for (size_t r = 0; r < rules.size(); ++r)
    out += prefix + "rule " + std::to_string(r) + ": " + rules[r].u.get_str() + ", " + rules[r].v.get_str() + "\n";
  return out;
}

}  // namespace detail

inline std::string print_spec(const SpecDocument& d) {
  std::string out = to_string(d.kind) + " " + d.name + "\n";
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&d.body)) {
    out += detail::print_basis(s->basis) + detail::print_coloring(s->coloring, "");
  } else if (const auto* c = std::get_if<ChainSpec>(&d.body)) {
    out += detail::print_basis(c->basis);
    if (c->skeleton) out += detail::print_coloring(*c->skeleton, "");
    if (c->all_positions) out += "positions all\n";
    for (const auto& m : c->members) {
      if (const auto* is = std::get_if<IndexSet>(&m)) {
        out += "member upto " + std::to_string(is->upto) + " " + detail::print_set(is->window) + " mod " +
               std::to_string(is->modulus) + " " + detail::print_set(is->residues) + "\n";
        continue;
      }
      const auto& cut = std::get<LabelCut>(m);
      switch (cut.kind) {
        case LabelCut::Kind::Below: out += "cut below " + cut.label.str() + "\n"; break;
        case LabelCut::Kind::Upto: out += "cut upto " + cut.label.str() + "\n"; break;
        case LabelCut::Kind::Tier: out += "cut tier " + std::to_string(cut.tier) + "\n"; break;
      }
    }
  } else if (const auto* i = std::get_if<IsotropicFlagSpec>(&d.body)) {
    out += detail::print_iso_frame(*i);
  } else {
    const auto& p = std::get<PicElement>(d.body);
    if (const auto* g = std::get_if<GeneralizedFlagSpec>(&p.base))
      out += detail::print_basis(g->basis) + detail::print_coloring(g->coloring, "");
    else
      out += detail::print_iso_frame(std::get<IsotropicFlagSpec>(p.base));
    for (const auto& [a, w] : p.exceptions) out += "weight " + a.str() + " = " + w.get_str() + "\n";
    out += detail::print_rules(p.rules, "") + detail::print_rules(p.mirror_rules, "mirror ");
  }
  return out;
}

}  // namespace genflag
