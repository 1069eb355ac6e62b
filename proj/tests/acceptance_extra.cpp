#include <filesystem>
#include <fstream>
#include <map>

#include "acceptance.hpp"

namespace acceptance {

namespace {

Label lab(int64_t t, int64_t p) { return {t, Scalar(p)}; }

std::vector<VectorFS> admissible_prefix(const IsotropicFlagSpec& s, size_t len) {
  Frame fr = s.frame();
  std::vector<VectorFS> gs;
  if (s.form.kind == Layout::B) gs.push_back(fr.basis.vec(0));
  for (const auto& [a, slots] : fr.classes(fr.n_spec()))
    for (Slot t : slots)
      if (a < lab(0, 0) && gs.size() < len) gs.push_back(fr.basis.vec(t));
  return gs;
}

PicElement random_element(std::mt19937_64& rng, const PicBase& b, int spread = 3) {
  PicElement p{b, {}, {}, {}};
  auto fill = [&](const Coloring& c, std::vector<WeightRule>& rules) {
    if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
      for (const auto& pc : ra->pieces)
        rules.push_back({Integer(pc.a.is_zero() ? 0 : gentest::uniform(rng, -spread, spread)),
                         Integer(gentest::uniform(rng, -spread, spread))});
    } else {
      rules.push_back({Integer(0), Integer(gentest::uniform(rng, -spread, spread))});
    }
    for (const auto& l : c.window)
      if (!is_isotropic(b) || l < lab(0, 0)) p.exceptions[l] = gentest::uniform(rng, -spread, spread);
  };
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&b)) {
    fill(s->coloring, p.rules);
  } else {
    const auto& iso = std::get<IsotropicFlagSpec>(b);
    fill(iso.pos, p.rules);
    fill(iso.mirror, p.mirror_rules);
  }
  return p;
}

// Strict increase of weights position by position on a long window.
bool increasing_up_to(const PicElement& p, int64_t n) {
  Frame f = frame_of(p.base);
  std::vector<Integer> m;
  for (const auto& [a, _] : f.classes(n)) {
    if (!is_isotropic(p.base)) m.push_back(weight(p, a));
    else if (a < lab(0, 0)) m.push_back(weight(p, a));
    else if (a == lab(0, 0)) m.push_back(Integer(0));
    else m.push_back(-weight(p, tau(a)));
  }
  for (size_t k = 0; k + 1 < m.size(); ++k)
    if (m[k] >= m[k + 1]) return false;
  return true;
}

BasisSpec random_compatible(std::mt19937_64& rng, const GeneralizedFlagSpec& s, int64_t w) {
  Frame f = frame_of(s);
  BasisSpec out = s.basis;
  for (int64_t i = 1; i <= w; ++i) {
    VectorFS v = gentest::nonzero_scalar(rng, 2) * s.basis.vec(i);
    for (int64_t j = 1; j <= w; ++j)
      if (f.label(j) < f.label(i) || (f.label(j) == f.label(i) && j < i)) v += gentest::small_scalar(rng, 2) * s.basis.vec(j);
    out.replaced[i] = v;
  }
  return out;
}

PicElement gr2(long a, long b) { return {PicBase{fx::gr(2)}, {{lab(0, 1), Integer(a)}}, {{Integer(0), Integer(b)}}, {}}; }

std::string fixture(const std::string& name) { return std::string(GENFLAG_FIXTURES) + "/" + name; }

}  // namespace

void big_cells(Check& k) {
  std::mt19937_64 rng(1006);
  for (int t = 0; t < 50; ++t) {
    auto F = gentest::random_spec(rng, 3);
    int64_t n = n_spec(F) + 1;
    auto classes = frame_of(F).classes(n);
    CellCoords phi;
    for (const auto& [b, codomain] : classes) {
      std::vector<Slot> domain;
      for (const auto& [a, sl] : classes)
        if (a < b) domain.insert(domain.end(), sl.begin(), sl.end());
      if (domain.empty() || gentest::uniform(rng, 0, 2) == 0) continue;
      MatrixQ m(codomain.size(), domain.size());
      for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) m(i, j) = gentest::small_scalar(rng, 2);
      phi.maps.push_back({b, domain, codomain, m});
    }
    auto g = cell_point(phi, F.basis, F);
    auto back = big_cell_coords(g, F.basis, F);
    k.expect(static_cast<bool>(back), "cell point not in its cell for " + str(F));
    if (!back) continue;
    auto slots = window_slots(std::max(n, n_spec(g)) + 1, Layout::Linear);
    k.expect(cell_gamma(*back.coords, slots) == cell_gamma(phi, slots), "coordinates do not round-trip for " + str(F));
  }
  for (int t = 0; t < 50; ++t) {
    GeneralizedFlagSpec F, g;
    do {
      F = gentest::random_spec(rng, 3);
      g = gentest::shuffled_partner(rng, F);
    } while (std::max(n_spec(F), n_spec(g)) > 4);
    auto L = find_covering_cell(g, F);
    auto c = big_cell_coords(g, L, F);
    k.expect(static_cast<bool>(c), "no covering cell for " + str(g));
    if (!c) continue;
    auto p = cell_point(*c.coords, L, F);
    for (int64_t n = std::max<int64_t>(4, n_spec(p)); n <= std::max<int64_t>(4, n_spec(p)) + 1; ++n)
      k.expect(truncate(p, n).steps == truncate(g, n).steps, "covering point differs at n=" + std::to_string(n));
  }
}

void gram_schmidt(Check& k) {
  std::mt19937_64 rng(1007);
  for (Layout kind : {Layout::B, Layout::C, Layout::D})
    for (int t = 0; t < 50; ++t) {
      auto s = gentest::random_isotropic_spec(rng, FormSpec{kind});
      Frame fr = s.frame();
      int64_t n = n_spec(s);
      auto gs = admissible_prefix(s, static_cast<size_t>(gentest::uniform(rng, 1, static_cast<int>(n) + 1)));
      auto out = isotropic_gram_schmidt(gs, s);
      size_t m = out.e.size();
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
          k.expect(gram(kind, out.e[i], out.f[j]) == Scalar(i == j ? 1 : 0), "w(e_i, f_j) != delta");
          k.expect(gram(kind, out.e[i], out.e[j]).is_zero(), "w(e_i, e_j) != 0");
          k.expect(gram(kind, out.f[i], out.f[j]).is_zero(), "w(f_i, f_j) != 0");
        }
      if (out.e0) {
        k.expect(gram(kind, *out.e0, *out.e0) == Scalar(1), "w(e_0, e_0) != 1");
        for (size_t i = 0; i < m; ++i)
          k.expect(gram(kind, *out.e0, out.e[i]).is_zero() && gram(kind, *out.e0, out.f[i]).is_zero(), "e_0 not orthogonal");
      }
      size_t off = kind == Layout::B ? 1 : 0;
      for (size_t i = 0; i < m; ++i) {
        Label a = fr.position_of(gs[i + off], n);
        k.expect(fr.position_of(out.e[i], n) == a, "e_i moved position");
        k.expect(fr.position_of(out.f[i], n) == tau(a), "f_i not at tau position");
      }
      // τ is an involution and (F')^⊥ = τ(F)'' at each level up to 6.
      for (int64_t lv = std::max<int64_t>(n, 1); lv <= std::max<int64_t>(n, 6); ++lv) {
        k.expect(validate_isotropic(s, lv).ok, "validate_isotropic rejects at level " + std::to_string(lv));
        auto f = truncate_isotropic(s, lv);
        size_t len = f.labels.size();
        for (size_t j = 0; j < len; ++j) {
          k.expect(tau(tau(f.labels[j])) == f.labels[j], "tau not an involution");
          k.expect(f.labels[len - 1 - j] == tau(f.labels[j]), "tau does not reverse positions");
          auto p = perp_oracle(f.steps[j], lv, kind);
          size_t mj = len - 1 - j;
          std::vector<VectorFS> want = mj == 0 ? std::vector<VectorFS>{} : f.steps[mj - 1];
          k.expect(same_span(p, want), "perp identity fails at level " + std::to_string(lv));
        }
      }
    }
}

void picard(Check& k) {
  for (int64_t l = 1; l <= 4; ++l) {
    auto p = pic_presentation(fx::gr(l));
    k.expect(p.rank && *p.rank == 1, "GR(" + std::to_string(l) + ") rank != 1");
  }
  for (int64_t n = 1; n <= 4; ++n) {
    k.expect(kernel_check(fx::asc(), n, 2), "ASC kernel at n=" + std::to_string(n));
    k.expect(kernel_check(fx::zeta(), n, 2), "ZETA kernel at n=" + std::to_string(n));
    if (n >= n_spec(fx::gr(2))) k.expect(kernel_check(fx::gr(2), n, 2), "GR(2) kernel at n=" + std::to_string(n));
  }
  std::mt19937_64 rng(1008);
  for (int t = 0; t < 50; ++t) {
    auto s = gentest::random_spec(rng, 4);
    int64_t w = n_spec(s) + 1;
    auto L = random_compatible(rng, s, w), M = random_compatible(rng, s, w), N = random_compatible(rng, s, w);
    for (const auto& a : visible_labels(s.coloring, w)) {
      Scalar lm = transition_det(L, M, a, w, s), mn = transition_det(M, N, a, w, s), ln = transition_det(L, N, a, w, s);
      k.expect(lm * mn == ln, "cocycle fails for " + str(s));
      k.expect(transition_det(M, L, a, w, s) * lm == Scalar(1), "inverse cocycle fails");
    }
  }
  for (int t = 0; t < 100; ++t) {
    PicBase b = t % 4 == 3 ? PicBase{gentest::random_isotropic_spec(rng, FormSpec{Layout::C})} : PicBase{gentest::random_spec(rng, 4)};
    auto p = random_element(rng, b);
    int64_t n = n_spec(b) + t % 3;
    auto up = restrict_pic(p, n + 1);
    k.expect(level_map(up, pic_positions(b, n + 1), pic_positions(b, n), is_isotropic(b)) == restrict_pic(p, n),
             "phi_n != r_n phi_{n+1}");
  }
}

void projectivity(Check& k) {
  k.expect(is_projective(fx::asc()), "ASC not projective");
  k.expect(!is_projective(fx::zeta()), "ZETA projective");
  k.expect(!is_projective(fx::dense()), "DENSE projective");
  k.expect(is_very_ample(gr2(0, 1)), "GR(2) (0,1) not very ample");
  k.expect(!is_very_ample(gr2(1, 1)), "GR(2) (1,1) very ample");
  std::mt19937_64 rng(1009);
  for (int t = 0; t < 150; ++t) {
    PicBase b = t % 3 == 2 ? PicBase{gentest::random_isotropic_spec(rng, FormSpec{Layout::D})} : PicBase{gentest::random_spec(rng, 3)};
    if (!detail::base_is_flag(b)) continue;
    auto p = t % 2 ? very_ample_witness(b) : random_element(rng, b);
    if (t % 4 == 1 && !p.rules.empty()) p.rules[0].v += gentest::uniform(rng, -3, 3);
    k.expect(is_very_ample(p) == increasing_up_to(p, n_spec(b) + 300), "very ample disagrees with witness check");
  }
}

void cli_reports(Check& k) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(GENFLAG_FIXTURES))
    if (e.path().extension() == ".flag") files.push_back(e.path().string());
  k.expect(files.size() >= 10, "fixture corpus too small");
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    auto a = parse_spec(ss.str());
    auto once = print_spec(a);
    auto b = parse_spec(once);
    k.expect(print_spec(b) == once && a.kind == b.kind && a.body == b.body, "round trip fails for " + f);
  }
  auto p = run_command({"projective", fixture("ZETA.flag")});
  k.expect(p.out == "projective: false\n" && p.code == 0, "projective report: " + p.out);
  auto c = run_command({"commensurable", fixture("GR2.flag"), fixture("GR3.flag")});
  k.expect(c.out == "commensurable: false\ndetail: at position (0,1)\nreason: DimensionMismatch\n" && c.code == 2,
           "commensurable report: " + c.out);
  auto t = run_command({"truncate", fixture("ASC.flag"), "--level", "3"});
  k.expect(t.out == "d: 0,1,2,3\nlevel: 3\npositions: (0,1),(0,2),(0,3)\nsteps: [e1] [e1, e2] [e1, e2, e3]\n" && t.code == 0,
           "truncate report: " + t.out);
}

}  // namespace acceptance
