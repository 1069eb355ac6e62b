#include <algorithm>
#include <filesystem>

#include "acceptance.hpp"

namespace acceptance {

namespace {

std::vector<GeneralizedFlagSpec> fixture_flags() {
  std::vector<GeneralizedFlagSpec> out{fx::asc(), fx::zeta(), fx::dense(), fx::gr(1), fx::gr(2), fx::gr(3)};
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(GENFLAG_FIXTURES))
    if (e.path().extension() == ".flag") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto d = cli::load(f);
    if (d.kind == DocKind::Flag || d.kind == DocKind::Chain) out.push_back(cli::as_flag(d));
  }
  return out;
}

// Nested index sets from thresholds over a shuffled order, members shuffled.
ChainSpec random_chain(std::mt19937_64& rng, int64_t w) {
  std::vector<int64_t> perm;
  for (int64_t i = 1; i <= w; ++i) perm.push_back(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  ChainSpec c{gentest::random_basis(rng, w + 1), std::nullopt, false, {}};
  std::vector<int64_t> cutoffs;
  for (int j = gentest::uniform(rng, 1, 3); j > 0; --j) cutoffs.push_back(gentest::uniform(rng, 1, static_cast<int>(w)));
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  for (int64_t cut : cutoffs) c.members.push_back(IndexSet{w, std::set<int64_t>(perm.begin(), perm.begin() + cut), 1, {}});
  std::shuffle(c.members.begin(), c.members.end(), rng);
  return c;
}

GeneralizedFlagSpec partner(std::mt19937_64& rng, const GeneralizedFlagSpec& s, int kind) {
  switch (kind) {
    case 0: return gentest::shuffled_partner(rng, s);
    case 1: return gentest::nudge_window_only(rng, gentest::shuffled_partner(rng, s));
    case 2: {
      auto t = gentest::random_spec(rng, 5);
      t.coloring.tail = s.coloring.tail;
      try {
        return canonical(t);
      } catch (const Error&) {
        return s;
      }
    }
    default: return gentest::random_spec(rng, 5);
  }
}

}  // namespace

void fl_idempotence(Check& k) {
  std::mt19937_64 rng(1001);
  const gentest::TailKind kinds[] = {gentest::TailKind::Any, gentest::TailKind::Constant};
  for (int t = 0; t < 100; ++t) {
    auto s = gentest::random_spec(rng, 6, kinds[t % 2]);
    k.expect(fl(chain_of(s)) == s, "fl(chain_of(s)) != s for " + str(s));
  }
  for (int t = 0; t < 50; ++t) {
    auto c = random_chain(rng, gentest::uniform(rng, 2, 6));
    int64_t w = std::get<IndexSet>(c.members.front()).upto;
    ChainSpec fc = chain_of(fl(c));
    std::vector<VectorFS> samples;
    while (samples.size() < 20) {
      auto v = gentest::random_vector(rng, 1, w + 2, gentest::uniform(rng, 1, 4));
      if (!v.is_zero()) samples.push_back(v);
    }
    for (size_t i = 0; i < samples.size(); ++i)
      for (size_t j = i + 1; j < samples.size(); ++j) {
        bool same_c = partition_class(c, samples[i]).members == partition_class(c, samples[j]).members;
        bool same_f = partition_class(fc, samples[i]).position == partition_class(fc, samples[j]).position;
        k.expect(same_c == same_f, "partition mismatch in chain " + std::to_string(t));
      }
  }
}

void reconstruction(Check& k) {
  auto specs = fixture_flags();
  std::mt19937_64 rng(1002);
  for (int t = 0; t < 50; ++t) specs.push_back(gentest::random_spec(rng));
  for (const auto& s : specs) {
    int64_t n0 = std::max<int64_t>(n_spec(s), 1);
    for (int64_t n = n0; n <= std::max<int64_t>(n0, 8); ++n)
      k.expect(reconstruct_check(s, n), "reconstruction fails at n=" + std::to_string(n) + " for " + str(s));
  }
}

void commensurability(Check& k) {
  std::mt19937_64 rng(1003);
  int yes = 0;
  for (int t = 0; t < 200; ++t) {
    auto s = gentest::random_spec(rng, 5);
    auto u = partner(rng, s, t % 4);
    bool got = static_cast<bool>(commensurable(s, u));
    yes += got;
    int64_t N = std::max(n_spec(s), n_spec(u));
    k.expect(got == commensurable_oracle(s, u, N), "oracle disagrees on " + str(s) + " | " + str(u));
  }
  k.expect(yes > 0 && yes < 200, "pair sample is one-sided");
  for (int t = 0; t < 50; ++t) {
    auto a = gentest::random_spec(rng, 5);
    auto b = partner(rng, a, t % 2);
    auto c = partner(rng, b, (t / 2) % 2);
    k.expect(static_cast<bool>(commensurable(a, a)), "not reflexive on " + str(a));
    bool ab = static_cast<bool>(commensurable(a, b)), ba = static_cast<bool>(commensurable(b, a));
    k.expect(ab == ba, "not symmetric on " + str(a) + " | " + str(b));
    if (ab && commensurable(b, c)) k.expect(static_cast<bool>(commensurable(a, c)), "not transitive from " + str(a));
    // Unrelated partners exercise symmetry on negative answers too.
    auto d = gentest::random_spec(rng, 5);
    k.expect(static_cast<bool>(commensurable(a, d)) == static_cast<bool>(commensurable(d, a)), "asymmetric negative");
  }
  for (int64_t l = 1; l <= 4; ++l)
    for (int64_t m = 1; m <= 4; ++m)
      k.expect(static_cast<bool>(commensurable(fx::gr(l), fx::gr(m))) == (l == m),
               "GR(" + std::to_string(l) + ") vs GR(" + std::to_string(m) + ")");
}

void tower_coherence(Check& k) {
  auto specs = fixture_flags();
  std::mt19937_64 rng(1004);
  for (int t = 0; t < 100; ++t) specs.push_back(gentest::random_spec(rng));
  for (const auto& s : specs) {
    int64_t n0 = n_spec(s);
    for (int64_t n = n0; n <= n0 + 8; ++n)
      k.expect(embed_step(truncate(s, n), s) == truncate(s, n + 1), "embed != truncate at n=" + std::to_string(n) + " for " + str(s));
    int64_t n = n0 + static_cast<int64_t>(rng() % 3);
    // Fixture files may present a flag with a non-canonical basis; compare flags.
    auto back = lift(truncate(s, n), s);
    k.expect(canonical(back) == canonical(s) && truncate(back, n + 3) == truncate(s, n + 3), "lift(truncate(s)) != s for " + str(s));
    if (n < 1) continue;
    auto f = truncate(s, n);
    f.steps = image_steps(random_group_element(rng, n), f);
    k.expect(truncate(lift(f, s), n) == f, "truncate(lift(f)) != f for " + str(s));
  }
}

void transitivity(Check& k) {
  std::mt19937_64 rng(1005);
  for (int t = 0; t < 100; ++t) {
    auto s1 = gentest::random_spec(rng, 5);
    auto s2 = t % 2 ? gentest::shuffled_partner(rng, s1) : gentest::nudge_window_only(rng, gentest::shuffled_partner(rng, s1));
    auto r = commensurable(s1, s2);
    k.expect(static_cast<bool>(r), "generated pair not commensurable: " + str(s1));
    if (!r) continue;
    auto g = mapping_element(s1, s2);
    k.expect(det(g.block) == Scalar(1), "det != 1");
    // Finite support: identity beyond the window.
    for (Slot i = g.window + 1; i <= g.window + 3; ++i) k.expect(g.apply(VectorFS::unit(i)) == VectorFS::unit(i), "moves e_i past window");
    for (int64_t n = g.window; n < g.window + 3; ++n)
      k.expect(carries(g, truncate(s1, n), truncate(s2, n), *r.witness), "g(s1) != s2 at n=" + std::to_string(n));
  }
  for (Layout kind : {Layout::B, Layout::C, Layout::D})
    for (int t = 0; t < 20; ++t) {
      FormSpec w{kind};
      auto s1 = gentest::random_isotropic_spec(rng, w);
      auto s2 = s1;
      int64_t n = std::max<int64_t>(s1.basis.reach(), s1.pos.n0()) + 1;
      s2.basis = gentest::basis_from_matrix(gentest::random_isometry(rng, w, n), window_slots(n, kind));
      auto g = isotropic_mapping_element(s1, s2);
      k.expect(det(g.block) == Scalar(1), "isotropic det != 1");
      auto slots = g.slots();
      for (Slot a : slots)
        for (Slot b : slots)
          k.expect(gram(kind, g.apply(VectorFS::unit(a)), g.apply(VectorFS::unit(b))) == slot_pairing(kind, a, b), "w not preserved");
      for (int64_t m = g.window; m < g.window + 3; ++m)
        k.expect(image_steps(g, truncate_isotropic(s1, m)) == truncate_isotropic(s2, m).steps, "isotropic g(s1) != s2");
    }
}

}  // namespace acceptance
