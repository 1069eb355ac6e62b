#include <gtest/gtest.h>

#include <random>

#include "genflag/commens.hpp"
#include "genflag/fixtures.hpp"
#include "support.hpp"

using namespace genflag;
namespace fx = genflag::fixtures;

namespace {

// {0 ⊂ F ⊂ V} with F = span{e_i : i > k}.
GeneralizedFlagSpec cogr(int64_t k) {
  Coloring c;
  c.window.assign(static_cast<size_t>(k), Label{0, Scalar(2)});
  c.tail = ResidueAffine{1, {{0, Scalar(0), Scalar(1)}}};
  return {{}, c};
}

GeneralizedFlagSpec random_pair_partner(std::mt19937_64& rng, const GeneralizedFlagSpec& s, int kind) {
  switch (kind) {
    case 0: return gentest::shuffled_partner(rng, s);
    case 1: return gentest::nudge_window_only(rng, gentest::shuffled_partner(rng, s));
    case 2: {
      // Same tail, unrelated window.
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

TEST(Commensurable, GrassmannExample) {
  for (int64_t a = 1; a <= 4; ++a)
    for (int64_t b = 1; b <= 4; ++b) {
      EXPECT_EQ(static_cast<bool>(commensurable(fx::gr(a), fx::gr(b))), a == b) << a << " " << b;
      EXPECT_EQ(static_cast<bool>(commensurable(cogr(a), cogr(b))), a == b) << a << " " << b;
    }
  auto r = commensurable(fx::gr(2), fx::gr(3));
  EXPECT_EQ(r.refusal.reason, CommRefusal::Reason::DimensionMismatch);
  EXPECT_FALSE(commensurable_oracle(fx::gr(2), fx::gr(3), 5));
}

TEST(Commensurable, BasisChangeWitnessLevel) {
  auto g = fx::gr(2);
  g.basis.replaced[2] = VectorFS::unit(2) + VectorFS::unit(3);
  auto r = commensurable(fx::gr(2), g);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.witness->level, 3);
  EXPECT_TRUE(r.witness->exceptions.empty());
  EXPECT_TRUE(commensurable_oracle(fx::gr(2), g, 3));
}

TEST(Commensurable, Reflexive) {
  std::mt19937_64 rng(201);
  for (auto s : {fx::asc(), fx::zeta(), fx::dense(), fx::gr(3)}) {
    auto r = commensurable(s, s);
    ASSERT_TRUE(r);
    EXPECT_TRUE(r.witness->exceptions.empty());
    EXPECT_TRUE(commensurable_oracle(s, s, n_spec(s) + 2));
  }
  for (int trial = 0; trial < 30; ++trial) {
    auto s = gentest::random_spec(rng);
    EXPECT_TRUE(commensurable(s, s));
  }
}

TEST(Commensurable, TailMismatch) {
  auto r = commensurable(fx::asc(), fx::zeta());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.refusal.reason, CommRefusal::Reason::TailMismatch);
  EXPECT_FALSE(commensurable(fx::asc(), fx::dense()));
}

TEST(Commensurable, RelabeledWindowPosition) {
  // GR(2) with its finite position moved to (0, 1/2).
  auto g = fx::gr(2);
  for (auto& l : g.coloring.window) l = Label{0, Scalar(1, 2)};
  auto r = commensurable(fx::gr(2), g);
  ASSERT_TRUE(r);
  ASSERT_EQ(r.witness->exceptions.size(), 1u);
  EXPECT_EQ(r.witness->map(Label{0, Scalar(1)}), (Label{0, Scalar(1, 2)}));
  EXPECT_TRUE(commensurable_oracle(fx::gr(2), g, 2));
}

TEST(Commensurable, OracleLevelTooSmall) {
  auto g = fx::gr(2);
  g.basis.replaced[2] = VectorFS::unit(2) + VectorFS::unit(3);
  EXPECT_THROW(commensurable_oracle(fx::gr(2), g, 2), Error);
}

TEST(Commensurable, AgreesWithOracle) {
  std::mt19937_64 rng(202);
  int yes = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto s = gentest::random_spec(rng, 5);
    auto t = random_pair_partner(rng, s, trial % 4);
    auto r = commensurable(s, t);
    int64_t N = std::max(n_spec(s), n_spec(t));
    for (int64_t level : {N, N + 2}) {
      EXPECT_EQ(static_cast<bool>(r), commensurable_oracle(s, t, level))
          << coloring_str(s.coloring) << " | " << coloring_str(t.coloring) << " N=" << level;
    }
    yes += static_cast<bool>(r);
  }
  EXPECT_GT(yes, 40);
  EXPECT_LT(yes, 110);
}

TEST(Commensurable, SymmetricAndTransitive) {
  std::mt19937_64 rng(203);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = gentest::random_spec(rng, 5);
    auto b = random_pair_partner(rng, a, trial % 2);
    auto c = random_pair_partner(rng, b, (trial / 2) % 2);
    auto ab = commensurable(a, b), bc = commensurable(b, c), ba = commensurable(b, a);
    ASSERT_TRUE(ab);
    ASSERT_TRUE(bc);
    ASSERT_TRUE(ba);
    auto ac = commensurable(a, c);
    ASSERT_TRUE(ac);
    // ψ∘φ with U + W is a valid witness: same positions and level covering both.
    auto comp = compose(*ab.witness, *bc.witness);
    EXPECT_GE(comp.level, ac.witness->level);
    for (int64_t i = 1; i <= comp.level; ++i) {
      Label x = a.coloring.label(i);
      EXPECT_EQ(comp.map(x), ac.witness->map(x));
    }
    EXPECT_TRUE(commensurable_oracle(a, c, comp.level));
  }
}
