#pragma once

// Named flags used throughout the tests, docs and fixture files.

#include "genflag/isotropic.hpp"

namespace genflag::fixtures {

/// label(i) = (0, i): the ascending flag V_1 ⊂ V_2 ⊂ ...
inline GeneralizedFlagSpec asc() { return {{}, Coloring{{}, ResidueAffine{1, {{0, Scalar(1), Scalar(0)}}}}}; }

/// label(2i-1) = (0, i), label(2i) = (1, -i): order type ω + ω*.
inline GeneralizedFlagSpec zeta() {
  return {{}, Coloring{{}, ResidueAffine{2, {{1, Scalar(-1, 2), Scalar(0)}, {0, Scalar(1, 2), Scalar(1, 2)}}}}};
}

/// label(i) = (0, cw(i)): positions indexed by the positive rationals.
inline GeneralizedFlagSpec dense() { return {{}, Coloring{{}, DenseInTier{0, false}}}; }

/// 0 ⊂ V_l ⊂ V.
inline GeneralizedFlagSpec gr(int64_t l) {
  Coloring c;
  c.window.assign(static_cast<size_t>(l), Label{0, Scalar(1)});
  c.tail = ResidueAffine{1, {{0, Scalar(0), Scalar(2)}}};
  return {{}, c};
}

/// label(e_i) = (0, i), label(e^i) = (0, -i) for the given form kind.
inline IsotropicFlagSpec iso_asc(Layout kind) { return isotropic_spec(FormSpec{kind}, asc().coloring); }

}  // namespace genflag::fixtures
