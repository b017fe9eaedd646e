#pragma once

#include "ht/jet.hpp"

namespace ht {

// <,>_o = e^{2f} <,> with f(point) = 0; only df enters.
struct ConformalChange {
  Vec df;
};

// Skew part of the Levi-Civita change S_X Y = df(Y) X - <X, Y> df, projected onto
// the complement of a subalgebra, feeds the new torsion. Requires n >= 2.
SUTorsionJet conformal_transform(const SUTorsionJet& jet, const ConformalChange& c);

// 2n(n-1) eta - I d*omega, unchanged by conformal changes.
Vec conformal_invariant(const SUTorsionJet& jet);

}  // namespace ht
