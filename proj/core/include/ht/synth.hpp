#pragma once

#include <cstdint>

#include "ht/rng.hpp"
#include "ht/torsion_engine.hpp"

namespace ht {

// Random element of T*M (x) u(n)-perp with standard normal coordinates over
// the orthonormal [[lambda^{2,0}]] basis.
CoForm random_u_perp(const SUStructure& s, Rng& rng);

// Random jet carrying exactly the requested classes. At n = 3, W1 and W2 mean
// both of their halves. Throws ContractViolation for classes that do not
// exist at this n (n = 1: W5 only; n = 2: W2, W4, W5; W1+- and W2+- need n = 3).
SUTorsionJet synth_jet(const SUStructure& s, ClassMask classes, Rng& rng);
SUTorsionJet synth_jet(int n, ClassMask classes, std::uint64_t seed);

}  // namespace ht
