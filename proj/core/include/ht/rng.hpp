#pragma once

#include <cstdint>

#include "ht/exterior.hpp"

namespace ht {

// xorshift64* (Vigna 2016): state ^= state >> 12; state ^= state << 25;
// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D.
// The seed is passed through one splitmix64 step so that small or zero seeds
// still give a nonzero, well mixed state. Normals use Box-Muller on the
// top 53 bits of two consecutive outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();
  Vec normal_vec(int m);
  Mat normal_mat(int r, int c);

 private:
  std::uint64_t s_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ht
