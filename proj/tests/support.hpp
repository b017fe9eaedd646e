#pragma once

#include <gtest/gtest.h>

#include "brute.hpp"
#include "ht/rng.hpp"

namespace testing_support {

using ht::CoForm;
using ht::Form;
using ht::Mat;
using ht::Vec;

inline Form random_form(int m, int p, ht::Rng& rng) {
  Form f(m, p);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = rng.normal();
  return f;
}

inline CoForm random_coform(int m, int p, ht::Rng& rng) {
  CoForm c(m, p);
  for (int a = 0; a < m; ++a) c[a] = random_form(m, p, rng);
  return c;
}

inline double diff(const Form& a, const Form& b) { return (a - b).max_abs(); }
inline double diff(const CoForm& a, const CoForm& b) { return (a - b).max_abs(); }

// relative error, with the scale taken from the expected value
inline double rel(const CoForm& got, const CoForm& want) { return (got - want).norm() / std::max(1e-300, want.norm()); }
inline double rel(const Form& got, const Form& want) { return (got - want).norm() / std::max(1e-300, want.norm()); }
inline double rel(const Vec& got, const Vec& want) { return (got - want).norm() / std::max(1e-300, want.norm()); }

}  // namespace testing_support
