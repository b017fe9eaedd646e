#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ht/exterior.hpp"

namespace ht {

struct SUStructure {
  int n = 0;
  Mat I;
  Form omega;
  Form psi_plus;
  Form psi_minus;
  Form vol;
  std::vector<Vec> basis;  // e_1..e_n, I e_1..I e_n

  int m() const { return 2 * n; }
  std::vector<Vec> unitary() const { return {basis.begin(), basis.begin() + n}; }
};

// A named invariant failed beyond tolerance.
struct InvariantError : std::runtime_error {
  InvariantError(std::string name, double residual);
  std::string invariant;
  double residual;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

// (-1)^{k(k+1)/2}
int sign_tri(int k);

SUStructure standard_structure(int n);
// Builds omega, psi, vol from an adapted unitary basis e_1..e_n of (R^2n, I).
SUStructure from_basis(const Mat& I, const std::vector<Vec>& e);

std::vector<CheckResult> validate(const SUStructure& s, int samples = 20, std::uint64_t seed = 1,
                                  double tol = 1e-10);
bool all_pass(const std::vector<CheckResult>& checks);

// Complex Gram-Schmidt, then a phase on e_1 so that Psi(e_1..e_n) = 1.
SUStructure adapt(const Mat& I, const Form& psi_plus, const Form& psi_minus, double tol = 1e-9);

}  // namespace ht
