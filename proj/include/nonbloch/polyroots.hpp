#pragma once

#include <span>
#include <vector>

#include "nonbloch/model.hpp"

namespace nonbloch {

// Roots of a complex polynomial ordered by ascending modulus (ties by phase).
//
// Exactly-zero trailing coefficients are deflated and reported back as exact
// zero roots; exactly-zero leading coefficients become `overflow` roots at
// infinity, which sort after every finite root.
struct RootSet {
  cplx E;                          // probe energy, when built from a model
  std::vector<cplx> roots;         // finite roots, zeros included
  std::vector<double> residuals;   // |p(b)| / sum_j |c_j| |b|^j per root
  int overflow = 0;

  int degree() const noexcept { return static_cast<int>(roots.size()) + overflow; }
  // Modulus of the i-th root (0-based) in the full ordering; +inf for overflow.
  double modulus(int i) const;
  // i-th root in the full ordering; complex(+inf, 0) for overflow.
  cplx root(int i) const;
};

struct RootOptions {
  int max_iterations = 200;
};

// Coefficients of beta^{2q} (Q(beta) - E^2), lowest power first (4q + 1 entries).
std::vector<cplx> char_poly_coeffs(const LatticeModel& model, cplx E);

// Throws Error{DegenerateAllZero} for the zero polynomial and
// Error{NonConvergence} when the iteration cap is hit.
RootSet polynomial_roots(std::span<const cplx> coeffs, const RootOptions& opts = {});

RootSet sorted_roots(const LatticeModel& model, cplx E, const RootOptions& opts = {});

}  // namespace nonbloch
