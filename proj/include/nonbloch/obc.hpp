#pragma once

#include <Eigen/Core>
#include <vector>

#include "nonbloch/model.hpp"

namespace nonbloch {

// Open chain of N unit cells with hard walls. Site ordering is interleaved:
// a_n sits at index 2(n-1), b_n at 2(n-1)+1, for n = 1..N.
struct ObcChain {
  int N = 0;
  int q = 1;
  Eigen::MatrixXcd H;
};

// Throws Error{BadSize} for N < q + 1.
ObcChain build_obc_matrix(const LatticeModel& model, int N);

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
  Eigen::MatrixXcd eigenvectors;  // unit-norm columns, matching eigenvalues
  std::vector<double> residuals;  // |H v - E v| / |H|_F
};

// Dense eigendecomposition, done on S^-1 H S with S = diag(r^n) chosen to
// minimise the Frobenius norm; this removes most of the exponential
// non-normality of skin modes before LAPACK sees the matrix. A chain whose matrix is exactly block triangular
// in the cell index (one-sided hopping) is handled through its diagonal
// blocks: there the spectrum is an order-N exceptional point and a general
// solver would scatter the eigenvalues by eps^(1/N).
// Throws Error{EigNonConvergence}.
SpectrumResult obc_spectrum(const ObcChain& chain);

struct SkinMetrics {
  double center_of_mass = 0.0;      // sum n w_n / sum w_n, cells numbered from 1
  double participation_ratio = 0.0; // (sum w_n)^2 / sum w_n^2
};

// Throws Error{ZeroVector}; Error{BadSize} when vec.size() != 2N.
SkinMetrics skin_metrics(const Eigen::VectorXcd& vec, int N);

// Exact eigenvector of the collapsed chain at sign * E0: supported on cell N
// for right-sided hopping, on cell 1 for left-sided hopping. Unit norm.
// Throws Error{NotOneSided}.
Eigen::VectorXcd collapse_eigenvector(const LatticeModel& model, int sign, int N);

// Number of singular values of (H - E) below rel_tol * |H|_2.
int geometric_multiplicity(const ObcChain& chain, cplx E, double rel_tol = 1e-8);

}  // namespace nonbloch
