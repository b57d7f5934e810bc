#include <doctest.h>

#include <random>

#include "nonbloch/error.hpp"
#include "nonbloch/obc.hpp"
#include "nonbloch/polyroots.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nonbloch;

TEST_CASE("two-cell chain by hand") {
  const double D = 2, t0 = 0.4, t = 1, d = 0.6;
  const auto H = build_obc_matrix(example_model(D, t0, t, d), 2).H;
  Eigen::Matrix4cd ref;
  // a1 b1 a2 b2
  ref << D, t0, 0, 0,
         t0, -D, t - d, 0,
         0, t + d, D, t0,
         0, 0, t0, -D;
  CHECK((H - ref).norm() == 0.0);
}

TEST_CASE("matrix structure") {
  CHECK_THROWS_AS(build_obc_matrix(example_model(2, 0.4, 1, 0.6), 1), Error);
  LatticeModel m2(2);
  m2.set_rho(2, 1.0);
  CHECK_THROWS_AS(build_obc_matrix(m2, 2), Error);
  CHECK_NOTHROW(build_obc_matrix(m2, 3));

  const auto herm = build_obc_matrix(example_model(2, 0.4, 1, 0), 12).H;
  CHECK((herm - herm.adjoint()).norm() == 0.0);

  const auto tri = build_obc_matrix(example_model(2, 0.4, 1, 1), 12).H;
  for (int c = 0; c < 12; ++c)
    for (int m = c + 1; m < 12; ++m) CHECK(tri.block(2 * c, 2 * m, 2, 2).isZero(0.0));
}

TEST_CASE("matrix applies the lattice equations in the bulk") {
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  const auto model = oracle::random_model(rng, 2);
  const int N = 10;
  const auto H = build_obc_matrix(model, N).H;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * N);
  for (int c = 3; c < 7; ++c) v(2 * c) = {g(rng), g(rng)}, v(2 * c + 1) = {g(rng), g(rng)};
  const Eigen::VectorXcd Hv = H * v;
  for (int n = 0; n < N; ++n) {
    cplx ra{}, rb{};
    for (int l = -2; l <= 2; ++l) {
      const int m = n - l;
      if (m < 0 || m >= N) continue;
      ra += model.rho(l) * v(2 * m) + model.theta(l) * v(2 * m + 1);
      rb += model.phi(l) * v(2 * m) - model.rho(l) * v(2 * m + 1);
    }
    CHECK(std::abs(Hv(2 * n) - ra) < 1e-13);
    CHECK(std::abs(Hv(2 * n + 1) - rb) < 1e-13);
  }
}

TEST_CASE("hermitian spectrum: bulk inside the Bloch bands, edge modes at +-Delta") {
  const auto sp = obc_spectrum(build_obc_matrix(example_model(2, 0.4, 1, 0), 40));
  REQUIRE(sp.eigenvalues.size() == 80);
  int edge = 0;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    const cplx E = sp.eigenvalues[i];
    CHECK(std::abs(E.imag()) < 1e-10);
    CHECK(sp.residuals[i] < 1e-12);
    if (std::abs(std::abs(E.real()) - 2.0) < 1e-10) {
      ++edge;
      continue;
    }
    CHECK(std::abs(E.real()) > oracle::band_edge(1, 0) - 0.05);
    CHECK(std::abs(E.real()) < oracle::band_edge(2, 0) + 0.05);
  }
  CHECK(edge == 2);
  double lo = 1e9, hi = 0;
  for (const cplx& E : sp.eigenvalues)
    if (E.real() > 0 && std::abs(E.real() - 2.0) > 1e-10) lo = std::min(lo, E.real()), hi = std::max(hi, E.real());
  CHECK(lo == doctest::Approx(oracle::obc_herm_bulk_min).epsilon(1e-10));
  CHECK(hi == doctest::Approx(oracle::obc_herm_max).epsilon(1e-10));
}

TEST_CASE("non-Hermitian chain at delta = 0.6") {
  const double d = 0.6;
  const auto sp = obc_spectrum(build_obc_matrix(example_model(2, 0.4, 1, d), 40));
  double lo = 1e9, hi = 0, second = 1e9;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    const cplx E = sp.eigenvalues[i];
    CHECK(sp.residuals[i] < 1e-8);
    CHECK(std::abs(E.imag()) < 1e-6);
    CHECK(std::abs(E.real()) > oracle::band_edge(1, d) - 0.05);
    CHECK(std::abs(E.real()) < oracle::band_edge(2, d) + 0.05);
    if (E.real() > 0) {
      if (E.real() < lo) second = lo, lo = E.real();
      else second = std::min(second, E.real());
      hi = std::max(hi, E.real());
    }
  }
  CHECK(lo == doctest::Approx(oracle::obc_d06_edge).epsilon(1e-8));
  CHECK(second == doctest::Approx(oracle::obc_d06_bulk_min).epsilon(1e-8));
  CHECK(hi == doctest::Approx(oracle::obc_d06_max).epsilon(1e-8));
}

TEST_CASE("collapsed chain") {
  const int N = 40;
  const auto chain = build_obc_matrix(example_model(2, 0.4, 1, 1), N);
  const auto sp = obc_spectrum(chain);
  int plus = 0, minus = 0;
  for (const cplx& E : sp.eigenvalues) {
    plus += std::abs(E - oracle::E0) < 1e-10;
    minus += std::abs(E + oracle::E0) < 1e-10;
  }
  CHECK(plus == N);
  CHECK(minus == N);
  for (double r : sp.residuals) CHECK(r < 1e-14);
  // order-N exceptional point: a single eigenvector for each of +-E0
  CHECK(geometric_multiplicity(chain, oracle::E0) == 1);
  CHECK(geometric_multiplicity(chain, -oracle::E0) == 1);
  CHECK(geometric_multiplicity(build_obc_matrix(example_model(2, 0.4, 1, 0), 20), 0.3) == 0);
}

TEST_CASE("analytic collapse eigenvector") {
  const auto m = example_model(2, 0.4, 1, 1);
  for (int sign : {1, -1}) {
    const int N = 10;
    const auto H = build_obc_matrix(m, N).H;
    const auto v = collapse_eigenvector(m, sign, N);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK((H * v - (sign * oracle::E0) * v).norm() < 1e-12);
    CHECK(v.head(2 * N - 2).isZero(0.0));
    const auto sm = skin_metrics(v, N);
    CHECK(sm.center_of_mass == doctest::Approx(N));
  }
  const auto left = m.mirrored();
  const auto v = collapse_eigenvector(left, 1, 10);
  CHECK(v.tail(18).isZero(0.0));
  CHECK((build_obc_matrix(left, 10).H * v - oracle::E0 * v).norm() < 1e-12);
  // the mirrored chain's collapse eigenvalues come out exact as well
  const auto sp = obc_spectrum(build_obc_matrix(left, 10));
  for (const cplx& E : sp.eigenvalues) CHECK(std::abs(std::abs(E) - oracle::E0) < 1e-12);
  try {
    collapse_eigenvector(example_model(2, 0.4, 1, 0.5), 1, 10);
    FAIL("expected NotOneSided");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOneSided);
  }
}

TEST_CASE("skin metrics") {
  const int N = 8;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * N);
  v(2 * N - 1) = 1.0;
  auto sm = skin_metrics(v, N);
  CHECK(sm.center_of_mass == doctest::Approx(N));
  CHECK(sm.participation_ratio == doctest::Approx(1.0));
  v.setConstant(0.3);
  sm = skin_metrics(v, N);
  CHECK(sm.center_of_mass == doctest::Approx((N + 1) / 2.0));
  CHECK(sm.participation_ratio == doctest::Approx(N));
  CHECK_THROWS_AS(skin_metrics(Eigen::VectorXcd::Zero(2 * N), N), Error);
}

TEST_CASE("skin modes pile up at the right edge for R < 1") {
  const int N = 40;
  const auto sp = obc_spectrum(build_obc_matrix(example_model(2, 0.4, 1, 0.6), N));
  int bulk = 0;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    if (std::abs(std::abs(sp.eigenvalues[i].real()) - 2.0) < 1e-8) continue;  // boundary modes
    ++bulk;
    CHECK(skin_metrics(sp.eigenvectors.col(static_cast<Eigen::Index>(i)), N).center_of_mass > 0.8 * N);
  }
  CHECK(bulk == 2 * N - 2);
}

TEST_CASE("spectrum is chiral and agrees with the polynomial condition") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = oracle::random_model(rng, 1 + trial % 2, 0.5);
    const auto ev = obc_spectrum(build_obc_matrix(m, 16)).eigenvalues;
    std::vector<cplx> neg;
    for (const cplx& e : ev) neg.push_back(-e);
    CHECK(testutil::hausdorff(ev, neg) < 1e-8);
  }
  // every OBC eigenvalue is an energy of the characteristic equation with two roots of equal
  // modulus in the N -> infinity limit; at finite N the residual is small but nonzero.
  const auto m = example_model(2, 0.4, 1, 0.6);
  for (const cplx& e : obc_spectrum(build_obc_matrix(m, 60)).eigenvalues) {
    if (std::abs(std::abs(e) - 2.0) < 1e-8) continue;
    const auto rs = sorted_roots(m, e);
    CHECK(std::abs(rs.modulus(1) - rs.modulus(2)) < 1e-6);
  }
}

TEST_CASE("imaginary gauge: delta chain is similar to a hermitian chain") {
  // diag(r^n) with r^2 = (t + delta) / (t - delta) maps theta_1, phi_-1 onto
  // sqrt(t^2 - delta^2), so the open spectra coincide exactly.
  for (double d : {0.3, 0.6, 0.9}) {
    CAPTURE(d);
    for (int N : {20, 60}) {
      const auto a = obc_spectrum(build_obc_matrix(example_model(2, 0.4, 1, d), N));
      const auto b = obc_spectrum(build_obc_matrix(example_model(2, 0.4, std::sqrt(1 - d * d), 0), N));
      for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-10);
      for (double r : a.residuals) CHECK(r <= 1e-8);
    }
  }
}
