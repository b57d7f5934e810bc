#include <doctest.h>

#include <random>

#include "nonbloch/error.hpp"
#include "nonbloch/model.hpp"
#include "nonbloch/model_io.hpp"
#include "oracles.hpp"

using namespace nonbloch;

TEST_CASE("example model couplings") {
  SUBCASE("hermitian at delta = 0") {
    const auto m = example_model(2, 0.4, 1, 0);
    CHECK(m.hermitian());
    CHECK(m.one_sided() == Side::None);
  }
  SUBCASE("one-sided at delta = t") {
    const auto m = example_model(2, 0.4, 1, 1);
    CHECK(m.one_sided() == Side::Right);
    CHECK(m.mirrored().one_sided() == Side::Left);
    CHECK_FALSE(m.hermitian());
  }
  SUBCASE("delta = 0.6") {
    const auto m = example_model(2, 0.4, 1, 0.6);
    CHECK(m.theta(1).real() == doctest::Approx(1.6));
    CHECK(m.phi(-1).real() == doctest::Approx(0.4));
    CHECK(m.rho(0) == cplx(2));
    CHECK(m.theta(0) == cplx(0.4));
    CHECK(m.phi(0) == cplx(0.4));
    int nonzero = 0;
    for (int l = -1; l <= 1; ++l)
      nonzero += (m.rho(l) != cplx{}) + (m.theta(l) != cplx{}) + (m.phi(l) != cplx{});
    CHECK(nonzero == 5);
  }
  CHECK(example_model(0, 0, 1, 0).max_coupling() == doctest::Approx(1.0));
}

TEST_CASE("range validation") {
  CHECK_THROWS_AS(LatticeModel(0), std::invalid_argument);
  LatticeModel m(1);
  CHECK_THROWS_AS(m.set_rho(2, 1.0), std::out_of_range);
  CHECK(m.rho(5) == cplx{});
  CHECK(m.one_sided() == Side::Right);  // no hopping at all
}

TEST_CASE("bloch hamiltonian at k = 0") {
  const auto s = bloch_hamiltonian(example_model(2, 0.4, 1, 0), 0.0);
  CHECK(std::abs(s.d[0] - 1.4) < 1e-14);
  CHECK(std::abs(s.d[1]) < 1e-14);
  CHECK(std::abs(s.d[2] - 2.0) < 1e-14);
  CHECK(std::abs(s.e_plus - std::sqrt(4.0 + 1.96)) < 1e-14);
  CHECK(std::abs(s.H.trace()) == 0.0);
  // Pauli decomposition
  const cplx I{0, 1};
  CHECK(std::abs(s.H(0, 1) - (s.d[0] - I * s.d[1])) < 1e-14);
  CHECK(std::abs(s.H(1, 0) - (s.d[0] + I * s.d[1])) < 1e-14);
}

TEST_CASE("bloch hamiltonian is 2 pi periodic and chiral") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-10, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = oracle::random_model(rng, 1 + trial % 3);
    const double k = U(rng);
    const auto a = bloch_hamiltonian(m, k), b = bloch_hamiltonian(m, k + 2 * oracle::pi);
    CHECK((a.H - b.H).norm() < 1e-12 * (1 + a.H.norm()));
    CHECK(a.k >= -oracle::pi);
    CHECK(a.k < oracle::pi);
    CHECK(std::abs(a.e_plus + a.e_minus) < 1e-12);
  }
}

TEST_CASE("collapsed model satisfies E^2 = Q on the Brillouin zone") {
  const auto m = example_model(2, 0.4, 1, 1);
  const auto Q = q_polynomial(m);
  for (double k = -3.1; k < 3.1; k += 0.37) {
    const auto s = bloch_hamiltonian(m, k);
    CHECK(std::abs(s.e_plus * s.e_plus - Q.evaluate(std::polar(1.0, -k))) < 1e-12);
  }
}

TEST_CASE("Q coefficients of the example model") {
  const double D = 2, t0 = 0.4, t = 1;
  for (double d : {0.0, 0.3, 0.6, 1.0}) {
    const auto Q = q_polynomial(example_model(D, t0, t, d));
    CHECK(std::abs(Q.at(0) - (D * D + t0 * t0 + (t + d) * (t - d))) < 1e-14);
    CHECK(std::abs(Q.at(1) - t0 * (t + d)) < 1e-14);
    CHECK(std::abs(Q.at(-1) - t0 * (t - d)) < 1e-14);
    CHECK(Q.at(2) == cplx{});
    CHECK(Q.at(-2) == cplx{});
  }
  const auto herm = q_polynomial(example_model(D, t0, t, 0));
  CHECK(std::abs(herm.at(1) - std::conj(herm.at(-1))) < 1e-15);

  LatticeModel only_rho(1);
  only_rho.set_rho(0, 1.5);
  const auto Qr = q_polynomial(only_rho);
  for (int m = -2; m <= 2; ++m) CHECK(Qr.at(m) == (m == 0 ? cplx(2.25) : cplx{}));
}

TEST_CASE("Q polynomial matches d.d on random models") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-oracle::pi, oracle::pi);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_model(rng, 1 + trial % 3);
    const auto Q = q_polynomial(m);
    for (int j = 0; j < 256; ++j) {
      const double k = U(rng);
      const auto s = bloch_hamiltonian(m, k);
      const cplx dd = s.d[0] * s.d[0] + s.d[1] * s.d[1] + s.d[2] * s.d[2];
      worst = std::max(worst, std::abs(Q.evaluate(std::polar(1.0, -k)) - dd) / std::max(1.0, std::abs(dd)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("hermitian models give real non-negative Q on the unit circle") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const int q = 1 + trial % 3;
    LatticeModel m(q);
    m.set_rho(0, g(rng));
    m.set_theta(0, {g(rng), g(rng)});
    m.set_phi(0, std::conj(m.theta(0)));
    for (int l = 1; l <= q; ++l) {
      const cplx r{g(rng), g(rng)}, th{g(rng), g(rng)}, ph{g(rng), g(rng)};
      m.set_rho(l, r), m.set_rho(-l, std::conj(r));
      m.set_theta(l, th), m.set_phi(-l, std::conj(th));
      m.set_phi(l, ph), m.set_theta(-l, std::conj(ph));
    }
    REQUIRE(m.hermitian());
    const auto Q = q_polynomial(m);
    for (double k = -3.14; k < 3.14; k += 0.05) {
      const cplx v = Q.evaluate(std::polar(1.0, -k));
      CHECK(std::abs(v.imag()) < 1e-12 * (1 + std::abs(v)));
      CHECK(v.real() > -1e-12);
    }
  }
}

TEST_CASE("collapse energy") {
  CHECK(std::abs(collapse_energy(example_model(2, 0.4, 1, 0.3)) - oracle::E0) < 1e-15);
  CHECK(std::abs(collapse_energy(example_model(2, 0.4, 1, 1)) - 2.0396078054371141) < 1e-15);
  CHECK(collapse_energy(LatticeModel(1)) == cplx{});
  const double D = 1.7, t0 = 0.3;
  const cplx e0 = collapse_energy(example_model(D, t0, 1, 0.5));
  CHECK(std::abs(e0 * e0 - (D * D + t0 * t0)) < 1e-14);
}

TEST_CASE("model file round trip") {
  const std::string text =
      "# example\n"
      "q = 2\n"
      "rho[0] = 2\n"
      "theta[1] = 1.6, 0.25\n"
      "phi[-2] = -0.5,1e-3   # trailing comment\n";
  const auto m = parse_model(text);
  CHECK(m.range() == 2);
  CHECK(m.theta(1) == cplx(1.6, 0.25));
  CHECK(m.phi(-2) == cplx(-0.5, 1e-3));
  const auto again = parse_model(format_model(m));
  for (int l = -2; l <= 2; ++l) {
    CHECK(again.rho(l) == m.rho(l));
    CHECK(again.theta(l) == m.theta(l));
    CHECK(again.phi(l) == m.phi(l));
  }
  const auto ex = parse_model("example = 2, 0.4, 1, 0.6\nrho[1] = 0.1\n");
  CHECK(ex.theta(1).real() == doctest::Approx(1.6));
  CHECK(ex.rho(1) == cplx(0.1));
}

TEST_CASE("model file errors name the key") {
  auto msg = [](const std::string& text) {
    try {
      parse_model(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg("q = 1\nlambda[0] = 1\n").find("lambda[0]") != std::string::npos);
  CHECK(msg("q = 1\nrho[2] = 1\n").find("rho[2]") != std::string::npos);
  CHECK(msg("q = 1\nrho[0] = abc\n").find("rho[0]") != std::string::npos);
  CHECK(msg("rho[0] = 1\n").find("q") != std::string::npos);
  CHECK(msg("q = 1\njust text\n").find("line 2") != std::string::npos);
}
