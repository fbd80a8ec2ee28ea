#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "polaron/errors.hpp"
#include "polaron/phonon_kernel.hpp"
#include "polaron/units.hpp"
#include "support.hpp"

using namespace polaron;

namespace {

// Double-exponential quadrature of the same integral, on the half line for
// tau = 0 and on [0, 10 omega_b] otherwise.
double oracle_x_coth(double w, double w_t) {
  const double x = w / (2.0 * w_t);
  return x < 1e-8 ? 2.0 * w_t : w / std::tanh(x);
}

double oracle_re_phi0(const BathParams& b) {
  const double w_t = thermal_frequency(b.temperature);
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double w) {
    return b.alpha_p * std::exp(-w * w / (2.0 * b.omega_b * b.omega_b)) * oracle_x_coth(w, w_t);
  }, 1e-14);
}

std::complex<double> oracle_phi(double tau, const BathParams& b) {
  const double w_t = thermal_frequency(b.temperature);
  boost::math::quadrature::tanh_sinh<double> q;
  const double top = 10.0 * b.omega_b;
  auto weight = [&](double w) { return b.alpha_p * std::exp(-w * w / (2.0 * b.omega_b * b.omega_b)); };
  const double re = q.integrate([&](double w) { return weight(w) * oracle_x_coth(w, w_t) * std::cos(w * tau); },
                                0.0, top, 1e-13);
  const double im = q.integrate([&](double w) { return -weight(w) * w * std::sin(w * tau); }, 0.0, top, 1e-13);
  return {re, im};
}

}  // namespace

TEST_CASE("spectral density shape") {
  const BathParams b = reference_config().bath;
  CHECK(spectral_density(0.0, b) == 0.0);
  CHECK(spectral_density(b.omega_b, b) ==
        doctest::Approx(b.alpha_p * std::pow(b.omega_b, 3) * std::exp(-0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(spectral_density(-1e-3, b), std::domain_error);
  // Maximum of w^3 exp(-w^2 / 2 wb^2) sits at sqrt(3) wb.
  double best_w = 0.0, best = -1.0;
  for (int k = 1; k <= 200000; ++k) {
    const double w = 5.0 * b.omega_b * k / 200000.0;
    if (spectral_density(w, b) > best) best = spectral_density(w, b), best_w = w;
  }
  CHECK(best_w == doctest::Approx(std::sqrt(3.0) * b.omega_b).epsilon(1e-4));
}

TEST_CASE("phi(0) and <B> agree with a double-exponential rule") {
  for (double temp : {1.0, 4.2, 10.0, 30.0}) {
    BathParams b = reference_config().bath;
    b.temperature = temp;
    const auto p0 = phi(0.0, b);
    const double oracle = oracle_re_phi0(b);
    CHECK(p0.imag() == 0.0);
    CHECK(std::abs(p0.real() - oracle) <= 1e-8 * oracle);
    const double b_oracle = std::exp(-0.5 * oracle);
    CHECK(std::abs(bath_displacement(b) - b_oracle) <= 1e-8 * b_oracle);
  }
}

TEST_CASE("phi(tau) agrees with the oracle away from zero") {
  const BathParams b = reference_config().bath;
  for (double tau : {0.05, 0.3, 1.0, 2.5, 4.0}) {
    const auto got = phi(tau, b);
    const auto want = oracle_phi(tau, b);
    CHECK(std::abs(got - want) <= 1e-9 * std::abs(phi(0.0, b)));
  }
}

TEST_CASE("reference bath displacement") {
  const double b = bath_displacement(reference_config().bath);
  CHECK(b > 0.9);
  CHECK(b < 1.0);
  BathParams free = reference_config().bath;
  free.alpha_p = 0.0;
  CHECK(bath_displacement(free) == 1.0);
  CHECK(phi(1.0, free) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("<B> decreases with temperature and coupling") {
  BathParams b = reference_config().bath;
  double prev = 1.0;
  for (double temp : {0.5, 4.2, 10.0, 20.0, 50.0}) {
    b.temperature = temp;
    const double v = bath_displacement(b);
    CHECK(v < prev);
    prev = v;
  }
  b = reference_config().bath;
  prev = 1.0;
  for (double a : {0.01, 0.03, 0.06}) {
    b.alpha_p = a;
    const double v = bath_displacement(b);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("tolerance halving stays inside the reported error") {
  const BathParams b = reference_config().bath;
  QuadratureSettings loose;
  loose.quad_tol = 1e-8;
  QuadratureSettings tight = loose;
  tight.quad_tol = 0.5e-8;
  for (double tau : {0.0, 0.7, 3.0}) {
    const auto a = phi_with_error(tau, b, loose);
    const auto c = phi_with_error(tau, b, tight);
    CHECK(std::abs(a.value - c.value) <= a.error + 1e-15);
  }
}

TEST_CASE("quadrature budget exhaustion raises") {
  QuadratureSettings q;
  q.quad_tol = 1e-30;
  CHECK_THROWS_AS(phi(1.0, reference_config().bath, q), NumericalError);
}

TEST_CASE("tabulated kernel matches direct evaluation at random tau") {
  const auto& bath = *testing::reference_bath();
  const BathParams b = reference_config().bath;
  CHECK(bath.table()[0] == phi(0.0, b));
  CHECK(bath.b_avg() == doctest::Approx(bath_displacement(b)).epsilon(1e-15));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(0.0, bath.tau_max());
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double tau = dist(rng);
    worst = std::max(worst, std::abs(bath.phi(tau) - phi(tau, b)));
  }
  CHECK(worst <= 1e-7);
  MESSAGE("max interpolation error " << worst);
}

TEST_CASE("memory cutoff postcondition") {
  const auto& bath = *testing::reference_bath();
  const double tol = reference_config().quadrature.kernel_tol;
  CHECK(std::abs(bath.table().back()) < tol);
  CHECK(bath.tau_max() >= choose_tau_max(reference_config().bath));
  CHECK(bath.phi(bath.tau_max() + 1.0) == std::complex<double>(0.0, 0.0));
  for (double tau = bath.tau_max(); tau < bath.tau_max() + 3.0; tau += 0.1) {
    CHECK(std::abs(phi(tau, reference_config().bath)) < 10.0 * tol);
  }
  QuadratureSettings fixed;
  fixed.tau_max = 3.0;
  CHECK(choose_tau_max(reference_config().bath, fixed) == 3.0);
}

TEST_CASE("kernel invariants on the table") {
  const auto& bath = *testing::reference_bath();
  const double re0 = bath.table()[0].real();
  const double bound = std::exp(re0) - 1.0;
  const double b2 = bath.b_avg() * bath.b_avg();
  for (std::size_t k = 0; k < bath.size(); ++k) {
    const auto p = bath.table()[k];
    CHECK(std::abs(std::exp(p) - 1.0) <= bound * (1.0 + 1e-12));
    // G_g + G_u = <B>^2 (e^phi - 1).
    const auto gg = b2 * (std::cosh(p) - 1.0);
    const auto gu = b2 * std::sinh(p);
    CHECK(std::abs(gg + gu - b2 * (std::exp(p) - 1.0)) <= 1e-15);
    CHECK(std::abs(p.real()) <= re0);
  }
}

TEST_CASE("serial and parallel tabulation are bit-identical") {
  const BathParams b = reference_config().bath;
  const auto par = tabulate_kernel(b);
  const auto ser = serial::tabulate_kernel(b);
  REQUIRE(par.size() == ser.size());
  for (std::size_t k = 0; k < par.size(); ++k) CHECK(par.table()[k] == ser.table()[k]);
  CHECK(par.b_avg() == ser.b_avg());
}

TEST_CASE("interpolation is exact at nodes") {
  const auto& bath = *testing::reference_bath();
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{57}, bath.size() - 1}) {
    CHECK(bath.phi(bath.tau_at(k)) == bath.table()[k]);
  }
}

TEST_CASE("kernel csv dump") {
  std::ostringstream out;
  write_kernel_csv(out, *testing::reference_bath());
  const std::string text = out.str();
  CHECK(text.rfind("tau_ps,re_phi,im_phi\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == testing::reference_bath()->size() + 1);
}
