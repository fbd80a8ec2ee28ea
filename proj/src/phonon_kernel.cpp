#include "polaron/phonon_kernel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "polaron/errors.hpp"
#include "polaron/quadrature.hpp"
#include "polaron/units.hpp"

namespace polaron {

namespace {

// x coth(x), finite at x = 0.
double x_coth_x(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0;
  return x / std::tanh(x);
}

std::size_t grid_nodes(double tau_max, double h) {
  auto n = static_cast<std::size_t>(std::ceil(tau_max / h - 1e-9));
  if (n < 2) n = 2;
  if (n % 2 == 1) ++n;  // Simpson panels need an even interval count
  return n + 1;
}

}  // namespace

double spectral_density(double omega, const BathParams& bath) {
  if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
  return bath.alpha_p * omega * omega * omega *
         std::exp(-omega * omega / (2.0 * bath.omega_b * bath.omega_b));
}

PhiEstimate phi_with_error(double tau, const BathParams& bath, const QuadratureSettings& q) {
  if (tau < 0.0) throw std::domain_error("phi: tau must be >= 0");
  if (bath.alpha_p == 0.0) return {};

  const double kt = thermal_frequency(bath.temperature);
  const double wb2 = bath.omega_b * bath.omega_b;
  // J(w)/w^2 coth(w / 2kT) = alpha e^{-w^2/2wb^2} 2kT x coth(x), x = w / 2kT.
  auto integrand = [&](double w) {
    const double envelope = bath.alpha_p * std::exp(-w * w / (2.0 * wb2));
    const double re = envelope * 2.0 * kt * x_coth_x(w / (2.0 * kt)) * std::cos(w * tau);
    const double im = -envelope * w * std::sin(w * tau);
    return std::complex<double>(re, im);
  };

  const double upper = q.omega_cutoff_factor * bath.omega_b;
  const double panel = tau > 0.0 ? std::min(upper / 8.0, kPi / (4.0 * tau)) : upper / 8.0;
  const auto est = quad::gauss_kronrod(integrand, 0.0, upper, q.quad_tol, panel);
  if (!est.converged) {
    throw NumericalError("phi: quadrature did not converge at tau = " + std::to_string(tau),
                         est.error);
  }
  return {est.value, est.error};
}

std::complex<double> phi(double tau, const BathParams& bath, const QuadratureSettings& q) {
  return phi_with_error(tau, bath, q).value;
}

double bath_displacement(const BathParams& bath, const QuadratureSettings& q) {
  return std::exp(-0.5 * phi(0.0, bath, q).real());
}

std::complex<double> PhononBath::phi(double tau) const {
  if (tau < 0.0) throw std::domain_error("PhononBath::phi: tau must be >= 0");
  const std::size_t n = table_.size();
  const double x = tau / tau_step_;
  // Node positions carry rounding from tau / step; snap onto them.
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9 && nearest <= static_cast<double>(n - 1)) {
    return table_[static_cast<std::size_t>(nearest)];
  }
  if (x > static_cast<double>(n - 1)) return {};
  const auto i = static_cast<std::size_t>(x);
  // Stencil i-1..i+2, shifted at the edges.
  std::size_t base = i == 0 ? 0 : i - 1;
  if (base + 3 > n - 1) base = n - 4;
  const double s = x - static_cast<double>(base);
  std::complex<double> out{};
  for (std::size_t j = 0; j < 4; ++j) {
    double w = 1.0;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m != j) w *= (s - static_cast<double>(m)) / (static_cast<double>(j) - static_cast<double>(m));
    }
    out += w * table_[base + j];
  }
  return out;
}

PhononBath make_phonon_bath(const BathParams& bath, double tau_step,
                            std::vector<std::complex<double>> table) {
  if (table.size() < 4) throw std::invalid_argument("make_phonon_bath: table needs >= 4 nodes");
  PhononBath out;
  out.params_ = bath;
  out.tau_step_ = tau_step;
  out.b_avg_ = std::exp(-0.5 * table.front().real());
  out.table_ = std::move(table);
  return out;
}

double bath_displacement(const PhononBath& bath) { return bath.b_avg(); }

double choose_tau_max(const BathParams& bath, const QuadratureSettings& q) {
  if (q.tau_max) return *q.tau_max;
  if (bath.alpha_p == 0.0) return 4.0 * q.tau_step;
  constexpr double kMarch = 0.25;
  constexpr int kQuietSamples = 4;
  constexpr double kLimit = 200.0;
  double first_quiet = -1.0;
  int quiet = 0;
  for (double tau = 1.0 / bath.omega_b; tau <= kLimit; tau += kMarch) {
    if (std::abs(phi(tau, bath, q)) < q.kernel_tol) {
      if (quiet++ == 0) first_quiet = tau;
      if (quiet == kQuietSamples) return first_quiet;
    } else {
      quiet = 0;
    }
  }
  throw NumericalError("choose_tau_max: |phi| does not decay below kernel_tol", kLimit);
}

namespace {

template <bool Parallel>
PhononBath tabulate(const BathParams& bath, const QuadratureSettings& q) {
  const double h = q.tau_step;
  std::size_t nodes = grid_nodes(choose_tau_max(bath, q), h);
  if (!q.tau_max && bath.alpha_p != 0.0) {
    // Postcondition |phi(tau_max)| < kernel_tol.
    while (std::abs(phi(h * static_cast<double>(nodes - 1), bath, q)) >= q.kernel_tol) nodes += 2;
  }
  std::vector<std::complex<double>> table(nodes);
  const auto n = static_cast<long>(nodes);
  if constexpr (Parallel) {
    // Each node is independent; results are bit-identical to the serial loop.
#pragma omp parallel for schedule(dynamic, 8)
    for (long k = 0; k < n; ++k) {
      table[static_cast<std::size_t>(k)] = phi(h * static_cast<double>(k), bath, q);
    }
  } else {
    for (long k = 0; k < n; ++k) {
      table[static_cast<std::size_t>(k)] = phi(h * static_cast<double>(k), bath, q);
    }
  }
  return make_phonon_bath(bath, h, std::move(table));
}

}  // namespace

PhononBath tabulate_kernel(const BathParams& bath, const QuadratureSettings& q) {
  return tabulate<true>(bath, q);
}

namespace serial {
PhononBath tabulate_kernel(const BathParams& bath, const QuadratureSettings& q) {
  return tabulate<false>(bath, q);
}
}  // namespace serial

void write_kernel_csv(std::ostream& out, const PhononBath& bath) {
  out << "tau_ps,re_phi,im_phi\n";
  char line[128];
  for (std::size_t k = 0; k < bath.size(); ++k) {
    const auto v = bath.table()[k];
    std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", bath.tau_at(k), v.real(), v.imag());
    out << line;
  }
}

}  // namespace polaron
