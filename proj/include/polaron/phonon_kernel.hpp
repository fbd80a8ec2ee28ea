#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "polaron/config.hpp"

namespace polaron {

/// J(omega) = alpha_p omega^3 exp(-omega^2 / 2 omega_b^2), in 1/ps.
/// Throws std::domain_error for omega < 0.
double spectral_density(double omega, const BathParams& bath);

struct PhiEstimate {
  std::complex<double> value;
  double error = 0.0;
};

/// Phonon correlation function
///   phi(tau) = int_0^inf J(w)/w^2 [coth(hbar w / 2 kB T) cos(w tau) - i sin(w tau)] dw
/// by adaptive Gauss-Kronrod over [0, omega_cutoff_factor * omega_b] with
/// panels no wider than pi / (4 tau). Throws NumericalError (carrying the
/// achieved error estimate) if the tolerance is not met within budget.
PhiEstimate phi_with_error(double tau, const BathParams& bath, const QuadratureSettings& q = {});
std::complex<double> phi(double tau, const BathParams& bath, const QuadratureSettings& q = {});

/// <B> = exp(-Re phi(0) / 2).
double bath_displacement(const BathParams& bath, const QuadratureSettings& q = {});

/// phi tabulated on a uniform tau grid [0, tau_max]. Immutable once built.
class PhononBath {
 public:
  const BathParams& params() const { return params_; }
  double b_avg() const { return b_avg_; }
  double tau_step() const { return tau_step_; }
  double tau_max() const { return tau_step_ * static_cast<double>(table_.size() - 1); }
  std::size_t size() const { return table_.size(); }
  double tau_at(std::size_t k) const { return tau_step_ * static_cast<double>(k); }
  std::span<const std::complex<double>> table() const { return table_; }

  /// Cubic (4-point Lagrange) interpolation; exact at nodes, 0 beyond tau_max.
  std::complex<double> phi(double tau) const;

 private:
  friend PhononBath make_phonon_bath(const BathParams&, double, std::vector<std::complex<double>>);

  BathParams params_;
  double b_avg_ = 1.0;
  double tau_step_ = 0.01;
  std::vector<std::complex<double>> table_;
};

PhononBath make_phonon_bath(const BathParams& bath, double tau_step,
                            std::vector<std::complex<double>> table);

double bath_displacement(const PhononBath& bath);

/// Memory cutoff: smallest tau (on a 0.25 ps march) beyond which |phi| stays
/// below q.kernel_tol, or q.tau_max if set.
double choose_tau_max(const BathParams& bath, const QuadratureSettings& q = {});

/// Tabulate phi with OpenMP over the tau grid.
PhononBath tabulate_kernel(const BathParams& bath, const QuadratureSettings& q = {});

namespace serial {
/// Reference single-threaded tabulation; bit-identical to polaron::tabulate_kernel.
PhononBath tabulate_kernel(const BathParams& bath, const QuadratureSettings& q = {});
}  // namespace serial

/// CSV dump with columns tau_ps, re_phi, im_phi.
void write_kernel_csv(std::ostream& out, const PhononBath& bath);

}  // namespace polaron
