#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "polaron/config.hpp"
#include "polaron/phonon_kernel.hpp"

namespace polaron {

/// Instantaneous drive seen by the phonon rates.
struct DriveSnapshot {
  double omega = 0.0;    // bare Omega(t), 1/ps
  double omega_r = 0.0;  // <B> Omega(t)
  double delta = 0.0;    // Delta_Lx, 1/ps
  double eta = 0.0;      // sqrt(Omega_R^2 + Delta^2)

  static DriveSnapshot make(double omega, double b_avg, double delta);
};

/// Phonon rates of the semi-analytical master equation, all in 1/ps. In
/// effective mode only gamma_sig_plus/minus and gamma_cd are populated.
struct RateSet {
  double gamma_sig_plus = 0.0;
  double gamma_sig_minus = 0.0;
  double gamma_cd = 0.0;
  double gamma_sd = 0.0;
  std::complex<double> gamma_u{};
  std::complex<double> gamma_g{};
  double delta_shift = 0.0;

  RateSet& operator+=(const RateSet& o);
  RateSet& operator*=(double s);
  bool operator==(const RateSet&) const = default;
};

/// Shorthand functions of (t, tau) used when expanding the rotated operators.
struct AuxKernels {
  double f, g, h, q, r;
  static AuxKernels at(const DriveSnapshot& s, double tau);
};

enum class RateModel { full, effective };

/// Tau-integrals of the rates against a tabulated kernel. The kernel
/// combinations and composite-Simpson weights are precomputed once, so each
/// evaluation is a single O(N) pass with no transcendental calls in the loop
/// beyond periodic resynchronisation of a rotation recurrence.
class RateEngine {
 public:
  explicit RateEngine(const PhononBath& bath);

  const PhononBath& bath() const { return *bath_; }
  double b_avg() const { return bath_->b_avg(); }

  RateSet full(const DriveSnapshot& s) const;
  RateSet effective(const DriveSnapshot& s) const;
  RateSet evaluate(const DriveSnapshot& s, RateModel model) const {
    return model == RateModel::full ? full(s) : effective(s);
  }

  /// Omega_R-independent integrals of the effective rates at a detuning:
  /// Gamma_0^{+,-,cd} = (Omega_R^2 / 2) * {plus, minus, cd}.
  struct EffectiveIntegrals {
    double plus = 0.0, minus = 0.0, cd = 0.0;
  };
  EffectiveIntegrals effective_integrals(double delta) const;

  /// Below this Omega_R the rates are reported as exactly zero.
  static constexpr double kDriveFloor = 1e-10;

 private:
  const PhononBath* bath_;
  double h_;
  std::vector<double> weight_;                 // Simpson weight times h
  std::vector<std::complex<double>> cosh_m1_;  // cosh(phi) - 1
  std::vector<std::complex<double>> sinh_;     // sinh(phi)
  std::vector<double> re_exp_m1_;              // Re(e^phi - 1)
  std::vector<double> im_exp_m1_;              // Im(e^phi - 1)
  std::vector<double> re_one_m_exp_neg_;       // Re(1 - e^-phi)
};

RateSet full_rates(const DriveSnapshot& s, const PhononBath& bath);
RateSet effective_rates(const DriveSnapshot& s, const PhononBath& bath);

/// Time average int Gamma_i(t) dt / (2 tau_p) over [c - 5 tau_p, c + 5 tau_p]
/// for a single Gaussian pulse (the exciton drive, or Omega_eff in cavity mode).
RateSet averaged_rates(const DriveSpec& drive, const PhononBath& bath, RateModel model);

/// Rates on a uniform time grid with cubic interpolation in between.
class RateCache {
 public:
  static constexpr double kDefaultStep = 0.05;  // ps

  template <class RateAt>
  RateCache(double t0, double t1, double step, RateAt&& rate_at) : t0_(t0), step_(step) {
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step)) + 1;
    samples_.reserve(std::max<std::size_t>(n, 4));
    for (std::size_t k = 0; k < std::max<std::size_t>(n, 4); ++k) {
      samples_.push_back(rate_at(t0 + step * static_cast<double>(k)));
    }
  }

  RateSet at(double t) const;
  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + step_ * static_cast<double>(samples_.size() - 1); }

 private:
  double t0_, step_;
  std::vector<RateSet> samples_;
};

}  // namespace polaron
