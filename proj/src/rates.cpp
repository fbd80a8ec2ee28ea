#include "polaron/rates.hpp"

#include <cmath>

#include "polaron/drive.hpp"

namespace polaron {

DriveSnapshot DriveSnapshot::make(double omega, double b_avg, double delta) {
  DriveSnapshot s;
  s.omega = omega;
  s.omega_r = b_avg * omega;
  s.delta = delta;
  s.eta = std::hypot(s.omega_r, delta);
  return s;
}

RateSet& RateSet::operator+=(const RateSet& o) {
  gamma_sig_plus += o.gamma_sig_plus;
  gamma_sig_minus += o.gamma_sig_minus;
  gamma_cd += o.gamma_cd;
  gamma_sd += o.gamma_sd;
  gamma_u += o.gamma_u;
  gamma_g += o.gamma_g;
  delta_shift += o.delta_shift;
  return *this;
}

RateSet& RateSet::operator*=(double s) {
  gamma_sig_plus *= s;
  gamma_sig_minus *= s;
  gamma_cd *= s;
  gamma_sd *= s;
  gamma_u *= s;
  gamma_g *= s;
  delta_shift *= s;
  return *this;
}

AuxKernels AuxKernels::at(const DriveSnapshot& s, double tau) {
  if (s.eta == 0.0) return {1.0, 0.0, 0.0, 1.0, 0.0};
  const double c = std::cos(s.eta * tau);
  const double sn = std::sin(s.eta * tau);
  const double e2 = s.eta * s.eta;
  return {(s.delta * s.delta * c + s.omega_r * s.omega_r) / e2,
          s.delta * sn / s.eta,
          2.0 * s.delta * s.omega_r * (1.0 - c) / e2,
          c,
          2.0 * s.omega_r * sn / s.eta};
}

RateEngine::RateEngine(const PhononBath& bath) : bath_(&bath), h_(bath.tau_step()) {
  const auto table = bath.table();
  const std::size_t n = table.size();
  weight_.resize(n);
  cosh_m1_.resize(n);
  sinh_.resize(n);
  re_exp_m1_.resize(n);
  im_exp_m1_.resize(n);
  re_one_m_exp_neg_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Composite Simpson; the table has an even number of intervals.
    double w = (k == 0 || k + 1 == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    weight_[k] = w * h_ / 3.0;
    const auto p = table[k];
    const auto em1 = std::expm1(p.real()) * std::exp(std::complex<double>(0.0, p.imag())) +
                     (std::exp(std::complex<double>(0.0, p.imag())) - 1.0);
    const auto emm1 = std::expm1(-p.real()) * std::exp(std::complex<double>(0.0, -p.imag())) +
                      (std::exp(std::complex<double>(0.0, -p.imag())) - 1.0);
    cosh_m1_[k] = 0.5 * (em1 + emm1);
    sinh_[k] = 0.5 * (em1 - emm1);
    re_exp_m1_[k] = em1.real();
    im_exp_m1_[k] = em1.imag();
    re_one_m_exp_neg_[k] = -emm1.real();
  }
}

RateSet RateEngine::full(const DriveSnapshot& s) const {
  RateSet out;
  if (s.omega_r < kDriveFloor) return out;

  const double eta = s.eta;
  const double delta = s.delta;
  // Rotation by half the angle eta * h: sin(x) = 2 sh ch, 1 - cos(x) = 2 sh^2
  // stay accurate for small eta tau.
  const double half_step = 0.5 * eta * h_;
  const double cd = std::cos(half_step);
  const double sd = std::sin(half_step);
  double ch = 1.0, sh = 0.0;

  double i1 = 0.0, i2 = 0.0, icd = 0.0, isd = 0.0, ids = 0.0;
  std::complex<double> iu{}, ig{};
  const double inv_eta = 1.0 / eta;
  const double inv_eta2 = inv_eta * inv_eta;
  const std::size_t n = weight_.size();
  constexpr std::size_t kResync = 64;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % kResync == 0 && k > 0) {
      const double angle = half_step * static_cast<double>(k);
      ch = std::cos(angle);
      sh = std::sin(angle);
    }
    const double w = weight_[k];
    const double sin_over_eta = 2.0 * sh * ch * inv_eta;
    const double one_m_cos = 2.0 * sh * sh;
    const double one_m_cos_over_eta2 = one_m_cos * inv_eta2;
    const double cos_full = 1.0 - one_m_cos;
    const double f = 1.0 - delta * delta * one_m_cos_over_eta2;

    const auto a = cosh_m1_[k];
    const auto b = sinh_[k];
    i1 += w * (a.real() * f + b.real() * cos_full);
    i2 += w * im_exp_m1_[k] * sin_over_eta;
    icd += w * (b.real() * cos_full - a.real() * f);
    iu += (w * sin_over_eta) * b;
    ig += (w * one_m_cos_over_eta2) * a;
    isd += w * re_one_m_exp_neg_[k] * sin_over_eta;
    ids += w * re_exp_m1_[k] * sin_over_eta;

    const double ch_next = ch * cd - sh * sd;
    sh = sh * cd + ch * sd;
    ch = ch_next;
  }

  const double or2 = s.omega_r * s.omega_r;
  const double pre = 0.5 * or2;
  out.gamma_sig_plus = pre * (i1 - delta * i2);
  out.gamma_sig_minus = pre * (i1 + delta * i2);
  out.gamma_cd = pre * icd;
  out.gamma_u = 0.5 * or2 * s.omega_r * iu;
  out.gamma_g = 0.5 * or2 * s.omega_r * delta * ig;
  out.gamma_sd = pre * delta * isd;
  out.delta_shift = pre * delta * ids;
  return out;
}

RateEngine::EffectiveIntegrals RateEngine::effective_integrals(double delta) const {
  EffectiveIntegrals out;
  for (std::size_t k = 0; k < weight_.size(); ++k) {
    const double tau = h_ * static_cast<double>(k);
    const double c = std::cos(delta * tau);
    const double sn = std::sin(delta * tau);
    const double w = weight_[k];
    out.plus += w * (c * re_exp_m1_[k] - sn * im_exp_m1_[k]);
    out.minus += w * (c * re_exp_m1_[k] + sn * im_exp_m1_[k]);
    out.cd += w * c * re_one_m_exp_neg_[k];
  }
  return out;
}

RateSet RateEngine::effective(const DriveSnapshot& s) const {
  RateSet out;
  if (s.omega_r < kDriveFloor) return out;
  const auto in = effective_integrals(s.delta);
  const double pre = 0.5 * s.omega_r * s.omega_r;
  out.gamma_sig_plus = pre * in.plus;
  out.gamma_sig_minus = pre * in.minus;
  out.gamma_cd = pre * in.cd;
  return out;
}

RateSet full_rates(const DriveSnapshot& s, const PhononBath& bath) {
  return RateEngine(bath).full(s);
}

RateSet effective_rates(const DriveSnapshot& s, const PhononBath& bath) {
  return RateEngine(bath).effective(s);
}

RateSet averaged_rates(const DriveSpec& drive, const PhononBath& bath, RateModel model) {
  const RateEngine engine(bath);
  const double delta = rate_detuning(drive);
  const double t0 = drive.center - 5.0 * drive.tau_p;
  const double t1 = drive.center + 5.0 * drive.tau_p;
  constexpr int kIntervals = 2000;  // even, for Simpson
  const double dt = (t1 - t0) / kIntervals;
  DriveSpec single = drive;
  single.train_pulses = 1;
  RateSet total;
  for (int i = 0; i <= kIntervals; ++i) {
    const double t = t0 + dt * i;
    auto r = engine.evaluate(DriveSnapshot::make(exciton_drive(t, single), engine.b_avg(), delta), model);
    r *= (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    total += r;
  }
  total *= dt / 3.0 / (2.0 * drive.tau_p);
  return total;
}

RateSet RateCache::at(double t) const {
  const std::size_t n = samples_.size();
  double x = (t - t0_) / step_;
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(x);
  if (i >= n - 1) return samples_[n - 1];
  std::size_t base = i == 0 ? 0 : i - 1;
  if (base + 3 > n - 1) base = n - 4;
  const double s = x - static_cast<double>(base);
  RateSet out;
  for (std::size_t j = 0; j < 4; ++j) {
    double w = 1.0;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m != j) w *= (s - static_cast<double>(m)) / (static_cast<double>(j) - static_cast<double>(m));
    }
    RateSet term = samples_[base + j];
    term *= w;
    out += term;
  }
  return out;
}

}  // namespace polaron
