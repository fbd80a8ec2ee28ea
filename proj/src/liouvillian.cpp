#include "polaron/liouvillian.hpp"

#include <cmath>

namespace polaron {

namespace ops {
Op sigma_plus() {
  Op m = Op::Zero();
  m(1, 0) = 1.0;
  return m;
}
Op sigma_minus() { return sigma_plus().adjoint(); }
Op number() { return sigma_plus() * sigma_minus(); }
Op sigma_x() { return sigma_plus() + sigma_minus(); }
// Chosen so that i (sigma+ - sigma-) = -sigma_y.
Op sigma_y() { return cplx(0.0, -1.0) * (sigma_plus() - sigma_minus()); }
Op identity() { return Op::Identity(); }
}  // namespace ops

VecRho vec(const Op& rho) { return VecRho(rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1)); }

Op unvec(const VecRho& v) {
  Op m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

namespace {

Superop kron(const Op& a, const Op& b) {
  Superop out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// c A rho B + H.c.
Superop with_hc(cplx c, const Op& a, const Op& b) {
  return c * sandwich(a, b) + std::conj(c) * sandwich(b.adjoint(), a.adjoint());
}

}  // namespace

Superop sandwich(const Op& a, const Op& b) { return kron(b.transpose(), a); }

Superop commutator_generator(const Op& h) {
  const Op id = Op::Identity();
  return cplx(0.0, -1.0) * (sandwich(h, id) - sandwich(id, h));
}

Superop lindblad(const Op& o) {
  const Op id = Op::Identity();
  const Op od_o = o.adjoint() * o;
  return 2.0 * sandwich(o, o.adjoint()) - sandwich(od_o, id) - sandwich(id, od_o);
}

Op system_hamiltonian(double delta, double omega_r) {
  return -delta * ops::number() + (0.5 * omega_r) * ops::sigma_x();
}

Superop zpl_generator(double delta, double omega_r, const GeneratorTerms& terms) {
  Superop l = commutator_generator(system_hamiltonian(delta, omega_r));
  if (terms.gamma != 0.0) l += (0.5 * terms.gamma) * lindblad(ops::sigma_minus());
  if (terms.gamma_prime != 0.0) l += (0.5 * terms.gamma_prime) * lindblad(ops::number());
  return l;
}

Superop analytic_generator(double delta, double omega_r, const RateSet& r,
                           const GeneratorTerms& terms) {
  using namespace ops;
  Superop l = zpl_generator(delta, omega_r, terms);
  const Op sp = sigma_plus(), sm = sigma_minus(), n = number(), id = identity();
  const cplx i(0.0, 1.0);

  l += (0.5 * r.gamma_sig_plus) * lindblad(sp) + (0.5 * r.gamma_sig_minus) * lindblad(sm);
  l -= r.gamma_cd * (sandwich(sp, sp) + sandwich(sm, sm));
  l -= with_hc(i * r.gamma_u, n, sp) + with_hc(i * r.gamma_u, sm, id) +
       with_hc(-i * r.gamma_u, n, sm);

  Op renormalization = Op::Zero();
  if (terms.drive_renormalization) renormalization -= r.gamma_u.imag() * sigma_y();
  if (!terms.significant_only) {
    l -= i * r.gamma_sd * (sandwich(sp, sp) - sandwich(sm, sm));
    l -= with_hc(r.gamma_g, n, sp) + with_hc(-r.gamma_g, sm, id) + with_hc(r.gamma_g, n, sm);
    l += commutator_generator(-r.delta_shift * n);
    if (terms.drive_renormalization) renormalization += r.gamma_g.imag() * sigma_x();
  }
  if (terms.drive_renormalization) l += commutator_generator(renormalization);
  return l;
}

Superop effective_generator(double delta, double omega_r, const RateSet& r,
                            const GeneratorTerms& terms) {
  using namespace ops;
  Superop l = zpl_generator(delta, omega_r, terms);
  const Op sp = sigma_plus(), sm = sigma_minus();
  l += (0.5 * r.gamma_sig_plus) * lindblad(sp) + (0.5 * r.gamma_sig_minus) * lindblad(sm);
  l -= r.gamma_cd * (sandwich(sp, sp) + sandwich(sm, sm));
  return l;
}

Superop direct_phonon_dissipator(const PhononBath& bath, double omega, double delta) {
  const double b = bath.b_avg();
  const double omega_r = b * omega;
  const double eta = std::hypot(omega_r, delta);
  const Op h = system_hamiltonian(delta, omega_r);
  // Traceless part a.sigma of H; U = cos(eta tau / 2) - i sin(eta tau / 2) (a.sigma) / |a|.
  const Op a_sigma = h - 0.5 * h.trace() * Op::Identity();
  const Op xg = (0.5 * omega) * ops::sigma_x();
  const Op xu = cplx(0.0, 0.5 * omega) * (ops::sigma_plus() - ops::sigma_minus());

  const auto table = bath.table();
  const std::size_t n = table.size();
  const double step = bath.tau_step();
  Op mg = Op::Zero(), mu = Op::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = step * static_cast<double>(k);
    const double w = ((k == 0 || k + 1 == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0)) * step / 3.0;
    const double half = 0.5 * eta * tau;
    const double sin_over_a = eta > 0.0 ? std::sin(half) / (0.5 * eta) : tau;
    const Op u = std::cos(half) * Op::Identity() - cplx(0.0, sin_over_a) * a_sigma;
    const Op ud = u.adjoint();
    const cplx gg = b * b * (std::cosh(table[k]) - 1.0);
    const cplx gu = b * b * std::sinh(table[k]);
    mg += (w * gg) * (u * xg * ud);
    mu += (w * gu) * (u * xu * ud);
  }

  const Op id = Op::Identity();
  Superop l = Superop::Zero();
  for (const auto& [x, m] : {std::pair<Op, Op>{xg, mg}, std::pair<Op, Op>{xu, mu}}) {
    l -= sandwich(x * m, id) - sandwich(m, x) + sandwich(id, m.adjoint() * x) -
         sandwich(x, m.adjoint());
  }
  return l;
}

}  // namespace polaron
