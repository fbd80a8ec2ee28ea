#pragma once

#include <Eigen/Dense>
#include <complex>

#include "polaron/rates.hpp"

namespace polaron {

using cplx = std::complex<double>;
using Op = Eigen::Matrix2cd;        // basis {|g>, |e>}
using Superop = Eigen::Matrix4cd;   // acts on column-major vec(rho)
using VecRho = Eigen::Vector4cd;

namespace ops {
Op sigma_plus();   // |e><g|
Op sigma_minus();  // |g><e|
Op number();       // sigma+ sigma-
Op sigma_x();
Op sigma_y();
Op identity();
}  // namespace ops

VecRho vec(const Op& rho);
Op unvec(const VecRho& v);

/// Superoperator of rho -> A rho B.
Superop sandwich(const Op& a, const Op& b);
/// -i [H, .]
Superop commutator_generator(const Op& h);
/// L[O] rho = 2 O rho O^dag - O^dag O rho - rho O^dag O.
Superop lindblad(const Op& o);

/// Coherent Hamiltonian in the rotating frame, -Delta n + (Omega_R / 2) sigma_x.
Op system_hamiltonian(double delta, double omega_r);

struct GeneratorTerms {
  double gamma = 0.0;        // radiative decay, including any Purcell enhancement
  double gamma_prime = 0.0;  // pure dephasing
  bool significant_only = false;
  bool drive_renormalization = true;
};

/// Full right-hand side of the semi-analytical master equation for the
/// instantaneous rates. With `drive_renormalization` the identity component of
/// the rotated coupling operators contributes the coherent correction
/// -i[Im(Gamma_g) sigma_x - Im(Gamma_u) sigma_y, rho].
Superop analytic_generator(double delta, double omega_r, const RateSet& rates,
                           const GeneratorTerms& terms);

/// Weak-drive effective master equation (Lindblad + cross-dephasing only).
Superop effective_generator(double delta, double omega_r, const RateSet& rates,
                            const GeneratorTerms& terms);

/// Phonon dissipator built directly from the two-time operators
/// X_m(t, tau) = U X_m U^dag, U = exp(-i H tau), integrated against
/// G_g = <B>^2 (cosh phi - 1) and G_u = <B>^2 sinh phi on the kernel grid.
Superop direct_phonon_dissipator(const PhononBath& bath, double omega, double delta);

/// Coherent part plus zero-phonon-line terms, shared by all solvers.
Superop zpl_generator(double delta, double omega_r, const GeneratorTerms& terms);

}  // namespace polaron
