#pragma once
// Quadratic-action reference results: closed-form moment flow, the Gaussian
// stationary state of the 2D Fokker-Planck operator, spectral norm
// constants, and the oscillator heat kernel.

#include <complex>
#include <map>
#include <vector>

#include "cxlab/errors.hpp"

namespace cxlab {

using cplx = std::complex<double>;

// Stationary state of P = A_R dxx + A_I dyy + div(drift .) for the
// quadratic action, phi0(x,y) = exp(-(A0 x^2 + 2 B0 xy + C0 y^2)).
// The quadratic form [[A0,B0],[B0,C0]] has eigenvalues lam_plus < lam_minus
// on principal axes rotated by axis_angle (= theta/4) from the x axis.
struct GaussianGroundState {
    double omega = 1.0;
    double theta = 0.0;
    double A_I = 0.0;
    double alpha = 0.0;  // noise split parameter, A_I = sinh^2(alpha/4)
    double A0 = 0.0, B0 = 0.0, C0 = 0.0;
    double lam_plus = 0.0, lam_minus = 0.0;
    double axis_angle = 0.0;
};

// <z^p(t)> for S = omega e^{i theta/2} z^2, evolved from the moments given
// in `initial` (even p only; absent entries default to m_0 = 1, m_p = 0).
// Exact: the moment ODEs close downward and integrate to sums of
// exponentials exp(-2 k omega e^{i theta/2} t).
cplx harmonic_moment_flow(int p, double t, double omega, double theta,
                          const std::map<int, cplx>& initial = {});

// Long-time limit of the flow, p!/((p/2)!) (4 omega e^{i theta/2})^{-p/2}.
cplx harmonic_equilibrium_moment(int p, double omega, double theta);

// Builds the stationary Gaussian for given noise split.  Throws
// DegenerateParameters when theta = 0 with A_I = 0 (the state collapses
// onto the real axis and the closed forms divide by zero).
GaussianGroundState harmonic_ground_state(double omega, double theta,
                                          double A_I);

// phi0 normalized to unit mass over the plane.
double ground_state_density(const GaussianGroundState& gs, double x, double y);

// |<e^{jz}>_{phi0} - exp(e^{-i theta/2} j^2 / (4 omega))|, the left side
// evaluated analytically from (A0, B0, C0).  Vanishes to rounding for any
// admissible noise split; a nonzero value flags a broken ground state.
double generating_functional_check(double j, double omega, double theta,
                                   double A_I);

// Coefficients N_n of u^n in (c - 2u + c u^2)^{-1/2}, c = cos(theta/2).
// These grow like exp(gamma n); entries above 1e12 set *large_entries as a
// loss-of-accuracy hint for downstream consumers.  Uses exact rational
// arithmetic in c^2 whenever c^2 is (close to) a small rational, which
// covers theta a simple rational multiple of pi.
std::vector<double> spectral_norm_generating_function(
    double theta, int n_max, bool* large_entries = nullptr);

// Oscillator heat kernel exp(-t H) for H = (q^2 - d^2/dq^2)/2 - 1/2 shifted
// so the ground state decays at rate 1/2.
double mehler_kernel(double q, double qp, double t);

// P phi / phi for phi = exp(-(a x^2 + 2 b xy + c y^2)) with the quadratic
// action drift; the result is the quadratic polynomial with these
// coefficients.  All four vanish iff phi is stationary.
struct QuadraticResidual {
    cplx xx, xy, yy, cnst;
};
QuadraticResidual apply_fp_to_gaussian(cplx a, cplx b, cplx c, double omega,
                                       double theta, double A_R, double A_I);

// max-norm of the four residual coefficients above.
double stationarity_residual(cplx a, cplx b, cplx c, double omega,
                             double theta, double A_R, double A_I);

}  // namespace cxlab
