#pragma once
// Two-oscillator Hermite truncation of the planar Fokker-Planck operator for
// the quartic action: spectrum of -P, zero-mode extraction by inverse
// iteration, grid reconstruction of the ground state and its holomorphic
// moments.

#include <complex>
#include <vector>

#include "cxlab/errors.hpp"

namespace cxlab {

using cplx = std::complex<double>;

// Stored entries are -(2/omega) <kl|P|mn> at basis frequency
// omega = sqrt(6) lambda^{1/4}; in these units the matrix carries no lambda
// dependence at all.  Row index i = k N + l, column-major layout.
struct TruncatedOperator2D {
    int N = 0;
    double lambda = 1.0, theta = 0.0, A_I = 0.0;
    double omega = 0.0;
    bool transposed = false;
    std::vector<double> entries;  // N^2 x N^2 real, band |dk|,|dl| <= 4
};

TruncatedOperator2D build_fp_matrix(double lambda, double theta, double A_I,
                                    int N);

// <kl|P^T|mn> = <mn|P|kl>, assembled directly; agrees with the elementwise
// transpose of build_fp_matrix bitwise.
TruncatedOperator2D build_fp_transpose_matrix(double lambda, double theta,
                                              double A_I, int N);

// matrix-free action of the stored operator, used for residuals after the
// entries have been overwritten by an LU factorization
void apply_stored_operator(const TruncatedOperator2D& op,
                           const std::vector<double>& v,
                           std::vector<double>& out);

// lowest n_low eigenvalues of -P in physical units ((omega/2) x stored),
// ascending modulus, conjugate pairs adjacent
std::vector<cplx> spectrum_2d(const TruncatedOperator2D& op, int n_low);

struct GroundState2D {
    int N = 0;
    double lambda = 1.0, theta = 0.0, A_I = 0.0, omega = 0.0;
    std::vector<double> v;  // unit norm, (0,0) component positive
    cplx E0;                // Rayleigh estimate, physical units
    double residual = 0.0;  // |(M - mu) v| in stored units
    int iterations = 0;
    bool shift_warning = false;  // slow contraction: shift not well separated

    // grid payload, filled by ground_state_function
    std::vector<double> xs;
    std::vector<double> phi;  // phi[ix * npts + iy]
    double min_value = 0.0, peak_value = 0.0;
    double peak_x = 0.0, peak_y = 0.0;
    double normalization_check = 0.0;  // omega int phi^2, exactly 1 in theory
    bool boundary_warning = false;     // boundary |phi| above 1e-6 of peak
};

// Inverse iteration at the given shift (stored units) until the Rayleigh
// residual drops below 1e-10.  Consumes the operator: entries become the LU
// factors, so a 140^2 x 140^2 run stays inside one 3 GB buffer.
GroundState2D ground_state_vector(TruncatedOperator2D&& op,
                                  double shift = 1e-3);

// phi0 on a symmetric square grid; half_width <= 0 selects the default
// 3.5 lambda^{-1/8}.  npts must be odd so grid-refinement estimates can
// subsample every other point.
void ground_state_function(GroundState2D& gs, double half_width = 0.0,
                           int npts = 141);

// <z^p> over the reconstructed density, trapezoid quadrature; grid_error
// receives the change under 2x coarsening when non-null.  Throws
// ExcessBoundaryMass when the boundary ring carries > 1e-4 of the |phi|
// mass and std::invalid_argument for odd p (odd moments vanish by parity).
cplx ground_state_moment(const GroundState2D& gs, int p,
                         double* grid_error = nullptr);

}  // namespace cxlab
