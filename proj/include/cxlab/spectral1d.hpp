#pragma once
// Hermite-basis truncation of the 1D non-selfadjoint Hamiltonian
// H = -d^2/dq^2 + lambda e^{i theta} q^6 - omega^2 e^{i theta/2} q^2,
// its spectrum E_n, scale-free eigenvalue constants C_n, and the spectral
// norms N_n of the (generally skew) eigenprojections.

#include <cmath>
#include <complex>
#include <vector>

#include "cxlab/errors.hpp"

namespace cxlab {

using cplx = std::complex<double>;

struct TruncatedOperator1D {
    int N = 0;
    double omega_sq = 0.0;
    double lambda = 1.0;
    double theta = 0.0;
    double basis_frequency = 1.0;
    std::vector<cplx> entries;  // N x N, complex symmetric, band |m-n| <= 6
};

// Hermite matrix elements of H in the oscillator basis at frequency
// sqrt(omega_sq) (lambda^{1/4} when omega_sq = 0).  N >= 8 so the sextic
// band fits.
TruncatedOperator1D build_hamiltonian_matrix(double omega_sq, double lambda,
                                             double theta, int N);

// Fokker-Planck specialization of the quartic action, omega^2 = 3 sqrt(lambda).
inline TruncatedOperator1D fp_hamiltonian_1d(double lambda, double theta,
                                             int N) {
    return build_hamiltonian_matrix(3.0 * std::sqrt(lambda), lambda, theta, N);
}

struct SpectralDecomposition1D {
    int N = 0;
    double lambda = 1.0;
    double theta = 0.0;
    std::vector<cplx> eigenvalues;  // ascending |E|, ties by ascending arg
    std::vector<std::vector<cplx>> eigenvectors;  // unit 2-norm columns
    std::vector<double> C_n;    // |E_n| lambda^{-1/4}
    std::vector<double> norms;  // N_n = 1/|sum_j v_j^2|
    // eigenpair stable against the N-50 truncation: eigenvalue within 1e-5
    // relative (floored at the first excited level) and norm within 1e-3
    std::vector<bool> reliable;
};

SpectralDecomposition1D eigen_decompose_1d(const TruncatedOperator1D& op,
                                           bool with_reliability = true);

// N_n for unit-2-norm eigenvectors; infinite norm cannot occur at finite N
// but values blow up as theta -> pi.
std::vector<double> spectral_norms(
    const std::vector<std::vector<cplx>>& unit_eigenvectors);

// closed form for the ground state, (cos(theta/2))^{-1/4}; theta in [0, pi)
double ground_state_norm_exact(double theta);

// semiclassical level C^6 n^{3/2} lambda^{1/4}, C = (sqrt(pi) Gamma(5/3) /
// Gamma(7/6))^{1/4}
double wkb_energy(int n, double lambda);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms about the line
};

// least squares line through (n, ln N_n) over reliable n >= n_min; throws
// InsufficientData below 10 usable points
LineFit norm_growth_fit(const std::vector<double>& norms,
                        const std::vector<bool>& reliable, int n_min);

}  // namespace cxlab
