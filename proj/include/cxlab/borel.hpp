#pragma once
// Borel-summed moments: b_p(s) = sum c_{p,n} (-4a)^{(n-p/2)/2} (2s)^n / n!^2,
// evaluated in 384-bit arithmetic (partial sums traverse a ~2^260 hump before
// cancelling to O(1)), and the phase-rotated Laplace representation
//   M_p(t) = e^{-i(theta/4)(1+p/2)} t^{-1} Int_0^inf ds e^{-s/(t e^{i theta/4})} b_p(s).
// The integral is truncated at s_max with the tail completed by freezing
// b(s) = b(s_max), which is what makes the t -> inf limit land on the
// equilibrium moment instead of undershooting it.

#include <complex>
#include <vector>

#include <cxlab/moments.hpp>

namespace cxlab {

struct BorelTable {
    int p = 0;
    double alpha = 0.5;
    int N_terms = 500;
    double s_max = 11.0;
    double step = 1e-3;
    std::vector<double> s_grid, b_values;
    bool truncation_unstable = false;  // N vs N/2 partial sums differ > 1e-8 somewhere
    double max_rel_delta = 0.0;
};

// truncation-stability window scales with the coupling; equals 11 at alpha = 1/2
double default_s_max(double alpha);

// single point; *rel_delta (optional) receives the N vs N/2 relative disagreement
double borel_sum(const SeriesTable& T, int p, double s, int N_terms, double alpha,
                 double* rel_delta = nullptr);

// uniform grid on [0, s_max] with an even interval count; s_max < 0 picks the default
BorelTable tabulate_borel_sum(const SeriesTable& T, int p, double alpha,
                              int N_terms = 500, double s_max = -1.0, double step = 1e-3);

struct TransformResult {
    cplx M;
    bool tail_warning = false;   // end-point integrand > 1e-8 of the integral
    double tail_fraction = 0.0;
};

// composite Simpson for t >= 0.05; below that the exponential weight is folded
// analytically into each panel against a linear interpolant of b
TransformResult borel_transform_from_table(const BorelTable& bt, double t, double theta);

// convenience wrapper: tabulates at alpha = sqrt(lambda)/2, then transforms
cplx borel_transform(const SeriesTable& T, int p, double t, double theta, double lambda,
                     int N_terms = 500, double s_max = -1.0, double step = 1e-3);

// |M_p(t; a) - a^{-p/4} M_p(sqrt(a) t; a=1)| at theta = 0, both sides computed
// from their own tabulations
double scaling_check(const SeriesTable& T, int p, double t, double lambda,
                     int N_terms = 500, double step = 1e-3);

// m4 = (2 - m2')/(8a), m6 = (12 m2 - m4')/(16a), m8 = (30 m4 - m6')/(24a)
// by central differences on a uniform grid; entries whose stencil leaves the
// grid are NaN.  Each differentiation is cross-checked against the
// double-spacing stencil; disagreement beyond rel_tol raises GridTooCoarse.
struct DerivedMoments {
    std::vector<cplx> m4, m6, m8;
};
DerivedMoments derived_higher_moments(const std::vector<double>& t_grid,
                                      const std::vector<cplx>& m2, cplx alpha,
                                      double rel_tol = 1e-3);

}  // namespace cxlab
