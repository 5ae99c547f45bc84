#include "cxlab/harmonic.hpp"

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cxlab {

namespace {

cplx omega_rotated(double omega, double theta) {
    return omega * std::polar(1.0, theta / 2.0);
}

void check_even_moment(int p) {
    if (p < 0 || p % 2 != 0)
        throw std::invalid_argument("moment order must be even and >= 0");
}

// nearest small-denominator rational to x, or q = 0 when none fits
void rationalize(double x, long max_den, long& num, long& den) {
    // continued fraction convergents
    long p0 = 1, q0 = 0, p1 = 0, q1 = 1;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(r);
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(x - double(p1) / double(q1)) < 1e-13) {
            num = p1; den = q1;
            return;
        }
        double frac = r - fl;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    num = 0; den = 0;
}

}  // namespace

cplx harmonic_moment_flow(int p, double t, double omega, double theta,
                          const std::map<int, cplx>& initial) {
    check_even_moment(p);
    if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
    const cplx w = omega_rotated(omega, theta);

    auto init = [&initial](int q) -> cplx {
        auto it = initial.find(q);
        if (it != initial.end()) return it->second;
        return q == 0 ? cplx(1.0) : cplx(0.0);
    };

    // m_q(t) = sum_r coeff[r] exp(-4 r w t); the source m_{q-2} only carries
    // rates strictly below 2 q w, so no resonant denominators appear.
    std::vector<cplx> coeff{init(0)};
    for (int q = 2; q <= p; q += 2) {
        std::vector<cplx> next(q / 2 + 1, cplx(0.0));
        const cplx decay = 2.0 * double(q) * w;
        for (int r = 0; r + 1 <= q / 2; ++r) {
            cplx part = double(q) * double(q - 1) * coeff[r] /
                        (decay - 4.0 * double(r) * w);
            next[r] = part;
            next[q / 2] -= part;
        }
        next[q / 2] += init(q);
        coeff = std::move(next);
    }

    cplx m = 0.0;
    for (std::size_t r = 0; r < coeff.size(); ++r)
        m += coeff[r] * std::exp(-4.0 * double(r) * w * t);
    return m;
}

cplx harmonic_equilibrium_moment(int p, double omega, double theta) {
    check_even_moment(p);
    if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
    const cplx w = omega_rotated(omega, theta);
    // (p-1)!! / (2w)^{p/2}
    cplx m = 1.0;
    for (int k = 1; k < p; k += 2) m *= double(k) / (2.0 * w);
    return m;
}

GaussianGroundState harmonic_ground_state(double omega, double theta,
                                          double A_I) {
    if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
    if (A_I < 0.0) throw std::invalid_argument("A_I must be >= 0");
    GaussianGroundState gs;
    gs.omega = omega;
    gs.theta = theta;
    gs.A_I = A_I;
    gs.alpha = 4.0 * std::asinh(std::sqrt(A_I));

    const double ch2 = std::cosh(gs.alpha / 2.0);  // = 1 + 2 A_I
    const double ch = 2.0 * ch2 * ch2 - 1.0;
    const double ct = std::cos(theta / 2.0);
    const double den = ch - std::cos(theta);
    if (den < 1e-12)
        throw DegenerateParameters(
            "ground state collapses onto the real axis (theta = 0, A_I = 0)");

    gs.A0 = 2.0 * omega * ct * (2.0 * ch2 - 1.0 - std::cos(theta)) / den;
    gs.B0 = omega * (std::sin(theta / 2.0) + std::sin(3.0 * theta / 2.0)) / den;
    gs.C0 = 2.0 * omega * ct * (2.0 * ch2 + 1.0 + std::cos(theta)) / den;
    gs.lam_plus = 2.0 * omega * ct / (ch2 + ct);
    gs.lam_minus = 2.0 * omega * ct / (ch2 - ct);
    gs.axis_angle = theta / 4.0;
    return gs;
}

double ground_state_density(const GaussianGroundState& gs, double x, double y) {
    const double det = gs.A0 * gs.C0 - gs.B0 * gs.B0;
    const double q = gs.A0 * x * x + 2.0 * gs.B0 * x * y + gs.C0 * y * y;
    return std::sqrt(det) / M_PI * std::exp(-q);
}

double generating_functional_check(double j, double omega, double theta,
                                   double A_I) {
    const GaussianGroundState gs = harmonic_ground_state(omega, theta, A_I);
    const double det = gs.A0 * gs.C0 - gs.B0 * gs.B0;
    // <z^2> from the covariance of phi0
    const cplx m2 = cplx(gs.C0 - gs.A0, -2.0 * gs.B0) / (2.0 * det);
    const cplx lhs = std::exp(j * j * m2 / 2.0);
    const cplx rhs =
        std::exp(std::polar(1.0, -theta / 2.0) * j * j / (4.0 * omega));
    return std::abs(lhs - rhs);
}

std::vector<double> spectral_norm_generating_function(double theta, int n_max,
                                                      bool* large_entries) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    const double c = std::cos(theta / 2.0);
    if (c < 1e-12)
        throw std::invalid_argument("requires cos(theta/2) > 0");
    if (large_entries) *large_entries = false;

    const double c2 = c * c;
    std::vector<double> N(n_max + 1);

    long num = 0, den = 0;
    rationalize(c2, 1024, num, den);
    if (den > 0) {
        // P_n = N_n c^{n+1/2} obeys (n+1) P_{n+1} = (2n+1) P_n - n c^2 P_{n-1}
        // with rational coefficients; run it exactly, scale at the end.
        mpq_class cq(num, den);
        cq.canonicalize();
        mpq_class pm1 = 1, p0 = 1;
        for (int n = 0; n <= n_max; ++n) {
            mpq_class pn = (n == 0) ? pm1 : p0;
            N[n] = pn.get_d() * std::pow(c, -(n + 0.5));
            if (n >= 1) {
                mpq_class p1 =
                    (mpq_class(2 * n + 1) * p0 - mpq_class(n) * cq * pm1) /
                    mpq_class(n + 1);
                pm1 = p0;
                p0 = p1;
            }
        }
    } else {
        N[0] = std::pow(c, -0.5);
        if (n_max >= 1) N[1] = std::pow(c, -1.5);
        for (int n = 1; n + 1 <= n_max; ++n)
            N[n + 1] = ((2.0 * n + 1.0) * N[n] - c * double(n) * N[n - 1]) /
                       (c * (n + 1.0));
    }

    if (large_entries)
        for (double v : N)
            if (!(v <= 1e12)) *large_entries = true;
    return N;
}

double mehler_kernel(double q, double qp, double t) {
    if (t <= 0.0) throw std::invalid_argument("t must be positive");
    const double sh = std::sinh(t);
    return std::exp(-(q * q + qp * qp) / (2.0 * std::tanh(t)) +
                    q * qp / sh) /
           std::sqrt(2.0 * M_PI * sh);
}

QuadraticResidual apply_fp_to_gaussian(cplx a, cplx b, cplx c, double omega,
                                       double theta, double A_R, double A_I) {
    const double ct = std::cos(theta / 2.0);
    const double st = std::sin(theta / 2.0);
    // dxx phi = ((2ax+2by)^2 - 2a) phi and similarly in y; the drift term
    // contributes first-degree derivatives times the rotated linear force.
    QuadraticResidual r;
    r.xx = 4.0 * (A_R * a * a + A_I * b * b) - 4.0 * omega * (ct * a + st * b);
    r.xy = 8.0 * (A_R * a * b + A_I * b * c) -
           4.0 * omega * (2.0 * ct * b + st * (c - a));
    r.yy = 4.0 * (A_R * b * b + A_I * c * c) - 4.0 * omega * (ct * c - st * b);
    r.cnst = -2.0 * (A_R * a + A_I * c) + 4.0 * omega * ct;
    return r;
}

double stationarity_residual(cplx a, cplx b, cplx c, double omega,
                             double theta, double A_R, double A_I) {
    const QuadraticResidual r =
        apply_fp_to_gaussian(a, b, c, omega, theta, A_R, A_I);
    return std::max({std::abs(r.xx), std::abs(r.xy), std::abs(r.yy),
                     std::abs(r.cnst)});
}

}  // namespace cxlab
