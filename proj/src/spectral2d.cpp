#include "cxlab/spectral2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "cxlab/linalg.hpp"

namespace cxlab {

namespace {

// cubic-drift matrix elements between two-oscillator Hermite states.
// X collects the terms even under y-reflection, Y the odd ones; the full
// element mixes them with cos(theta/2), sin(theta/2) weights.

double elem_X(int k, int l, int m, int n) {
    double v = 0.0;
    if (l == n) {
        // factorial ratios written as products, k runs past 100
        if (k == m + 4)
            v += std::sqrt(double(m + 1) * (m + 2) * (m + 3) * (m + 4));
        if (k == m + 2) v += 2.0 * (k - 2) * std::sqrt(double(k) * (k - 1));
        if (m == k + 4)
            v -= std::sqrt(double(k + 1) * (k + 2) * (k + 3) * (k + 4));
        if (m == k + 2) v -= 2.0 * (m - 2) * std::sqrt(double(m) * (m - 1));
        if (k == m + 2) v += 6.0 * std::sqrt(double(k) * (k - 1));
        if (k == m) v += 6.0 * k + 3.0;
    }
    double t1 = 0.0;
    if (l + 2 == n)
        t1 = std::sqrt(double(l + 2) * (l + 1));
    else if (l - 2 == n)
        t1 = std::sqrt(double(l) * (l - 1));
    else if (l == n)
        t1 = 2.0 * l + 1.0;
    if (t1 != 0.0) {
        double t2 = 0.0;
        if (k == m + 2)
            t2 = std::sqrt(double(m + 2) * (m + 1));
        else if (k == m - 2)
            t2 = -std::sqrt(double(m) * (m - 1));
        else if (k == m)
            t2 = 1.0;
        v -= 3.0 * t1 * t2;
    }
    return v;
}

double elem_Y(int k, int l, int m, int n) {
    double v = 0.0;
    double t1 = 0.0;
    if (l - 1 == n)
        t1 = std::sqrt(double(l));
    else if (l + 1 == n)
        t1 = -std::sqrt(double(l + 1));
    if (t1 != 0.0) {
        double t2 = 0.0;
        if (m + 3 == k)
            t2 = std::sqrt(double(m + 3) * (m + 2) * (m + 1));
        else if (m + 1 == k)
            t2 = 3.0 * std::sqrt(double(m + 1)) * (m + 1);
        else if (m - 1 == k)
            t2 = 3.0 * std::sqrt(double(m)) * m;
        else if (m - 3 == k)
            t2 = std::sqrt(double(m) * (m - 1) * (m - 2));
        v += t1 * t2;
    }
    double t3 = 0.0;
    if (k - 1 == m)
        t3 = std::sqrt(double(k));
    else if (k + 1 == m)
        t3 = std::sqrt(double(k + 1));
    if (t3 != 0.0) {
        double t4 = 0.0;
        if (l == n + 3)
            t4 = std::sqrt(double(n + 3) * (n + 2) * (n + 1));
        else if (l == n + 1)
            t4 = std::sqrt(double(n + 1)) * (n + 3);
        else if (l == n - 1)
            t4 = -std::sqrt(double(n)) * (n - 2);
        else if (l == n - 3)
            t4 = -std::sqrt(double(n) * (n - 1) * (n - 2));
        v -= 3.0 * t3 * t4;
    }
    return v;
}

// -(2/omega) <kl|P|mn>; vanishes outside |k-m| <= 4, |l-n| <= 4
double stored_element(int k, int l, int m, int n, double c, double s,
                      double AR, double AI) {
    double v = 0.0;
    if (k == m && l == n)
        v += (AR - 2.0 * c) * (2.0 * k + 1.0) + (AI + 2.0 * c) * (2.0 * l + 1.0);
    if (l == n) {
        if (k == m + 2) v -= (AR + 2.0 * c) * std::sqrt(double(k) * (k - 1));
        if (m == k + 2) v -= (AR + 2.0 * c) * std::sqrt(double(m) * (m - 1));
    }
    if (k == m) {
        if (l == n + 2) v += (2.0 * c - AI) * std::sqrt(double(l) * (l - 1));
        if (n == l + 2) v += (2.0 * c - AI) * std::sqrt(double(n) * (n - 1));
    }
    const double tx = (k - 1 == m ? std::sqrt(double(k)) : 0.0) +
                      (m - 1 == k ? std::sqrt(double(m)) : 0.0);
    const double ty = (l - 1 == n ? std::sqrt(double(l)) : 0.0) +
                      (n - 1 == l ? std::sqrt(double(n)) : 0.0);
    v += 4.0 * s * tx * ty;
    v += (c / 6.0) * (elem_X(k, l, m, n) - elem_X(l, k, n, m));
    v += (s / 6.0) * (elem_Y(k, l, m, n) + elem_Y(l, k, n, m));
    return v;
}

TruncatedOperator2D build_core(double lambda, double theta, double A_I, int N,
                               bool transposed) {
    if (N < 6) throw std::invalid_argument("need N >= 6 for the band width");
    if (!(lambda > 0.0)) throw std::invalid_argument("coupling must be positive");
    if (A_I < 0.0)
        throw std::invalid_argument("imaginary-noise amplitude must be >= 0");
    TruncatedOperator2D op;
    op.N = N;
    op.lambda = lambda;
    op.theta = theta;
    op.A_I = A_I;
    op.omega = std::sqrt(6.0) * std::pow(lambda, 0.25);
    op.transposed = transposed;
    const std::size_t dim = std::size_t(N) * N;
    op.entries.assign(dim * dim, 0.0);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const double AR = A_I + 1.0;
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
            const std::size_t j = std::size_t(m) * N + n;
            for (int k = std::max(0, m - 4); k < std::min(N, m + 5); ++k)
                for (int l = std::max(0, n - 4); l < std::min(N, n + 5); ++l) {
                    const std::size_t i = std::size_t(k) * N + l;
                    op.entries[i + j * dim] =
                        transposed ? stored_element(m, n, k, l, c, s, AR, A_I)
                                   : stored_element(k, l, m, n, c, s, AR, A_I);
                }
        }
    return op;
}

double trapezoid_weight(int idx, int npts, double h) {
    return (idx == 0 || idx == npts - 1) ? h / 2.0 : h;
}

}  // namespace

TruncatedOperator2D build_fp_matrix(double lambda, double theta, double A_I,
                                    int N) {
    return build_core(lambda, theta, A_I, N, false);
}

TruncatedOperator2D build_fp_transpose_matrix(double lambda, double theta,
                                              double A_I, int N) {
    return build_core(lambda, theta, A_I, N, true);
}

void apply_stored_operator(const TruncatedOperator2D& op,
                           const std::vector<double>& v,
                           std::vector<double>& out) {
    const int N = op.N;
    const std::size_t dim = std::size_t(N) * N;
    if (v.size() != dim)
        throw std::invalid_argument("vector length does not match truncation");
    out.assign(dim, 0.0);
    const double c = std::cos(op.theta / 2.0), s = std::sin(op.theta / 2.0);
    const double AR = op.A_I + 1.0, AI = op.A_I;
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
            double acc = 0.0;
            for (int m = std::max(0, k - 4); m < std::min(N, k + 5); ++m)
                for (int n = std::max(0, l - 4); n < std::min(N, l + 5); ++n) {
                    const double e =
                        op.transposed ? stored_element(m, n, k, l, c, s, AR, AI)
                                      : stored_element(k, l, m, n, c, s, AR, AI);
                    acc += e * v[std::size_t(m) * N + n];
                }
            out[std::size_t(k) * N + l] = acc;
        }
}

std::vector<cplx> spectrum_2d(const TruncatedOperator2D& op, int n_low) {
    const std::size_t dim = std::size_t(op.N) * op.N;
    if (n_low < 1 || std::size_t(n_low) > dim)
        throw std::invalid_argument("n_low out of range");
    std::vector<double> a = op.entries;
    std::vector<double> wr, wi, vr;
    eig_real(a, int(dim), wr, wi, vr, false);
    std::vector<cplx> e(dim);
    for (std::size_t i = 0; i < dim; ++i)
        e[i] = 0.5 * op.omega * cplx(wr[i], wi[i]);
    // ascending modulus; arg breaks conjugate-pair ties, -Im member first
    std::sort(e.begin(), e.end(), [](const cplx& x, const cplx& y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax < ay;
        return std::arg(x) < std::arg(y);
    });
    e.resize(n_low);
    return e;
}

GroundState2D ground_state_vector(TruncatedOperator2D&& op, double shift) {
    const int N = op.N;
    const std::size_t dim = std::size_t(N) * N;
    if (op.entries.size() != dim * dim)
        throw std::invalid_argument("operator entries missing");
    GroundState2D gs;
    gs.N = N;
    gs.lambda = op.lambda;
    gs.theta = op.theta;
    gs.A_I = op.A_I;
    gs.omega = op.omega;

    // factor in place: the shifted matrix is the only full-size buffer
    std::vector<double> a = std::move(op.entries);
    for (std::size_t d = 0; d < dim; ++d) a[d + d * dim] -= shift;
    std::vector<lapack_int> ipiv(dim);
    lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, lapack_int(dim),
                                     lapack_int(dim), a.data(),
                                     lapack_int(dim), ipiv.data());
    if (info > 0)
        throw DegenerateParameters(
            "shift coincides with an eigenvalue of the truncated operator");
    if (info < 0) throw std::runtime_error("dgetrf: bad argument");

    std::vector<double> v(dim, 0.0), pv;
    v[0] = 1.0;
    double mu = 0.0, res = 0.0, prev_res = -1.0, rate = 0.0;
    bool done = false;
    int it = 0;
    for (it = 1; it <= 200; ++it) {
        info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', lapack_int(dim), 1,
                              a.data(), lapack_int(dim), ipiv.data(), v.data(),
                              lapack_int(dim));
        if (info != 0) throw std::runtime_error("dgetrs failed");
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) throw ConvergenceFailure("iterate collapsed to zero");
        for (double& x : v) x /= nrm;
        // residual against the matrix-free operator (entries hold LU now)
        apply_stored_operator(op, v, pv);
        mu = 0.0;
        for (std::size_t d = 0; d < dim; ++d) mu += v[d] * pv[d];
        res = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double r = pv[d] - mu * v[d];
            res += r * r;
        }
        res = std::sqrt(res);
        if (prev_res > 0.0) rate = res / prev_res;
        prev_res = res;
        if (res < 1e-10) {
            done = true;
            break;
        }
    }
    if (!done)
        throw ConvergenceFailure("inverse iteration did not reach 1e-10");
    if (v[0] < 0.0)
        for (double& x : v) x = -x;
    gs.v = std::move(v);
    gs.E0 = cplx(0.5 * gs.omega * mu, 0.0);
    gs.residual = res;
    gs.iterations = it;
    gs.shift_warning = rate > 0.5;  // shift poorly separated from next mode
    return gs;
}

void ground_state_function(GroundState2D& gs, double half_width, int npts) {
    const int N = gs.N;
    if (npts < 5 || npts % 2 == 0)
        throw std::invalid_argument("npts must be odd and >= 5");
    if (gs.v.size() != std::size_t(N) * N)
        throw std::logic_error("ground-state vector missing");
    const double L =
        half_width > 0.0 ? half_width : 3.5 * std::pow(gs.lambda, -0.125);
    gs.xs.resize(npts);
    const double h = 2.0 * L / (npts - 1);
    for (int i = 0; i < npts; ++i) gs.xs[i] = -L + h * i;

    // psi[n][a] = psi_n(sqrt(omega) x_a), normalized oscillator functions
    std::vector<double> psi(std::size_t(N) * npts);
    const double sq_om = std::sqrt(gs.omega);
    const double c0 = std::pow(M_PI, -0.25);
    for (int a = 0; a < npts; ++a) {
        const double u = sq_om * gs.xs[a];
        const double g = c0 * std::exp(-u * u / 2.0);
        psi[a] = g;
        if (N > 1) psi[npts + a] = std::sqrt(2.0) * u * g;
        for (int n = 2; n < N; ++n)
            psi[std::size_t(n) * npts + a] =
                std::sqrt(2.0 / n) * u * psi[std::size_t(n - 1) * npts + a] -
                std::sqrt((n - 1.0) / n) * psi[std::size_t(n - 2) * npts + a];
    }

    // F = psi^T V psi through the intermediate G = V psi
    std::vector<double> G(std::size_t(N) * npts, 0.0);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
            const double vkl = gs.v[std::size_t(k) * N + l];
            if (vkl == 0.0) continue;
            const double* pl = &psi[std::size_t(l) * npts];
            double* gk = &G[std::size_t(k) * npts];
            for (int b = 0; b < npts; ++b) gk[b] += vkl * pl[b];
        }
    gs.phi.assign(std::size_t(npts) * npts, 0.0);
    for (int k = 0; k < N; ++k) {
        const double* pk = &psi[std::size_t(k) * npts];
        const double* gk = &G[std::size_t(k) * npts];
        for (int a = 0; a < npts; ++a) {
            const double w = pk[a];
            if (w == 0.0) continue;
            double* row = &gs.phi[std::size_t(a) * npts];
            for (int b = 0; b < npts; ++b) row[b] += w * gk[b];
        }
    }

    gs.min_value = gs.phi[0];
    gs.peak_value = gs.phi[0];
    int pa = 0, pb = 0;
    for (int a = 0; a < npts; ++a)
        for (int b = 0; b < npts; ++b) {
            const double f = gs.phi[std::size_t(a) * npts + b];
            if (f < gs.min_value) gs.min_value = f;
            if (f > gs.peak_value) {
                gs.peak_value = f;
                pa = a;
                pb = b;
            }
        }
    gs.peak_x = gs.xs[pa];
    gs.peak_y = gs.xs[pb];

    double nrm = 0.0, edge = 0.0;
    for (int a = 0; a < npts; ++a) {
        const double wa = trapezoid_weight(a, npts, h);
        for (int b = 0; b < npts; ++b) {
            const double f = gs.phi[std::size_t(a) * npts + b];
            nrm += wa * trapezoid_weight(b, npts, h) * f * f;
            if (a == 0 || a == npts - 1 || b == 0 || b == npts - 1)
                edge = std::max(edge, std::abs(f));
        }
    }
    gs.normalization_check = gs.omega * nrm;
    gs.boundary_warning = edge > 1e-6 * gs.peak_value;
}

cplx ground_state_moment(const GroundState2D& gs, int p, double* grid_error) {
    if (p < 0) throw std::invalid_argument("moment order must be >= 0");
    if (p % 2 == 1)
        throw std::invalid_argument("odd moments vanish by parity");
    const int npts = int(gs.xs.size());
    if (npts == 0 || gs.phi.size() != std::size_t(npts) * npts)
        throw std::logic_error("grid not built, call ground_state_function");
    const double h = gs.xs[1] - gs.xs[0];

    auto integrate = [&](int stride, cplx& mom_out) {
        const int np = (npts - 1) / stride + 1;
        const double hh = h * stride;
        double mass = 0.0, amass = 0.0, ring = 0.0;
        cplx mom = 0.0;
        for (int a = 0; a < np; ++a) {
            const double x = gs.xs[std::size_t(a) * stride];
            const double wa = trapezoid_weight(a, np, hh);
            for (int b = 0; b < np; ++b) {
                const double y = gs.xs[std::size_t(b) * stride];
                const double w = wa * trapezoid_weight(b, np, hh);
                const double f =
                    gs.phi[std::size_t(a) * stride * npts + std::size_t(b) * stride];
                mass += w * f;
                amass += w * std::abs(f);
                if (a == 0 || a == np - 1 || b == 0 || b == np - 1)
                    ring += w * std::abs(f);
                mom += w * f * std::pow(cplx(x, y), p);
            }
        }
        if (ring > 1e-4 * amass)
            throw ExcessBoundaryMass(
                "boundary ring carries > 1e-4 of the density mass");
        mom_out = mom / mass;
        return mass;
    };

    cplx mom_fine;
    integrate(1, mom_fine);
    if (grid_error != nullptr) {
        cplx mom_coarse;
        integrate(2, mom_coarse);
        *grid_error = std::abs(mom_fine - mom_coarse);
    }
    return mom_fine;
}

}  // namespace cxlab
