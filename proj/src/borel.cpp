#include <cxlab/borel.hpp>

#include <mpfr.h>

#include <cmath>
#include <limits>

namespace cxlab {

namespace {

constexpr mpfr_prec_t kPrec = 384;

struct MpReal {
    mpfr_t v;
    MpReal() { mpfr_init2(v, kPrec); }
    MpReal(const MpReal&) = delete;
    MpReal& operator=(const MpReal&) = delete;
    MpReal(MpReal&& o) noexcept {
        mpfr_init2(v, kPrec);
        mpfr_swap(v, o.v);
    }
    ~MpReal() { mpfr_clear(v); }
};

// per-(p, alpha, N) state: leading coefficient and the exact step factors
// term_{j+1}/term_j = -16 a s^2 c_{p,n+2} / (c_{p,n} (n+1)^2 (n+2)^2)
struct BorelEvaluator {
    int p, N;
    mpz_class c0, fact2;
    std::vector<MpReal> F;

    BorelEvaluator(const SeriesTable& T, int p_, int N_, double alpha) : p(p_), N(N_) {
        if (p < 2 || p % 2) throw std::invalid_argument("borel_sum: p must be even and >= 2");
        if (N < 1) throw std::invalid_argument("borel_sum: need at least one term");
        if (!T.has(p, p / 2 + 2 * (N - 1)))
            throw std::invalid_argument("borel_sum: series table too shallow for N terms");
        c0 = T.at(p, p / 2);
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), p / 2);
        fact2 = f * f;
        F.reserve(N - 1);
        for (int j = 0; j + 1 < N; ++j) {
            long n = p / 2 + 2 * j;
            mpz_class den = T.at(p, n) * (mpz_class((n + 1) * (n + 2)) * ((n + 1) * (n + 2)));
            mpq_class q(T.at(p, n + 2), den);
            q.canonicalize();
            F.emplace_back();
            mpfr_set_q(F.back().v, q.get_mpq_t(), MPFR_RNDN);
            mpfr_mul_d(F.back().v, F.back().v, -16.0 * alpha, MPFR_RNDN);
        }
    }

    double eval(double s, double* rel_delta) const {
        MpReal term, acc, s2, tmp, half;
        mpfr_set_d(s2.v, s, MPFR_RNDN);
        mpfr_sqr(s2.v, s2.v, MPFR_RNDN);
        mpfr_set_z(term.v, c0.get_mpz_t(), MPFR_RNDN);
        mpfr_set_d(tmp.v, 2.0 * s, MPFR_RNDN);
        mpfr_pow_ui(tmp.v, tmp.v, p / 2, MPFR_RNDN);
        mpfr_mul(term.v, term.v, tmp.v, MPFR_RNDN);
        mpfr_div_z(term.v, term.v, fact2.get_mpz_t(), MPFR_RNDN);
        mpfr_set(acc.v, term.v, MPFR_RNDN);
        mpfr_set_ui(half.v, 0, MPFR_RNDN);
        int nhalf = N / 2;
        if (nhalf == 1) mpfr_set(half.v, acc.v, MPFR_RNDN);
        for (int j = 1; j < N; ++j) {
            mpfr_mul(term.v, term.v, F[j - 1].v, MPFR_RNDN);
            mpfr_mul(term.v, term.v, s2.v, MPFR_RNDN);
            mpfr_add(acc.v, acc.v, term.v, MPFR_RNDN);
            if (j + 1 == nhalf) mpfr_set(half.v, acc.v, MPFR_RNDN);
        }
        if (rel_delta) {
            mpfr_sub(tmp.v, acc.v, half.v, MPFR_RNDN);
            double num = std::abs(mpfr_get_d(tmp.v, MPFR_RNDN));
            double den = std::abs(mpfr_get_d(acc.v, MPFR_RNDN));
            *rel_delta = (den > 0 || num > 0) ? num / std::max(den, 1e-300) : 0.0;
        }
        return mpfr_get_d(acc.v, MPFR_RNDN);
    }
};

}  // namespace

double default_s_max(double alpha) { return 11.0 / std::sqrt(2.0 * alpha); }

double borel_sum(const SeriesTable& T, int p, double s, int N_terms, double alpha,
                 double* rel_delta) {
    if (p == 0) {
        if (rel_delta) *rel_delta = 0.0;
        return 1.0;
    }
    if (!(s >= 0)) throw std::invalid_argument("borel_sum: s must be >= 0");
    return BorelEvaluator(T, p, N_terms, alpha).eval(s, rel_delta);
}

BorelTable tabulate_borel_sum(const SeriesTable& T, int p, double alpha, int N_terms,
                              double s_max, double step) {
    if (p < 0 || p % 2) throw std::invalid_argument("tabulate_borel_sum: p must be even and >= 0");
    if (!(alpha > 0) || !(step > 0)) throw std::invalid_argument("tabulate_borel_sum: bad alpha or step");
    if (s_max <= 0) s_max = default_s_max(alpha);
    BorelTable bt;
    bt.p = p;
    bt.alpha = alpha;
    bt.N_terms = N_terms;
    bt.step = step;
    long J = std::llround(s_max / step);
    if (J < 2) J = 2;
    if (J % 2) ++J;   // Simpson wants an even interval count
    bt.s_max = J * step;
    bt.s_grid.resize(J + 1);
    bt.b_values.resize(J + 1);
    for (long j = 0; j <= J; ++j) bt.s_grid[j] = j * step;
    if (p == 0) {
        for (long j = 0; j <= J; ++j) bt.b_values[j] = 1.0;
        return bt;
    }
    BorelEvaluator ev(T, p, N_terms, alpha);
    for (long j = 0; j <= J; ++j) {
        double rd = 0;
        bt.b_values[j] = ev.eval(bt.s_grid[j], &rd);
        if (rd > bt.max_rel_delta) bt.max_rel_delta = rd;
    }
    bt.truncation_unstable = bt.max_rel_delta > 1e-8;
    return bt;
}

TransformResult borel_transform_from_table(const BorelTable& bt, double t, double theta) {
    if (!(t > 0)) throw std::invalid_argument("borel_transform: t must be > 0");
    const auto& s = bt.s_grid;
    const auto& b = bt.b_values;
    long J = (long)s.size() - 1;
    cplx tau = t * std::polar(1.0, theta / 4.0);
    cplx itau = 1.0 / tau;
    double h = bt.step;
    cplx I = 0;
    if (t >= 0.05) {
        cplx acc = 0;
        for (long k = 0; k <= J; ++k) {
            double w = (k == 0 || k == J) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += w * std::exp(-s[k] * itau) * b[k];
        }
        I = acc * (h / 3.0);
    } else {
        // panel-exact weight against a linear interpolant of b
        cplx E = std::exp(-h * itau);
        cplx c1 = tau * (1.0 - E);
        cplx c2 = tau * tau / h * (1.0 - E * (1.0 + h * itau));
        for (long k = 0; k < J; ++k) {
            cplx w0 = std::exp(-s[k] * itau);
            if (std::abs(w0) < 1e-300) break;
            I += w0 * (b[k] * c1 + (b[k + 1] - b[k]) * c2);
        }
    }
    cplx endpoint = std::exp(-bt.s_max * itau) * b[J];
    TransformResult r;
    r.M = std::polar(1.0, -(theta / 4.0) * (1.0 + bt.p / 2.0)) / t * (I + tau * endpoint);
    double num = std::abs(endpoint), den = std::abs(I);
    r.tail_fraction = den > 0 ? num / den : (num > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.tail_warning = r.tail_fraction > 1e-8;
    return r;
}

cplx borel_transform(const SeriesTable& T, int p, double t, double theta, double lambda,
                     int N_terms, double s_max, double step) {
    double alpha = std::sqrt(lambda) / 2.0;
    BorelTable bt = tabulate_borel_sum(T, p, alpha, N_terms, s_max, step);
    return borel_transform_from_table(bt, t, theta).M;
}

double scaling_check(const SeriesTable& T, int p, double t, double lambda, int N_terms,
                     double step) {
    double alpha = std::sqrt(lambda) / 2.0;
    BorelTable A = tabulate_borel_sum(T, p, alpha, N_terms, -1.0, step);
    BorelTable B = tabulate_borel_sum(T, p, 1.0, N_terms, -1.0, step);
    cplx Ma = borel_transform_from_table(A, t, 0.0).M;
    cplx Mb = borel_transform_from_table(B, std::sqrt(alpha) * t, 0.0).M;
    return std::abs(Ma - std::pow(alpha, -p / 4.0) * Mb);
}

namespace {

// central differences with a double-spacing consistency check
std::vector<cplx> differentiate_checked(const std::vector<double>& t,
                                        const std::vector<cplx>& f, double rel_tol,
                                        const char* stage) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    size_t n = f.size();
    std::vector<cplx> d(n, cplx(nan, nan));
    double h = t[1] - t[0];
    auto ok = [&](size_t i) { return !std::isnan(f[i].real()); };
    for (size_t i = 1; i + 1 < n; ++i) {
        if (!ok(i - 1) || !ok(i + 1)) continue;
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        if (i >= 2 && i + 2 < n && ok(i - 2) && ok(i + 2)) {
            cplx d2 = (f[i + 2] - f[i - 2]) / (4.0 * h);
            if (std::abs(d[i] - d2) > rel_tol * std::max(1.0, std::abs(d[i])))
                throw GridTooCoarse(std::string("derived moments: unstable derivative of ") + stage);
        }
    }
    return d;
}

}  // namespace

DerivedMoments derived_higher_moments(const std::vector<double>& t_grid,
                                      const std::vector<cplx>& m2, cplx alpha,
                                      double rel_tol) {
    size_t n = t_grid.size();
    if (n != m2.size() || n < 5)
        throw std::invalid_argument("derived_higher_moments: need matching grids, >= 5 points");
    double h = t_grid[1] - t_grid[0];
    for (size_t i = 1; i < n; ++i)
        if (std::abs(t_grid[i] - t_grid[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("derived_higher_moments: grid must be uniform");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    DerivedMoments out;
    auto d2 = differentiate_checked(t_grid, m2, rel_tol, "m2");
    out.m4.assign(n, cplx(nan, nan));
    for (size_t i = 1; i + 1 < n; ++i) out.m4[i] = (2.0 - d2[i]) / (8.0 * alpha);
    auto d4 = differentiate_checked(t_grid, out.m4, rel_tol, "m4");
    out.m6.assign(n, cplx(nan, nan));
    for (size_t i = 2; i + 2 < n; ++i) out.m6[i] = (12.0 * m2[i] - d4[i]) / (16.0 * alpha);
    auto d6 = differentiate_checked(t_grid, out.m6, rel_tol, "m6");
    out.m8.assign(n, cplx(nan, nan));
    for (size_t i = 3; i + 3 < n; ++i) out.m8[i] = (30.0 * out.m4[i] - d6[i]) / (24.0 * alpha);
    return out;
}

}  // namespace cxlab
