#include <cxlab/moments.hpp>

#include <cmath>
#include <cstdlib>

namespace cxlab {

static double log_abs_mpz(const mpz_class& z) {
    signed long e;
    double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(std::abs(d)) + double(e) * M_LN2;
}

// p = 2 row up to order N2 from the flow triangle
//   c_{p,n} = [p(p-1) c_{p-2,n-1} + p c_{p+2,n-1}] / 2,
// the integer form of d/dt m_p = p(p-1) m_{p-2} - 4a p m_{p+2}.  Column p
// influences column 2 at order N2 only while p <= 2 + 2(N2 - n), which bounds
// the live window and keeps the walk O(N2^2).
static std::vector<mpz_class> row2_from_flow(int N2) {
    std::vector<mpz_class> out((N2 + 1) / 2);
    int W = N2 / 2 + 3;
    std::vector<mpz_class> cur(W), nxt(W);
    cur[0] = 1;  // c_{0,0}
    for (int n = 1; n <= N2; ++n) {
        int imax = std::min(n, 1 + N2 - n);
        for (int i = imax; i >= 1; --i) {
            long p = 2L * i;
            mpz_class v = cur[i - 1] * (p * (p - 1));
            if (i + 1 < W) v += cur[i + 1] * p;
            nxt[i] = v / 2;
        }
        nxt[0] = 0;
        std::swap(cur, nxt);
        if (n % 2 == 1) out[(n - 1) / 2] = cur[1];
    }
    return out;
}

SeriesTable series_coefficients_via_recursion(int p_max, int n_max) {
    if (p_max < 2 || p_max % 2) throw std::invalid_argument("p_max must be even and >= 2");
    if (n_max < p_max / 2) throw std::invalid_argument("n_max must be >= p_max/2");
    SeriesTable T;
    T.p_max = p_max;
    T.n_max = n_max;
    T.rows.resize(p_max / 2 + 1);
    T.rows[0] = {mpz_class(1)};
    T.rows[1] = row2_from_flow(n_max + (p_max - 2) / 2);
    for (int p = 4; p <= p_max; p += 2) {
        int Np = n_max + (p_max - p) / 2;
        auto& row = T.rows[p / 2];
        const auto& prev = T.rows[p / 2 - 1];
        int J = (Np - p / 2) / 2 + 1;
        row.resize(J);
        row[0] = prev[0] * (mpz_class(p) * (p - 1) / 2);  // c_{p,p/2}
        for (int j = 1; j < J; ++j) {
            // c_{p,n} = -(p-3) c_{p-4,n} + 2 c_{p-2,n+1}/(p-2); both neighbor
            // coefficients sit at index j+1 of their rows
            mpz_class u = 2 * prev[j + 1];
            if (!mpz_divisible_ui_p(u.get_mpz_t(), p - 2))
                throw InexactDivision("series recursion: 2 c_{p-2,n+1} not divisible by p-2");
            mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), p - 2);
            if (p >= 6) u -= mpz_class(p - 3) * T.rows[p / 2 - 2][j + 1];
            if (u <= 0) throw StructuralMismatch("series recursion produced a nonpositive coefficient");
            row[j] = u;
        }
    }
    return T;
}

IntegerPolynomial apply_langevin_operator(const IntegerPolynomial& poly) {
    IntegerPolynomial out;
    for (const auto& [km, a] : poly.coeff) {
        auto [k, m] = km;
        if (k >= 2) out.coeff[{k - 2, m}] += a * (long(k) * (k - 1));
        if (k >= 1) out.coeff[{k + 2, m + 1}] -= a * (4L * k);
    }
    for (auto it = out.coeff.begin(); it != out.coeff.end();)
        it = (it->second == 0) ? out.coeff.erase(it) : std::next(it);
    return out;
}

std::map<int, mpz_class> series_coefficients_via_operator(int p, int n_max) {
    if (p < 2 || p % 2) throw std::invalid_argument("p must be even and >= 2");
    if (n_max < p / 2) throw std::invalid_argument("n_max must be >= p/2");
    std::map<int, mpz_class> out;
    IntegerPolynomial cur;
    cur.coeff[{p, 0}] = 1;
    for (int n = 1; n <= n_max; ++n) {
        cur = apply_langevin_operator(cur);
        const mpz_class* val = nullptr;
        int mstar = -1, nconst = 0;
        for (const auto& [km, a] : cur.coeff)
            if (km.first == 0) { val = &a; mstar = km.second; ++nconst; }
        if (n < p / 2 || (n - p / 2) % 2) {
            if (nconst) throw StructuralMismatch("constant term at a forbidden order");
            continue;
        }
        int want_m = (n - p / 2) / 2;
        if (nconst != 1 || mstar != want_m)
            throw StructuralMismatch("constant term alpha-grading off pattern");
        if ((want_m % 2 == 0) != (*val > 0))
            throw StructuralMismatch("constant term sign off pattern");
        // val = c (-4)^m 2^n, so |val| must carry 2^{2m+n} exactly
        mpz_class mag = abs(*val);
        if (mpz_scan1(mag.get_mpz_t(), 0) < (unsigned long)(2 * want_m + n))
            throw StructuralMismatch("constant term power-of-two factor off pattern");
        out[n] = mag >> (2 * want_m + n);
    }
    return out;
}

cplx moment_partial_sum(const SeriesTable& T, int p, cplx t, int N, cplx alpha) {
    if (p < 0 || p % 2) throw std::invalid_argument("p must be even and >= 0");
    if (p == 0) return 1.0;
    if (t == 0.0) return 0.0;
    if (!T.has(p, p / 2)) throw std::out_of_range("moment_partial_sum: row missing from table");
    if (N > T.row_limit(p)) throw std::invalid_argument("moment_partial_sum: order exceeds stored table");
    const auto& row = T.rows[p / 2];
    double l4a = std::log(std::abs(4.0 * alpha));
    double ph4a = M_PI + std::arg(alpha);              // arg(-4a)
    double l2t = std::log(std::abs(2.0 * t));
    double pht = std::arg(t);
    cplx sum = 0;
    for (int j = 0; p / 2 + 2 * j <= N; ++j) {
        int n = p / 2 + 2 * j;
        double L = log_abs_mpz(row[j]) + j * l4a + n * l2t - std::lgamma(n + 1.0);
        if (L > 700.0) throw EvaluationOverflow("moment_partial_sum: term exceeds double range");
        double ph = j * ph4a + n * pht;
        sum += std::exp(L) * cplx(std::cos(ph), std::sin(ph));
    }
    return sum;
}

GrowthFit growth_fit_from_logs(const std::vector<std::pair<double, double>>& ky) {
    if (ky.size() < 10) throw InsufficientData("growth fit needs at least 10 points");
    double suu = 0, suv = 0, svv = 0, suy = 0, svy = 0;
    for (const auto& [k, y] : ky) {
        double u = (k + 0.5) * std::log(k), v = -k;
        suu += u * u; suv += u * v; svv += v * v;
        suy += u * y; svy += v * y;
    }
    double det = suu * svv - suv * suv;
    GrowthFit g;
    g.alpha_p = (suy * svv - svy * suv) / det;
    g.beta_p = (suu * svy - suv * suy) / det;
    double ss = 0;
    for (const auto& [k, y] : ky) {
        double r = y - g.alpha_p * (k + 0.5) * std::log(k) + g.beta_p * k;
        ss += r * r;
    }
    g.residual = std::sqrt(ss / ky.size());
    return g;
}

GrowthFit growth_fit(int p, const SeriesTable& T) {
    if (!T.has(p, p / 2)) throw std::out_of_range("growth_fit: row missing from table");
    const auto& row = T.rows[p / 2];
    std::vector<std::pair<double, double>> ky;
    for (int j = 9; j < (int)row.size(); ++j) {   // k = j+1 >= 10
        int n = p / 2 + 2 * j;
        ky.emplace_back(j + 1.0, log_abs_mpz(row[j]) - std::lgamma(n + 1.0));
    }
    return growth_fit_from_logs(ky);
}

cplx equilibrium_recursion(int p, cplx m2_inf, cplx alpha) {
    if (p < 0 || p % 2) throw std::invalid_argument("p must be even and >= 0");
    cplx la = std::log(alpha);
    if (p % 4 == 0)
        return std::tgamma((p + 1) / 4.0) / std::tgamma(0.25) * std::exp(-(p / 4.0) * la);
    return std::tgamma((p + 1) / 4.0) / std::tgamma(0.75) * m2_inf * std::exp(((2.0 - p) / 4.0) * la);
}

double supertask_map(int p, double t, double alpha, const SeriesTable& T) {
    if (p < 2 || p % 2) throw std::invalid_argument("p must be even and >= 2");
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    double r4a = std::sqrt(4.0 * alpha);
    auto f = [&](int n, double s) -> double {
        if (n == 0) return 1.0;   // f_0 = 1
        int q = 2 * n;
        double dd = 1;
        for (int i = q - 1; i >= 1; i -= 2) dd *= i;   // (q-1)!!
        cplx m = moment_partial_sum(T, q, s / r4a, T.row_limit(q), alpha);
        return std::pow(4.0 * alpha, q / 4.0) * m.real() / std::sqrt(2.0 * q * dd);
    };
    double s = r4a * t;
    double val = f(p / 2, s);
    if (p / 2 >= 2) {
        auto a = [](int n) { return n == 0 ? 1.0 : std::sqrt(2.0 * n * (2 * n + 1) * (2 * n + 2)); };
        double h = 1e-4;
        double d1 = (f(p / 2 - 1, s + h) - f(p / 2 - 1, s - h)) / (2 * h);
        double rhs = a(p / 2 - 2) / a(p / 2 - 1) * f(p / 2 - 2, s) - d1 / a(p / 2 - 1);
        if (std::abs(val - rhs) > 1e-6 * (1.0 + std::abs(val)))
            throw RecursionViolation("supertask ladder identity violated");
    }
    return val;
}

}  // namespace cxlab
