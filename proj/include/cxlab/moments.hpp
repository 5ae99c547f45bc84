#pragma once
// Exact small-time moment series for the quartic action, m_p(t) ~
// sum_n c_{p,n} (-4a)^{(n-p/2)/2} (2t)^n / n!, computed two independent ways
// (integer recursion and iterated Langevin operator), plus evaluation,
// factorial-growth fitting, the equilibrium recursion and the oscillator-chain
// ("supertask") change of variables built on top of the table.

#include <gmpxx.h>

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <cxlab/errors.hpp>

namespace cxlab {

using cplx = std::complex<double>;

// c_{p,n} for even p, n >= p/2, n == p/2 (mod 2), all strictly positive.
// rows[p/2][j] = c_{p, p/2 + 2j}.  Rows may extend past n_max: filling row p
// to order n needs row p-2 at order n+1.
struct SeriesTable {
    int p_max = 0;
    int n_max = 0;
    std::vector<std::vector<mpz_class>> rows;

    bool has(int p, int n) const {
        if (p < 0 || p > p_max || p % 2 || n < p / 2 || (n - p / 2) % 2) return false;
        return (n - p / 2) / 2 < (long)rows[p / 2].size();
    }
    const mpz_class& at(int p, int n) const {
        if (!has(p, n)) throw std::out_of_range("SeriesTable::at: no such coefficient");
        return rows[p / 2][(n - p / 2) / 2];
    }
    // largest stored order in row p
    int row_limit(int p) const {
        if (p < 0 || p > p_max || p % 2 || rows[p / 2].empty())
            throw std::out_of_range("SeriesTable::row_limit: no such row");
        return p / 2 + 2 * ((int)rows[p / 2].size() - 1);
    }
};

// element of Z[a][x]; key = (monomial degree k, power m of the coupling a)
struct IntegerPolynomial {
    std::map<std::pair<int, int>, mpz_class> coeff;
};

struct GrowthFit {
    double alpha_p = 0;
    double beta_p = 0;
    double residual = 0;  // rms misfit, always reported
};

// L(x^k) = k(k-1) x^{k-2} - 4a k x^{k+2}, exactly in Z[a][x]
IntegerPolynomial apply_langevin_operator(const IntegerPolynomial& poly);

// row p from (L^n x^p)(0) = c_{p,n} (-4a)^{(n-p/2)/2} 2^n; throws
// StructuralMismatch if the constant term's grading or sign is off pattern
std::map<int, mpz_class> series_coefficients_via_operator(int p, int n_max);

// full table from the leading-coefficient step plus the downward recursion,
// seeded by c_{0,0} = 1 and a p = 2 row generated from the flow triangle
SeriesTable series_coefficients_via_recursion(int p_max, int n_max);

// sum_{n <= N} of the series at complex t and coupling alpha, log-guarded
cplx moment_partial_sum(const SeriesTable& table, int p, cplx t, int N, cplx alpha);

// least squares for y_k = alpha_p (k+1/2) ln k - beta_p k over given (k, y)
GrowthFit growth_fit_from_logs(const std::vector<std::pair<double, double>>& ky);
// same, with y_k = ln(c_{p,n}/n!), n = p/2 - 2 + 2k, restricted to k >= 10
GrowthFit growth_fit(int p, const SeriesTable& table);

// closed-form solution of 4a m_p = (p-3) m_{p-4}:
//   p = 0 (mod 4):  Gamma((p+1)/4)/Gamma(1/4) a^{-p/4}
//   p = 2 (mod 4):  Gamma((p+1)/4)/Gamma(3/4) m2_inf a^{(2-p)/4}
cplx equilibrium_recursion(int p, cplx m2_inf, cplx alpha);

// f_{p/2}(s) at s = sqrt(4a) t, i.e. (4a)^{p/4} m_p(t) / sqrt(2p (p-1)!!)
// with a_0 = 1; for p/2 >= 2 the ladder identity
// f_n = (a_{n-2}/a_{n-1}) f_{n-2} - f'_{n-1}/a_{n-1}, a_n = sqrt(2n(2n+1)(2n+2)),
// is checked by central differences (h = 1e-4, tolerance 1e-6 (1+|f|))
double supertask_map(int p, double t, double alpha, const SeriesTable& table);

}  // namespace cxlab
