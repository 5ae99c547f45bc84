#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cxlab/actions.hpp>
#include <cxlab/moments.hpp>

using namespace cxlab;

// one deep table shared by the slow cases (rows 2 and 4 to order ~1000)
static const SeriesTable& deep_table() {
    static SeriesTable T = series_coefficients_via_recursion(4, 1000);
    return T;
}

TEST_CASE("recursion reproduces the known low-order row") {
    SeriesTable T = series_coefficients_via_recursion(12, 40);
    const long ref[] = {1, 6, 216, 22896, 5360256, 2346299136};
    for (int i = 0; i < 6; ++i) CHECK(T.at(2, 2 * i + 1) == ref[i]);
    CHECK(T.at(4, 2) == 6);
    CHECK(T.at(6, 3) == 90);   // 6!/2^3
}

TEST_CASE("leading coefficients are p!/2^(p/2)") {
    SeriesTable T = series_coefficients_via_recursion(12, 40);
    for (int p = 2; p <= 12; p += 2) {
        mpz_class want = 1;
        for (int i = 2; i <= p; ++i) want *= i;
        want >>= p / 2;
        CHECK(T.at(p, p / 2) == want);
    }
}

TEST_CASE("row 4 is row 2 shifted by one order") {
    SeriesTable T = series_coefficients_via_recursion(12, 40);
    for (int n = 2; T.has(4, n); n += 2) CHECK(T.at(4, n) == T.at(2, n + 1));
}

TEST_CASE("operator acts correctly on monomials") {
    IntegerPolynomial x2;
    x2.coeff[{2, 0}] = 1;
    auto r = apply_langevin_operator(x2);   // 2 - 8 a x^4
    CHECK(r.coeff.size() == 2);
    CHECK(r.coeff.at({0, 0}) == 2);
    CHECK(r.coeff.at({4, 1}) == -8);

    IntegerPolynomial one;
    one.coeff[{0, 0}] = 1;
    CHECK(apply_langevin_operator(one).coeff.empty());   // annihilates constants

    IntegerPolynomial x4;
    x4.coeff[{4, 0}] = 1;
    auto r4 = apply_langevin_operator(x4);   // 12 x^2 - 16 a x^6
    CHECK(r4.coeff.at({2, 0}) == 12);
    CHECK(r4.coeff.at({6, 1}) == -16);
}

TEST_CASE("operator route extracts coefficients with the expected structure") {
    auto row = series_coefficients_via_operator(2, 11);
    CHECK(row.at(1) == 1);       // (L x^2)(0) = 2 = c * 2^1
    CHECK(row.count(2) == 0);    // even orders vanish for p = 2
    CHECK(row.at(3) == 6);       // (L^3 x^2)(0) = -192 a
    CHECK(row.at(11) == 2346299136L);
}

TEST_CASE("the two routes agree exactly") {
    SeriesTable T = series_coefficients_via_recursion(12, 40);
    for (int p = 2; p <= 12; p += 2) {
        auto row = series_coefficients_via_operator(p, 40);
        for (const auto& [n, c] : row) {
            REQUIRE(T.has(p, n));
            CHECK(c == T.at(p, n));
        }
        for (int n = p / 2; n <= 40; n += 2) CHECK(row.count(n) == T.has(p, n));
    }
}

TEST_CASE("partial sums at small t") {
    const SeriesTable& T = deep_table();
    cplx v = moment_partial_sum(T, 2, 0.05, 11, 0.5);
    CHECK(std::abs(v - cplx(0.09807, 0.0)) < 1e-5);
    CHECK(moment_partial_sum(T, 2, 0.0, 11, 0.5) == cplx(0.0));
    CHECK(moment_partial_sum(T, 0, 0.3, 11, 0.5) == cplx(1.0));
}

TEST_CASE("partial sums plateau, then the factorial tail takes over") {
    const SeriesTable& T = deep_table();
    // at t = 0.02 every term with 100 <= n <= 500 is far below 1e-10
    cplx ref = moment_partial_sum(T, 2, 0.02, 501, 0.5);
    for (int N = 101; N <= 501; N += 100)
        CHECK(std::abs(moment_partial_sum(T, 2, 0.02, N, 0.5) - ref) < 1e-10);
    // at t = 0.05 the plateau ends near n ~ 330; by n ~ 500 terms reach e^76
    cplx ref5 = moment_partial_sum(T, 2, 0.05, 301, 0.5);
    for (int N = 101; N <= 301; N += 100)
        CHECK(std::abs(moment_partial_sum(T, 2, 0.05, N, 0.5) - ref5) < 1e-10);
    CHECK(std::abs(moment_partial_sum(T, 2, 0.05, 501, 0.5)) > 1e30);
}

TEST_CASE("successive nonzero terms alternate in sign for real positive coupling") {
    const SeriesTable& T = deep_table();
    cplx prev = 0;
    int sign = +1;
    for (int n = 1; n <= 21; n += 2) {
        cplx cur = moment_partial_sum(T, 2, 0.05, n, 0.5);
        double term = (cur - prev).real();
        CHECK(term * sign > 0);
        sign = -sign;
        prev = cur;
    }
}

TEST_CASE("growth fit recovers the exact model") {
    std::vector<std::pair<double, double>> ky;
    for (int k = 10; k <= 200; ++k)
        ky.emplace_back(k, (k + 0.5) * std::log(double(k)) - k);
    GrowthFit g = growth_fit_from_logs(ky);
    CHECK(std::abs(g.alpha_p - 1.0) < 1e-10);
    CHECK(std::abs(g.beta_p - 1.0) < 1e-10);
    CHECK(g.residual < 1e-10);
    CHECK_THROWS_AS(growth_fit_from_logs({{10, 1}, {11, 2}}), InsufficientData);
}

TEST_CASE("growth exponents of the real rows") {
    const SeriesTable& T = deep_table();
    GrowthFit g2 = growth_fit(2, T);
    CHECK(std::abs(g2.alpha_p - 1.0) < 0.1);
    // the p = 2 offset converges to 1 + ln(2)/2, not 1
    CHECK(std::abs(g2.beta_p - 1.349) < 0.01);
    GrowthFit g4 = growth_fit(4, T);
    CHECK(std::abs(g4.alpha_p - 1.0) < 0.1);
    CHECK(std::abs(g4.beta_p - 1.0) < 0.1);
}

TEST_CASE("equilibrium recursion closed forms") {
    CHECK(std::abs(equilibrium_recursion(0, 0.0, 0.5) - cplx(1.0)) < 1e-15);
    // p = 4 at alpha = 1/2: Gamma(5/4)/Gamma(1/4) * 2 = 1/2
    CHECK(std::abs(equilibrium_recursion(4, 0.0, 0.5) - cplx(0.5)) < 1e-14);

    // consistency with the equilibrium weight when seeded with the exact m2
    for (double th : {0.0, 1.0, M_PI / 2}) {
        Action a = Action::quartic(1.3, th);
        cplx al = a.alpha();
        cplx m2 = boltzmann_moment(a, 2);
        for (int p : {2, 4, 6, 8, 10}) {
            cplx want = boltzmann_moment(a, p);
            CHECK(std::abs(equilibrium_recursion(p, m2, al) - want) < 1e-12 * std::abs(want));
        }
    }

    // the defining relation 4a m_p = (p-3) m_{p-4}
    cplx al(0.4, 0.3), m2(0.7, -0.2);
    for (int p : {4, 6, 8, 10, 12}) {
        cplx lhs = 4.0 * al * equilibrium_recursion(p, m2, al);
        cplx rhs = double(p - 3) * equilibrium_recursion(p - 4, m2, al);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("supertask map leading order and fixed point") {
    SeriesTable T = series_coefficients_via_recursion(8, 30);
    double alpha = 0.5, t = 1e-3;
    double s = std::sqrt(4 * alpha) * t;
    double prod = 1;
    auto a = [](int n) { return n == 0 ? 1.0 : std::sqrt(2.0 * n * (2 * n + 1) * (2 * n + 2)); };
    for (int n = 1; n <= 4; ++n) {
        prod *= a(n - 1);
        double lead = prod;
        for (int i = 2; i <= n; ++i) lead /= i;
        lead *= std::pow(s, n);
        double f = supertask_map(2 * n, t, alpha, T);
        CHECK(std::abs(f / lead - 1.0) < 1e-4);
        CHECK(supertask_map(2 * n, 0.0, alpha, T) == 0.0);
    }

    // equilibrium image of m_4: (4a) m_4(inf) / sqrt(24) = a_0/a_1
    double m4inf = equilibrium_recursion(4, 0.0, alpha).real();
    CHECK(std::abs(4 * alpha * m4inf / std::sqrt(24.0) - a(0) / a(1)) < 1e-14);
}

TEST_CASE("supertask map rejects a corrupted table") {
    SeriesTable T = series_coefficients_via_recursion(8, 30);
    T.rows[3][0] *= 2;   // break row 6 at leading order
    CHECK_THROWS_AS(supertask_map(8, 0.02, 0.5, T), RecursionViolation);
}

TEST_CASE("input validation and overflow guard") {
    CHECK_THROWS_AS(series_coefficients_via_recursion(3, 10), std::invalid_argument);
    CHECK_THROWS_AS(series_coefficients_via_recursion(8, 2), std::invalid_argument);
    CHECK_THROWS_AS(series_coefficients_via_operator(2, 0), std::invalid_argument);
    SeriesTable T = series_coefficients_via_recursion(4, 20);
    CHECK_THROWS_AS(moment_partial_sum(T, 2, 0.05, 200, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(moment_partial_sum(T, 6, 0.05, 10, 0.5), std::out_of_range);
    CHECK_THROWS_AS(moment_partial_sum(T, 2, 1e200, 9, 0.5), EvaluationOverflow);
    CHECK_THROWS_AS(T.at(2, 2), std::out_of_range);
}
