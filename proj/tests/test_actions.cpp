#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cxlab/actions.hpp>

#include <random>

using namespace cxlab;
using namespace std::complex_literals;

TEST_CASE("drift values at reference points") {
    Action a = Action::quartic(1.0, 0.0);
    CHECK(std::abs(drift(a, {1.0, 0.0}) - cplx(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(drift(a, {0.0, 0.0})) == 0.0);

    Action b = Action::quartic(1.0, M_PI);          // theta = pi: phase i
    CHECK(std::abs(drift(b, {1.0, 0.0}) - cplx(0.0, -2.0)) < 1e-14);

    Action q = Action::quadratic(1.0, 0.0);
    CHECK(std::abs(drift(q, {1.0, 0.0}) - cplx(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(drift(q, {0.0, 1.0}) - cplx(0.0, -2.0)) < 1e-14);
}

TEST_CASE("force components match complex drift") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (Action a : {Action::quartic(1.7, 1.1), Action::quadratic(0.8, 2.0)}) {
        for (int i = 0; i < 100; ++i) {
            double x = u(rng), y = u(rng), fx, fy;
            force_components(a, x, y, fx, fy);
            cplx d = drift(a, {x, y});
            CHECK(std::abs(fx - d.real()) < 1e-13);
            CHECK(std::abs(fy - d.imag()) < 1e-13);
        }
    }
}

// holomorphic drift: d(Fy)/dx + d(Fx)/dy = 0 (Cauchy-Riemann for F = Fx + i Fy
// with F_y entering as the imaginary part)
TEST_CASE("cross-derivative identity for the drift field") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double h = 1e-5;
    for (Action a : {Action::quartic(1.0, 0.5), Action::quartic(2.3, M_PI / 2),
                     Action::quadratic(1.0, M_PI / 2)}) {
        for (int i = 0; i < 100; ++i) {
            double x = u(rng), y = u(rng);
            double fxp, fyp, fxm, fym, dum;
            force_components(a, x + h, y, dum, fyp);
            force_components(a, x - h, y, dum, fym);
            double dFy_dx = (fyp - fym) / (2 * h);
            force_components(a, x, y + h, fxp, dum);
            force_components(a, x, y - h, fxm, dum);
            double dFx_dy = (fxp - fxm) / (2 * h);
            CHECK(std::abs(dFy_dx + dFx_dy) < 1e-6);
        }
    }
}

TEST_CASE("fokker-planck potential closed forms") {
    Action a = Action::quartic(1.0, 0.0);
    // lambda q^6 - 3 sqrt(lambda) q^2 at q=1: 1 - 3 = -2
    CHECK(std::abs(fokker_planck_potential(a, {1.0, 0.0}) - cplx(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(fokker_planck_potential(a, {0.0, 0.0})) == 0.0);

    Action q = Action::quadratic(1.0, 0.0);
    // omega^2 q^2 - omega at q=0: -1
    CHECK(std::abs(fokker_planck_potential(q, {0.0, 0.0}) - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(fokker_planck_potential(q, {1.0, 0.0})) < 1e-14);

    // quartic harmonic-well frequency: V'' at 0 gives omega^2 = 3 sqrt(lambda)
    Action a4 = Action::quartic(4.0, 0.0);
    double h = 1e-4;
    cplx v0 = fokker_planck_potential(a4, {0.0, 0.0});
    cplx vp = fokker_planck_potential(a4, {h, 0.0});
    cplx vm = fokker_planck_potential(a4, {-h, 0.0});
    double om2 = -((vp + vm - 2.0 * v0) / (h * h)).real() / 2.0;  // V ~ -omega^2 q^2 near 0
    CHECK(std::abs(om2 - 3.0 * std::sqrt(4.0)) < 1e-4);
}

TEST_CASE("equilibrium moments of the complex weight") {
    Action a = Action::quartic(1.0, 0.0);
    CHECK(std::abs(boltzmann_moment(a, 2).real() - 0.47798879748612505) < 1e-12);
    CHECK(std::abs(boltzmann_moment(a, 2).imag()) < 1e-15);

    Action b = Action::quartic(1.0, M_PI / 2);
    cplx m2 = boltzmann_moment(b, 2);
    // published 6-digit reference; exact value 0.47798879... e^{-i pi/8}
    CHECK(std::abs(m2 - cplx(0.441596, -0.182915)) < 2e-5);
    CHECK(std::abs(m2 - 0.47798879748612505 * std::polar(1.0, -M_PI / 8)) < 1e-14);

    // p = 4: Gamma(5/4)/Gamma(1/4) alpha^{-1} = alpha^{-1}/4, = 1/2 at alpha = 1/2
    CHECK(std::abs(boltzmann_moment(a, 4) - cplx(0.5, 0.0)) < 1e-12);

    CHECK_THROWS(boltzmann_moment(a, 3));
    CHECK_THROWS(boltzmann_moment(a, -2));
}

TEST_CASE("moment phase covariance in theta") {
    // <x^p>_theta = e^{-i p theta/8} <x^p>_0 for the quartic family
    for (int p : {2, 4, 6, 8}) {
        Action a0 = Action::quartic(2.0, 0.0);
        for (double th : {0.3, 1.0, M_PI / 2, 3.0}) {
            Action a = Action::quartic(2.0, th);
            cplx want = std::polar(1.0, -p * th / 8.0) * boltzmann_moment(a0, p);
            CHECK(std::abs(boltzmann_moment(a, p) - want) < 1e-12);
        }
    }
}

TEST_CASE("quadratic equilibrium moments") {
    Action q = Action::quadratic(1.0, 0.0);
    CHECK(std::abs(boltzmann_moment(q, 2) - cplx(0.5, 0.0)) < 1e-14);     // 1/(2w)
    CHECK(std::abs(boltzmann_moment(q, 4) - cplx(0.75, 0.0)) < 1e-14);    // 3/(2w)^2
    Action q2 = Action::quadratic(2.0, M_PI / 2);
    cplx w = 2.0 * std::polar(1.0, M_PI / 4);
    CHECK(std::abs(boltzmann_moment(q2, 2) - 1.0 / (2.0 * w)) < 1e-14);
}

TEST_CASE("noise split keeps unit gap") {
    NoiseConfig n0;
    CHECK(n0.A_R() == 1.0);
    NoiseConfig n1(0.7);
    CHECK(n1.A_R() == doctest::Approx(1.7).epsilon(1e-15));
    CHECK_THROWS(NoiseConfig(-0.1));
}
