#pragma once
// Action family: quartic S = (sqrt(lambda)/2) e^{i theta/2} z^4 and
// quadratic S = omega e^{i theta/2} z^2, with the drift/force split used
// by the Langevin and Fokker-Planck routes.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cxlab {

using cplx = std::complex<double>;

enum class ActionKind { Quartic, Quadratic };

struct Action {
    ActionKind kind;
    double lambda = 1.0;   // quartic coupling
    double omega = 1.0;    // quadratic coupling
    double theta = 0.0;    // Wick angle, [0, pi)

    static Action quartic(double lambda, double theta) {
        if (!(lambda > 0.0)) throw std::invalid_argument("quartic action needs lambda > 0");
        return {ActionKind::Quartic, lambda, 0.0, theta};
    }
    static Action quadratic(double omega, double theta) {
        if (!(omega > 0.0)) throw std::invalid_argument("quadratic action needs omega > 0");
        return {ActionKind::Quadratic, 0.0, omega, theta};
    }

    // complex coupling alpha = (sqrt(lambda)/2) e^{i theta/2}; Re alpha > 0 on [0, pi)
    cplx alpha() const {
        return 0.5 * std::sqrt(lambda) * std::polar(1.0, 0.5 * theta);
    }

    cplx value(cplx z) const {
        cplx ph = std::polar(1.0, 0.5 * theta);
        if (kind == ActionKind::Quartic) return 0.5 * std::sqrt(lambda) * ph * z * z * z * z;
        return omega * ph * z * z;
    }
};

struct NoiseConfig {
    double A_I = 0.0;
    explicit NoiseConfig(double ai = 0.0) : A_I(ai) {
        if (ai < 0.0) throw std::invalid_argument("A_I must be nonnegative");
    }
    double A_R() const { return A_I + 1.0; }   // A_R - A_I = 1, never stored
};

// -dS/dz
inline cplx drift(const Action& a, cplx z) {
    cplx ph = std::polar(1.0, 0.5 * a.theta);
    if (a.kind == ActionKind::Quartic) return -2.0 * std::sqrt(a.lambda) * ph * z * z * z;
    return -2.0 * a.omega * ph * z;
}

// (F_x, F_y) = (Re, Im) of the drift at z = x + iy, written out in reals
// so the stepping loop stays allocation- and branch-free.
inline void force_components(const Action& a, double x, double y, double& fx, double& fy) {
    double c = std::cos(0.5 * a.theta), s = std::sin(0.5 * a.theta);
    if (a.kind == ActionKind::Quartic) {
        double k = 2.0 * std::sqrt(a.lambda);
        double re3 = x * x * x - 3.0 * x * y * y;    // Re z^3
        double im3 = 3.0 * x * x * y - y * y * y;    // Im z^3
        fx = -k * (c * re3 - s * im3);
        fy = -k * (s * re3 + c * im3);
    } else {
        double k = 2.0 * a.omega;
        fx = -k * (c * x - s * y);
        fy = -k * (s * x + c * y);
    }
}

// V_FP = (S')^2/4 - S''/2.  Quartic: lambda e^{i theta} q^6 - 3 sqrt(lambda) e^{i theta/2} q^2
// (so omega^2 = 3 sqrt(lambda)); quadratic: omega^2 e^{i theta} q^2 - omega e^{i theta/2}.
inline cplx fokker_planck_potential(const Action& a, cplx q) {
    cplx ph = std::polar(1.0, 0.5 * a.theta);
    if (a.kind == ActionKind::Quartic) {
        double sl = std::sqrt(a.lambda);
        return a.lambda * ph * ph * q * q * q * q * q * q - 3.0 * sl * ph * q * q;
    }
    return a.omega * a.omega * ph * ph * q * q - a.omega * ph;
}

// Equilibrium moment of the complex measure e^{-S}.
// Quartic: <x^p> = Gamma((p+1)/4)/Gamma(1/4) alpha^{-p/4}.
// Quadratic: <x^p> = p!/((p/2)!) (4 omega e^{i theta/2})^{-p/2} (Appendix-style closed form).
inline cplx boltzmann_moment(const Action& a, int p) {
    if (p < 0 || p % 2 != 0) throw std::invalid_argument("boltzmann_moment: p must be even and >= 0");
    if (p == 0) return 1.0;
    if (a.kind == ActionKind::Quartic) {
        double r = std::tgamma((p + 1) / 4.0) / std::tgamma(0.25);
        cplx al = a.alpha();
        // principal branch power of alpha, Re alpha > 0
        cplx alp = std::exp(-0.25 * double(p) * std::log(al));
        return r * alp;
    }
    double fac = 1.0;
    for (int k = p / 2 + 1; k <= p; ++k) fac *= k;   // p!/((p/2)!)
    cplx w = a.omega * std::polar(1.0, 0.5 * a.theta);
    return fac * std::pow(4.0 * w, -p / 2.0);
}

}  // namespace cxlab
