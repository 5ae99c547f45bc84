#include "cxlab/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace cxlab {

namespace {

constexpr double kAmplitudeBound = 1e6;
constexpr std::size_t kBlock = 1024;  // reduction block, fixed by contract

// hot-loop constants hoisted out of the per-step update
struct StepKernel {
    ActionKind kind;
    double k;  // 2 sqrt(lambda) or 2 omega
    double c, s;
    double delta;
    double sq2AR, sq2AI;  // sqrt(2 A_R), sqrt(2 A_I); 0 disables the draw
};

StepKernel make_kernel(const Action& a, const NoiseConfig& noise,
                       double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    StepKernel k;
    k.kind = a.kind;
    k.k = a.kind == ActionKind::Quartic ? 2.0 * std::sqrt(a.lambda)
                                        : 2.0 * a.omega;
    k.c = std::cos(0.5 * a.theta);
    k.s = std::sin(0.5 * a.theta);
    k.delta = delta;
    k.sq2AR = std::sqrt(2.0 * noise.A_R());
    k.sq2AI = noise.A_I > 0.0 ? std::sqrt(2.0 * noise.A_I) : 0.0;
    return k;
}

inline void kernel_step(TrajectoryState& st, const StepKernel& k,
                        bool with_noise) {
    double fx, fy;
    if (k.kind == ActionKind::Quartic) {
        const double x = st.x, y = st.y;
        const double re3 = x * x * x - 3.0 * x * y * y;
        const double im3 = 3.0 * x * x * y - y * y * y;
        fx = -k.k * (k.c * re3 - k.s * im3);
        fy = -k.k * (k.s * re3 + k.c * im3);
    } else {
        fx = -k.k * (k.c * st.x - k.s * st.y);
        fy = -k.k * (k.s * st.x + k.c * st.y);
    }
    const double dt = k.delta / (1.0 + std::abs(fx) + std::abs(fy));
    st.x += fx * dt;
    st.y += fy * dt;
    if (with_noise) {
        const double sq_dt = std::sqrt(dt);
        st.x += st.rng.normal() * (k.sq2AR * sq_dt);
        if (k.sq2AI > 0.0) st.y += st.rng.normal() * (k.sq2AI * sq_dt);
    }
    st.t += dt;
    // comparison is false for NaN as well
    if (!(std::abs(st.x) + std::abs(st.y) < kAmplitudeBound))
        throw NonFiniteState("trajectory left the amplitude bound");
}

std::vector<cplx> run_with_kernel(const StepKernel& k,
                                  const std::vector<double>& cps,
                                  std::uint64_t master_seed,
                                  std::uint64_t index) {
    TrajectoryState st;
    st.rng = NoiseStream::for_trajectory(master_seed, index);
    std::vector<cplx> out;
    out.reserve(cps.size());
    for (double cp : cps) {
        while (st.t < cp) kernel_step(st, k, true);
        out.emplace_back(st.x, st.y);
    }
    return out;
}

void validate_config(const SimulationConfig& config) {
    if (config.checkpoints.empty())
        throw std::invalid_argument("need at least one checkpoint");
    for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
        if (!(config.checkpoints[i] >= 0.0) ||
            !std::isfinite(config.checkpoints[i]))
            throw std::invalid_argument("checkpoints must be finite and >= 0");
        if (i > 0 && !(config.checkpoints[i] > config.checkpoints[i - 1]))
            throw std::invalid_argument("checkpoints must be increasing");
    }
    if (config.n_trajectories < 1)
        throw std::invalid_argument("need at least one trajectory");
    if (config.n_threads < 1)
        throw std::invalid_argument("n_threads must be >= 1");
}

// per-block partial sums: for each checkpoint, running sums of Re/Im and
// their squares for z^2 and z^4
struct BlockAcc {
    std::vector<double> s;  // 8 per checkpoint
    std::size_t kept = 0, excluded = 0;
};

void accumulate_block(const StepKernel& k, const SimulationConfig& config,
                      std::size_t begin, std::size_t end, BlockAcc& acc) {
    const std::size_t ncp = config.checkpoints.size();
    acc.s.assign(8 * ncp, 0.0);
    for (std::size_t idx = begin; idx < end; ++idx) {
        std::vector<cplx> traj;
        try {
            traj = run_with_kernel(k, config.checkpoints, config.master_seed,
                                   idx);
        } catch (const NonFiniteState&) {
            ++acc.excluded;
            continue;
        }
        ++acc.kept;
        for (std::size_t i = 0; i < ncp; ++i) {
            const cplx z2 = traj[i] * traj[i];
            const cplx z4 = z2 * z2;
            double* p = &acc.s[8 * i];
            p[0] += z2.real();
            p[1] += z2.imag();
            p[2] += z2.real() * z2.real();
            p[3] += z2.imag() * z2.imag();
            p[4] += z4.real();
            p[5] += z4.imag();
            p[6] += z4.real() * z4.real();
            p[7] += z4.imag() * z4.imag();
        }
    }
}

MomentEstimate finish_estimate(const double* p, std::size_t n) {
    MomentEstimate e;
    e.mean = cplx(p[0] / double(n), p[1] / double(n));
    if (n >= 2) {
        const double vr =
            std::max(0.0, (p[2] - double(n) * e.mean.real() * e.mean.real()) /
                              double(n - 1));
        const double vi =
            std::max(0.0, (p[3] - double(n) * e.mean.imag() * e.mean.imag()) /
                              double(n - 1));
        e.std_error = cplx(std::sqrt(vr / double(n)), std::sqrt(vi / double(n)));
    }
    return e;
}

}  // namespace

std::uint64_t NoiseStream::scramble(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

NoiseStream NoiseStream::for_trajectory(std::uint64_t master_seed,
                                        std::uint64_t index) {
    NoiseStream ns;
    ns.gen.seed(scramble(master_seed, index));
    return ns;
}

double NoiseStream::uniform_sym() {
    return double(gen() >> 11) * 0x1.0p-52 - 1.0;
}

double NoiseStream::normal() {
    if (has_spare) {
        has_spare = false;
        return spare;
    }
    double u, v, s;
    do {
        u = uniform_sym();
        v = uniform_sym();
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * f;
    has_spare = true;
    return u * f;
}

void step(TrajectoryState& st, const Action& action, const NoiseConfig& noise,
          double delta) {
    kernel_step(st, make_kernel(action, noise, delta), true);
}

void step_drift_only(TrajectoryState& st, const Action& action, double delta) {
    kernel_step(st, make_kernel(action, NoiseConfig(0.0), delta), false);
}

std::vector<cplx> run_trajectory(const SimulationConfig& config,
                                 std::uint64_t trajectory_index) {
    validate_config(config);
    const StepKernel k = make_kernel(config.action, config.noise, config.delta);
    try {
        return run_with_kernel(k, config.checkpoints, config.master_seed,
                               trajectory_index);
    } catch (const NonFiniteState&) {
        throw NonFiniteState("trajectory " + std::to_string(trajectory_index) +
                             " left the amplitude bound");
    }
}

EnsembleMoments ensemble_moments(const SimulationConfig& config) {
    validate_config(config);
    const StepKernel k = make_kernel(config.action, config.noise, config.delta);
    const std::size_t n = config.n_trajectories;
    const std::size_t ncp = config.checkpoints.size();
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<BlockAcc> partial(n_blocks);

    auto work = [&](std::size_t block) {
        const std::size_t begin = block * kBlock;
        accumulate_block(k, config, begin, std::min(begin + kBlock, n),
                         partial[block]);
    };
    if (config.n_threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) work(b);
    } else {
        const std::size_t nt =
            std::min<std::size_t>(config.n_threads, n_blocks);
        std::vector<std::thread> pool;
        std::exception_ptr err;
        for (std::size_t w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = w; b < n_blocks; b += nt) work(b);
                } catch (...) {
                    err = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    // block partials combined in index order: bit-identical for any n_threads
    std::vector<double> total(8 * ncp, 0.0);
    std::size_t kept = 0, excluded = 0;
    for (const BlockAcc& b : partial) {
        kept += b.kept;
        excluded += b.excluded;
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += b.s[i];
    }
    if (kept == 0) throw RunawayEnsemble("every trajectory diverged");
    if (double(excluded) > 1e-3 * double(n))
        throw RunawayEnsemble("diverged fraction " +
                              std::to_string(double(excluded) / double(n)) +
                              " exceeds 1e-3");

    EnsembleMoments em;
    em.checkpoints = config.checkpoints;
    em.n_kept = kept;
    em.n_excluded = excluded;
    em.errors_defined = kept >= 2;
    em.m2.resize(ncp);
    em.m4.resize(ncp);
    for (std::size_t i = 0; i < ncp; ++i) {
        em.m2[i] = finish_estimate(&total[8 * i], kept);
        em.m4[i] = finish_estimate(&total[8 * i + 4], kept);
    }
    return em;
}

std::optional<double> detect_breakdown(
    const EnsembleMoments& em, const std::function<cplx(double)>& reference,
    const BreakdownParams& params) {
    if (params.window < 1) throw std::invalid_argument("window must be >= 1");
    if (params.k_sigma < 0.0 || params.absolute_floor < 0.0)
        throw std::invalid_argument("thresholds must be nonnegative");
    const std::size_t ncp = em.checkpoints.size();
    std::vector<bool> deviating(ncp);
    for (std::size_t i = 0; i < ncp; ++i) {
        const cplx ref = reference(em.checkpoints[i]);
        const double se = std::hypot(em.m2[i].std_error.real(),
                                     em.m2[i].std_error.imag());
        deviating[i] = std::abs(em.m2[i].mean - ref) >
                       params.k_sigma * se + params.absolute_floor;
    }
    const std::size_t w = std::size_t(params.window);
    for (std::size_t i = 0; i + w <= ncp; ++i) {
        bool all = true;
        for (std::size_t j = i; j < i + w && all; ++j) all = deviating[j];
        if (all) return em.checkpoints[i];
    }
    return std::nullopt;
}

BreakdownFit breakdown_scaling_fit(
    const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw InsufficientData("scaling fit needs at least 3 points");
    for (const auto& [ai, tc] : points) {
        if (!(ai >= 0.0) || !(tc > 0.0))
            throw std::invalid_argument("points need A_I >= 0 and t_c > 0");
    }
    const double n = double(points.size());

    // exact linear fit of ln t_c = b0 - gamma ln(A_I + a) at fixed shift a
    auto solve = [&](double a, double& gamma, double& b0) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [ai, tc] : points) {
            if (ai + a <= 0.0) return std::numeric_limits<double>::infinity();
            const double X = std::log(ai + a), Y = std::log(tc);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        const double den = n * sxx - sx * sx;
        if (std::abs(den) < 1e-14 * (1.0 + sxx))
            throw InsufficientData("scaling fit needs distinct A_I values");
        const double slope = (n * sxy - sx * sy) / den;
        gamma = -slope;
        b0 = (sy - slope * sx) / n;
        double ssr = 0.0;
        for (const auto& [ai, tc] : points) {
            const double r = std::log(tc) - (b0 - gamma * std::log(ai + a));
            ssr += r * r;
        }
        return ssr;
    };

    double lo = 0.0, hi = 2.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double g_dummy, b_dummy;
    double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    double f1 = solve(m1, g_dummy, b_dummy), f2 = solve(m2, g_dummy, b_dummy);
    for (int it = 0; it < 120; ++it) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - gr * (hi - lo);
            f1 = solve(m1, g_dummy, b_dummy);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + gr * (hi - lo);
            f2 = solve(m2, g_dummy, b_dummy);
        }
    }
    BreakdownFit fit;
    fit.points = points;
    fit.alpha_shift = 0.5 * (lo + hi);
    const double ssr = solve(fit.alpha_shift, fit.gamma, b_dummy);
    fit.amplitude = std::exp(b_dummy);
    fit.residual = std::sqrt(ssr / n);
    return fit;
}

Histogram2D density_histogram_2d(const SimulationConfig& config,
                                 double t_final, double x_min, double x_max,
                                 double y_min, double y_max, int nx, int ny) {
    if (config.n_trajectories < 1)
        throw std::invalid_argument("need at least one trajectory");
    if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be >= 0");
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("empty histogram bounds");
    if (nx < 1 || ny < 1) throw std::invalid_argument("need at least one bin");
    if (config.n_threads < 1)
        throw std::invalid_argument("n_threads must be >= 1");
    const StepKernel k = make_kernel(config.action, config.noise, config.delta);
    const std::size_t n = config.n_trajectories;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;

    struct Counts {
        std::vector<std::size_t> bins;
        std::size_t outside = 0, excluded = 0;
    };
    std::vector<Counts> partial(n_blocks);
    const double wx = (x_max - x_min) / nx, wy = (y_max - y_min) / ny;
    auto work = [&](std::size_t block) {
        Counts& ct = partial[block];
        ct.bins.assign(std::size_t(nx) * ny, 0);
        const std::size_t begin = block * kBlock;
        const std::size_t end = std::min(begin + kBlock, n);
        for (std::size_t idx = begin; idx < end; ++idx) {
            TrajectoryState st;
            st.rng = NoiseStream::for_trajectory(config.master_seed, idx);
            try {
                while (st.t < t_final) kernel_step(st, k, true);
            } catch (const NonFiniteState&) {
                ++ct.excluded;
                continue;
            }
            if (st.x < x_min || st.x > x_max || st.y < y_min || st.y > y_max) {
                ++ct.outside;
                continue;
            }
            const int ix = std::min(nx - 1, int((st.x - x_min) / wx));
            const int iy = std::min(ny - 1, int((st.y - y_min) / wy));
            ++ct.bins[std::size_t(ix) * ny + iy];
        }
    };
    if (config.n_threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) work(b);
    } else {
        const std::size_t nt =
            std::min<std::size_t>(config.n_threads, n_blocks);
        std::vector<std::thread> pool;
        std::exception_ptr err;
        for (std::size_t w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = w; b < n_blocks; b += nt) work(b);
                } catch (...) {
                    err = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    Histogram2D h;
    h.x_min = x_min;
    h.x_max = x_max;
    h.y_min = y_min;
    h.y_max = y_max;
    h.nx = nx;
    h.ny = ny;
    std::vector<std::size_t> bins(std::size_t(nx) * ny, 0);
    std::size_t outside = 0, excluded = 0;
    for (const Counts& ct : partial) {
        outside += ct.outside;
        excluded += ct.excluded;
        for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += ct.bins[i];
    }
    const std::size_t finished = n - excluded;
    const std::size_t included = finished - outside;
    if (included == 0) throw RunawayEnsemble("no endpoint landed on the grid");
    h.n_kept = finished;
    h.n_excluded = excluded;
    h.excluded_fraction = double(outside) / double(finished);
    h.mass.assign(bins.size(), 0.0);
    for (std::size_t i = 0; i < bins.size(); ++i)
        h.mass[i] = double(bins[i]) / double(included);
    return h;
}

}  // namespace cxlab
