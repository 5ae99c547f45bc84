#pragma once
// Two-component Langevin integration for complex actions: adaptive-step
// trajectories with per-trajectory RNG streams, ensemble moment estimates
// with standard errors, breakdown-time detection against a reference curve,
// and planar endpoint histograms.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "cxlab/actions.hpp"
#include "cxlab/errors.hpp"

namespace cxlab {

// Per-trajectory noise source: a 64-bit Mersenne twister seeded through a
// splitmix64 scramble of (master_seed, index), with a Marsaglia-polar normal
// on top.  Seeding through the scrambler keeps the streams unrelated; raw
// golden-ratio offsets would make stream i+1 a one-draw shift of stream i.
struct NoiseStream {
    std::mt19937_64 gen;
    double spare = 0.0;
    bool has_spare = false;

    static std::uint64_t scramble(std::uint64_t seed, std::uint64_t index);
    static NoiseStream for_trajectory(std::uint64_t master_seed,
                                      std::uint64_t index);

    double uniform_sym();  // uniform on (-1, 1)
    double normal();
};

struct TrajectoryState {
    double x = 0.0, y = 0.0, t = 0.0;
    NoiseStream rng;
};

struct SimulationConfig {
    Action action = Action::quartic(1.0, 0.0);
    NoiseConfig noise{0.0};
    double delta = 1e-5;  // nominal step
    std::vector<double> checkpoints;
    std::size_t n_trajectories = 1;
    std::uint64_t master_seed = 0;
    int n_threads = 1;
};

// One Euler step with dt = delta/(1 + |F_x| + |F_y|); noise variances
// (2 A_R dt, 2 A_I dt), and the y-draw is skipped entirely at A_I = 0.
// Throws NonFiniteState once |x| + |y| leaves the amplitude bound 1e6: past
// that point the adaptive clock effectively freezes, so the trajectory can
// never reach its checkpoint and must be declared a runaway.
void step(TrajectoryState& st, const Action& action, const NoiseConfig& noise,
          double delta);

// drift-only variant (both variances forced to zero), used to pin the
// deterministic part of the update
void step_drift_only(TrajectoryState& st, const Action& action, double delta);

// endpoint (x, y) at the first crossing of each checkpoint, starting from the
// origin; checkpoint 0 records the initial point
std::vector<cplx> run_trajectory(const SimulationConfig& config,
                                 std::uint64_t trajectory_index);

struct MomentEstimate {
    cplx mean;       // of z^p
    cplx std_error;  // (se of Re, se of Im) packed as a complex pair
};

struct EnsembleMoments {
    std::vector<double> checkpoints;
    std::vector<MomentEstimate> m2, m4;  // one entry per checkpoint
    std::size_t n_kept = 0, n_excluded = 0;
    bool errors_defined = true;  // false for single-trajectory ensembles
};

// Trajectories are aggregated in fixed blocks of 1024 by index, and block
// partials are combined in index order, so the result is bit-identical for
// any n_threads.  Diverged trajectories are dropped from every checkpoint
// and counted; more than 1e-3 of them (or all of them) raises
// RunawayEnsemble.
EnsembleMoments ensemble_moments(const SimulationConfig& config);

struct BreakdownParams {
    double k_sigma = 4.0;
    int window = 3;
    double absolute_floor = 0.005;  // guards against sigma-shrinkage at huge n
};

// first checkpoint where |m2 - reference| exceeds
// k_sigma * hypot(se_re, se_im) + absolute_floor for `window` consecutive
// checkpoints; nullopt when no such run exists
std::optional<double> detect_breakdown(const EnsembleMoments& em,
                                       const std::function<cplx(double)>& reference,
                                       const BreakdownParams& params = {});

struct BreakdownFit {
    std::vector<std::pair<double, double>> points;  // (A_I, t_c) as given
    double amplitude = 0.0;                         // C in C (A_I + a)^{-gamma}
    double alpha_shift = 0.0;
    double gamma = 0.0;
    double residual = 0.0;  // rms log-space misfit
};

// least squares for t_c = C (A_I + a)^{-gamma}: golden-section search on the
// shift a in [0, 2] around the exactly solvable linear fit in log space
BreakdownFit breakdown_scaling_fit(
    const std::vector<std::pair<double, double>>& points);

struct Histogram2D {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> mass;  // [ix * ny + iy], unit total over included bins
    double excluded_fraction = 0.0;  // endpoints outside the grid
    std::size_t n_kept = 0, n_excluded = 0;
};

// endpoint density at t_final; config checkpoints are ignored
Histogram2D density_histogram_2d(const SimulationConfig& config, double t_final,
                                 double x_min, double x_max, double y_min,
                                 double y_max, int nx, int ny);

}  // namespace cxlab
