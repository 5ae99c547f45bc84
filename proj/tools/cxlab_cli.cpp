// cxlab command line driver: emits every table and figure data set as
// self-describing CSV (one '#'-prefixed JSON metadata line, one timestamp
// line, then the header row).  Exit codes: 0 success, 1 usage, 2 numerical
// failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cxlab/actions.hpp>
#include <cxlab/borel.hpp>
#include <cxlab/harmonic.hpp>
#include <cxlab/langevin.hpp>
#include <cxlab/moments.hpp>
#include <cxlab/spectral1d.hpp>
#include <cxlab/spectral2d.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace cxlab;

namespace {

constexpr const char* kVersion = "cxlab 1.0.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// output sink; "-" means stdout, relative paths land under $CXLAB_OUT
struct Sink {
    std::ostream* out = nullptr;
    std::unique_ptr<std::ofstream> file;
    std::string path;
};

Sink open_sink(const std::string& requested) {
    Sink s;
    if (requested == "-") {
        s.out = &std::cout;
        s.path = "-";
        return s;
    }
    std::string path = requested;
    const char* dir = std::getenv("CXLAB_OUT");
    if (dir && *dir && path.front() != '/')
        path = std::string(dir) + "/" + path;
    s.file = std::make_unique<std::ofstream>(path);
    if (!*s.file)
        throw std::runtime_error("cannot open output file: " + path);
    s.out = s.file.get();
    s.path = path;
    return s;
}

void write_preamble(std::ostream& os, const json& meta) {
    os << "#" << meta.dump() << "\n";
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&now));
    os << "# generated: " << stamp << "\n";
}

// shared flag bundle; subcommands register the members they use
struct Options {
    double lambda = 1.0;
    double omega = 1.0;
    bool quadratic = false;
    double theta = 0.0;
    double theta_frac = 0.0;
    bool theta_frac_set = false;
    double ai = 0.0;
    double delta = 1e-4;
    long ntraj = 10000;
    unsigned long long seed = 0;
    int threads = 1;
    int p = 2;
    int nterms = 12;
    int borel_terms = 500;
    double smax = 11.0;
    double step = 1e-3;
    double tmax = 2.0;
    int npoints = 41;
    std::string checkpoints;
    int N = 150;
    int levels = 11;
    bool grid = false;
    int npts = 141;
    double half_width = 0.0;
    bool histogram = false;
    double tfinal = 1.0;
    double xmin = -3.2, xmax = 3.2, ymin = -3.2, ymax = 3.2;
    int nx = 20, ny = 20;
    double ksigma = 4.0;
    int window = 3;
    double floor = 0.005;
    std::string points;
    std::string out;
};

double resolved_theta(const Options& o) {
    return o.theta_frac_set ? o.theta_frac * M_PI : o.theta;
}

void add_theta_flags(CLI::App* cmd, Options& o) {
    auto* t = cmd->add_option("--theta", o.theta, "rotation angle in radians");
    cmd->add_option("--theta-frac", o.theta_frac,
                    "rotation angle as a fraction of pi")
        ->excludes(t)
        ->each([&o](const std::string&) { o.theta_frac_set = true; });
}

void add_out_flag(CLI::App* cmd, Options& o, const std::string& def) {
    o.out = def;
    cmd->add_option("--out", o.out,
                    "output file ('-' for stdout; relative paths resolve "
                    "under $CXLAB_OUT)");
}

std::vector<double> parse_checkpoints(const Options& o, double def_final,
                                      int def_points) {
    std::vector<double> cps;
    if (!o.checkpoints.empty()) {
        std::stringstream ss(o.checkpoints);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) try {
                    cps.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw CLI::ValidationError("--checkpoints",
                                               "not a number: " + tok);
                }
    } else {
        const double tf = o.tfinal > 0 ? o.tfinal : def_final;
        const int np = o.npoints > 0 ? o.npoints : def_points;
        for (int i = 1; i <= np; ++i) cps.push_back(tf * i / np);
    }
    return cps;
}

json action_meta(const Options& o) {
    json j;
    j["version"] = kVersion;
    if (o.quadratic)
        j["action"] = {{"kind", "quadratic"}, {"omega", o.omega}};
    else
        j["action"] = {{"kind", "quartic"}, {"lambda", o.lambda}};
    j["theta"] = resolved_theta(o);
    return j;
}

Action make_action(const Options& o) {
    const double th = resolved_theta(o);
    return o.quadratic ? Action::quadratic(o.omega, th)
                       : Action::quartic(o.lambda, th);
}

// ---------------------------------------------------------------- series

int run_series(const Options& o) {
    SeriesTable table = series_coefficients_via_recursion(o.p, o.nterms);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "series";
    meta["p"] = o.p;
    meta["nterms"] = o.nterms;
    try {
        const GrowthFit fit = growth_fit(o.p, table);
        meta["growth_alpha"] = fit.alpha_p;
        meta["growth_beta"] = fit.beta_p;
        meta["growth_residual"] = fit.residual;
    } catch (const std::exception&) {
        // table too short for the factorial-growth window
        meta["growth_alpha"] = nullptr;
    }
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "p,n,c\n";
    for (int n = o.p / 2; n <= table.row_limit(o.p); n += 2)
        *s.out << o.p << "," << n << "," << table.at(o.p, n).get_str()
               << "\n";
    return 0;
}

// ----------------------------------------------------------------- borel

int run_borel(const Options& o) {
    const double th = resolved_theta(o);
    SeriesTable table =
        series_coefficients_via_recursion(o.p, 2 * o.borel_terms);
    const double alpha = 0.5 * std::sqrt(o.lambda);
    BorelTable bt =
        tabulate_borel_sum(table, o.p, alpha, o.borel_terms, o.smax, o.step);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "borel";
    meta["p"] = o.p;
    meta["lambda"] = o.lambda;
    meta["theta"] = th;
    meta["nterms"] = o.borel_terms;
    meta["smax"] = o.smax;
    meta["step"] = o.step;
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "t,re_M,im_M,tail_fraction\n";
    for (int i = 1; i <= o.npoints; ++i) {
        const double t = o.tmax * i / o.npoints;
        const TransformResult r = borel_transform_from_table(bt, t, th);
        *s.out << fmt(t) << "," << fmt(r.M.real()) << "," << fmt(r.M.imag())
               << "," << fmt(r.tail_fraction) << "\n";
    }
    return 0;
}

// -------------------------------------------------------------- simulate

void write_moment_rows(std::ostream& os, const EnsembleMoments& em) {
    os << "t,re_m2,im_m2,se_re_m2,se_im_m2,re_m4,im_m4,se_re_m4,se_im_m4,"
          "n_kept,n_excluded\n";
    for (std::size_t i = 0; i < em.checkpoints.size(); ++i) {
        os << fmt(em.checkpoints[i]) << "," << fmt(em.m2[i].mean.real())
           << "," << fmt(em.m2[i].mean.imag()) << ","
           << fmt(em.m2[i].std_error.real()) << ","
           << fmt(em.m2[i].std_error.imag()) << ","
           << fmt(em.m4[i].mean.real()) << "," << fmt(em.m4[i].mean.imag())
           << "," << fmt(em.m4[i].std_error.real()) << ","
           << fmt(em.m4[i].std_error.imag()) << "," << em.n_kept << ","
           << em.n_excluded << "\n";
    }
}

int run_simulate(const Options& o) {
    SimulationConfig cfg;
    cfg.action = make_action(o);
    cfg.noise = NoiseConfig(o.ai);
    cfg.delta = o.delta;
    cfg.n_trajectories = o.ntraj;
    cfg.master_seed = o.seed;
    cfg.n_threads = o.threads;
    json meta = action_meta(o);
    meta["command"] = "simulate";
    meta["ai"] = o.ai;
    meta["delta"] = o.delta;
    meta["ntraj"] = o.ntraj;
    meta["seed"] = o.seed;

    if (o.histogram) {
        const Histogram2D h =
            density_histogram_2d(cfg, o.tfinal, o.xmin, o.xmax, o.ymin,
                                 o.ymax, o.nx, o.ny);
        meta["tfinal"] = o.tfinal;
        meta["excluded_fraction"] = h.excluded_fraction;
        Sink s = open_sink(o.out);
        write_preamble(*s.out, meta);
        *s.out << "x_center,y_center,mass\n";
        const double wx = (o.xmax - o.xmin) / o.nx;
        const double wy = (o.ymax - o.ymin) / o.ny;
        for (int ix = 0; ix < o.nx; ++ix)
            for (int iy = 0; iy < o.ny; ++iy)
                *s.out << fmt(o.xmin + wx * (ix + 0.5)) << ","
                       << fmt(o.ymin + wy * (iy + 0.5)) << ","
                       << fmt(h.mass[std::size_t(ix) * o.ny + iy]) << "\n";
        return 0;
    }

    cfg.checkpoints = parse_checkpoints(o, 1.0, 10);
    const EnsembleMoments em = ensemble_moments(cfg);
    meta["tc"] = nullptr;
    if (!o.quadratic) {
        // quartic runs carry their resummed reference for breakdown marking
        const double th = resolved_theta(o);
        SeriesTable table = series_coefficients_via_recursion(2, 1000);
        BorelTable bt =
            tabulate_borel_sum(table, 2, 0.5 * std::sqrt(o.lambda));
        BreakdownParams bp;
        bp.k_sigma = o.ksigma;
        bp.window = o.window;
        bp.absolute_floor = o.floor;
        const auto tc = detect_breakdown(
            em,
            [&bt, th](double t) {
                return borel_transform_from_table(bt, t, th).M;
            },
            bp);
        if (tc) meta["tc"] = *tc;
    }
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    write_moment_rows(*s.out, em);
    return 0;
}

// --------------------------------------------------------- breakdown-fit

int run_breakdown_fit(const Options& o) {
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(o.points);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--points",
                                       "expected ai:tc pairs, got " + tok);
        try {
            pts.emplace_back(std::stod(tok.substr(0, colon)),
                             std::stod(tok.substr(colon + 1)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--points", "not numeric: " + tok);
        }
    }
    const BreakdownFit fit = breakdown_scaling_fit(pts);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "breakdown-fit";
    meta["amplitude"] = fit.amplitude;
    meta["alpha_shift"] = fit.alpha_shift;
    meta["gamma"] = fit.gamma;
    meta["residual"] = fit.residual;
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "ai,tc,tc_fit\n";
    for (const auto& [ai, tc] : fit.points)
        *s.out << fmt(ai) << "," << fmt(tc) << ","
               << fmt(fit.amplitude *
                      std::pow(ai + fit.alpha_shift, -fit.gamma))
               << "\n";
    return 0;
}

// ----------------------------------------------------------- spectrum-1d

int run_spectrum_1d(const Options& o) {
    const double th = resolved_theta(o);
    const TruncatedOperator1D op = fp_hamiltonian_1d(o.lambda, th, o.N);
    const SpectralDecomposition1D dec = eigen_decompose_1d(op);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "spectrum-1d";
    meta["lambda"] = o.lambda;
    meta["theta"] = th;
    meta["N"] = o.N;
    meta["ground_norm_exact"] = ground_state_norm_exact(th);
    int usable = 0;
    for (std::size_t i = 10; i < dec.reliable.size(); ++i)
        usable += dec.reliable[i];
    if (usable >= 10) {
        const LineFit fit = norm_growth_fit(dec.norms, dec.reliable, 10);
        meta["norm_fit_slope"] = fit.slope;
        meta["norm_fit_intercept"] = fit.intercept;
    } else {
        meta["norm_fit_slope"] = nullptr;
    }
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "n,re_E,im_E,C_n,N_n,ln_N_n,reliable\n";
    const int rows = std::min<int>(o.levels, dec.eigenvalues.size());
    for (int n = 0; n < rows; ++n)
        *s.out << n << "," << fmt(dec.eigenvalues[n].real()) << ","
               << fmt(dec.eigenvalues[n].imag()) << "," << fmt(dec.C_n[n])
               << "," << fmt(dec.norms[n]) << ","
               << fmt(std::log(dec.norms[n])) << ","
               << int(dec.reliable[n]) << "\n";
    return 0;
}

// ----------------------------------------------------------- spectrum-2d

int run_spectrum_2d(const Options& o) {
    const double th = resolved_theta(o);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "spectrum-2d";
    meta["lambda"] = o.lambda;
    meta["theta"] = th;
    meta["ai"] = o.ai;
    meta["N"] = o.N;
    if (o.grid) {
        GroundState2D gs = ground_state_vector(
            build_fp_matrix(o.lambda, th, o.ai, o.N));
        ground_state_function(gs, o.half_width, o.npts);
        meta["E0"] = gs.E0.real();
        meta["residual"] = gs.residual;
        try {
            // best effort: a coarse grid can fail the edge-mass guard
            // without invalidating the grid dump itself
            double m2_err = 0.0;
            const cplx m2 = ground_state_moment(gs, 2, &m2_err);
            meta["re_m2"] = m2.real();
            meta["im_m2"] = m2.imag();
            meta["m2_grid_error"] = m2_err;
        } catch (const std::exception& e) {
            meta["re_m2"] = nullptr;
            meta["moment_error"] = e.what();
        }
        meta["normalization"] = gs.normalization_check;
        meta["peak_x"] = gs.peak_x;
        meta["peak_y"] = gs.peak_y;
        meta["boundary_warning"] = gs.boundary_warning;
        Sink s = open_sink(o.out);
        write_preamble(*s.out, meta);
        *s.out << "x,y,phi\n";
        const int npts = int(gs.xs.size());
        for (int ix = 0; ix < npts; ++ix)
            for (int iy = 0; iy < npts; ++iy)
                *s.out << fmt(gs.xs[ix]) << "," << fmt(gs.xs[iy]) << ","
                       << fmt(gs.phi[std::size_t(ix) * npts + iy]) << "\n";
        return 0;
    }
    const TruncatedOperator2D op = build_fp_matrix(o.lambda, th, o.ai, o.N);
    const std::vector<cplx> evs = spectrum_2d(op, o.levels);
    meta["E0_abs"] = std::abs(evs.at(0));
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "idx,re_E,im_E\n";
    for (std::size_t i = 0; i < evs.size(); ++i)
        *s.out << i << "," << fmt(evs[i].real()) << "," << fmt(evs[i].imag())
               << "\n";
    return 0;
}

// -------------------------------------------------------------- harmonic

int run_harmonic(const Options& o) {
    const double th = resolved_theta(o);
    const GaussianGroundState gs = harmonic_ground_state(o.omega, th, o.ai);
    json meta;
    meta["version"] = kVersion;
    meta["command"] = "harmonic";
    meta["omega"] = o.omega;
    meta["theta"] = th;
    meta["ai"] = o.ai;
    meta["A0"] = gs.A0;
    meta["B0"] = gs.B0;
    meta["C0"] = gs.C0;
    meta["lam_plus"] = gs.lam_plus;
    meta["lam_minus"] = gs.lam_minus;
    meta["axis_angle"] = gs.axis_angle;
    const cplx meq = harmonic_equilibrium_moment(2, o.omega, th);
    meta["re_m2_inf"] = meq.real();
    meta["im_m2_inf"] = meq.imag();
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "t,re_m2,im_m2,re_m4,im_m4\n";
    for (int i = 0; i <= o.npoints; ++i) {
        const double t = o.tmax * i / o.npoints;
        const cplx m2 = harmonic_moment_flow(2, t, o.omega, th);
        const cplx m4 = harmonic_moment_flow(4, t, o.omega, th);
        *s.out << fmt(t) << "," << fmt(m2.real()) << "," << fmt(m2.imag())
               << "," << fmt(m4.real()) << "," << fmt(m4.imag()) << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- compare

int run_compare(const Options& o) {
    const double th = resolved_theta(o);
    SimulationConfig cfg;
    cfg.action = Action::quartic(o.lambda, th);
    cfg.noise = NoiseConfig(o.ai);
    cfg.delta = o.delta;
    cfg.checkpoints = parse_checkpoints(o, 0.3, 15);
    cfg.n_trajectories = o.ntraj;
    cfg.master_seed = o.seed;
    cfg.n_threads = o.threads;
    const EnsembleMoments em = ensemble_moments(cfg);

    SeriesTable table = series_coefficients_via_recursion(2, 1000);
    BorelTable bt = tabulate_borel_sum(table, 2, 0.5 * std::sqrt(o.lambda));

    GroundState2D gs =
        ground_state_vector(build_fp_matrix(o.lambda, th, o.ai, o.N));
    ground_state_function(gs);
    const cplx spectral_m2 = ground_state_moment(gs, 2);

    BreakdownParams bp;
    bp.k_sigma = o.ksigma;
    bp.window = o.window;
    bp.absolute_floor = o.floor;
    const auto tc = detect_breakdown(
        em,
        [&bt, th](double t) {
            return borel_transform_from_table(bt, t, th).M;
        },
        bp);

    json meta = action_meta(o);
    meta["command"] = "compare";
    meta["ai"] = o.ai;
    meta["delta"] = o.delta;
    meta["ntraj"] = o.ntraj;
    meta["seed"] = o.seed;
    meta["N"] = o.N;
    meta["tc"] = nullptr;
    if (tc) meta["tc"] = *tc;
    meta["re_m2_spectral"] = spectral_m2.real();
    meta["im_m2_spectral"] = spectral_m2.imag();
    meta["E0"] = gs.E0.real();
    Sink s = open_sink(o.out);
    write_preamble(*s.out, meta);
    *s.out << "t,re_m2_langevin,im_m2_langevin,se_re_m2,se_im_m2,"
              "re_M2_borel,im_M2_borel,re_m2_spectral,im_m2_spectral\n";
    for (std::size_t i = 0; i < em.checkpoints.size(); ++i) {
        const double t = em.checkpoints[i];
        const cplx ref = borel_transform_from_table(bt, t, th).M;
        *s.out << fmt(t) << "," << fmt(em.m2[i].mean.real()) << ","
               << fmt(em.m2[i].mean.imag()) << ","
               << fmt(em.m2[i].std_error.real()) << ","
               << fmt(em.m2[i].std_error.imag()) << "," << fmt(ref.real())
               << "," << fmt(ref.imag()) << "," << fmt(spectral_m2.real())
               << "," << fmt(spectral_m2.imag()) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cxlab: complex-action numerical laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file");
    Options o;

    auto* series = app.add_subcommand("series", "exact moment series table");
    series->add_option("--p", o.p, "moment order (even)");
    series->add_option("--nterms", o.nterms, "highest series order");
    add_out_flag(series, o, "series.csv");
    series->callback([&o] { run_series(o); });

    auto* borel = app.add_subcommand("borel", "resummed moment curve");
    borel->add_option("--p", o.p, "moment order (2 or 4)");
    borel->add_option("--lambda", o.lambda, "quartic coupling");
    add_theta_flags(borel, o);
    borel->add_option("--nterms", o.borel_terms, "series terms in the sum");
    borel->add_option("--smax", o.smax, "quadrature cutoff");
    borel->add_option("--step", o.step, "quadrature step");
    borel->add_option("--tmax", o.tmax, "last time on the grid");
    borel->add_option("--npoints", o.npoints, "grid points");
    add_out_flag(borel, o, "borel.csv");
    borel->callback([&o] { run_borel(o); });

    auto* sim = app.add_subcommand("simulate", "Langevin ensemble moments");
    sim->add_option("--lambda", o.lambda, "quartic coupling");
    auto* om = sim->add_option("--omega", o.omega,
                               "quadratic frequency (switches the action)");
    om->each([&o](const std::string&) { o.quadratic = true; });
    add_theta_flags(sim, o);
    sim->add_option("--ai", o.ai, "imaginary noise strength");
    sim->add_option("--delta", o.delta, "nominal step size");
    sim->add_option("--ntraj", o.ntraj, "ensemble size")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "master seed");
    sim->add_option("--threads", o.threads, "worker threads");
    sim->add_option("--checkpoints", o.checkpoints,
                    "comma list of recording times");
    sim->add_option("--tfinal", o.tfinal, "horizon when no list is given");
    sim->add_option("--npoints", o.npoints, "grid points on (0, tfinal]");
    sim->add_flag("--histogram", o.histogram,
                  "record an endpoint density histogram instead of moments");
    sim->add_option("--xmin", o.xmin);
    sim->add_option("--xmax", o.xmax);
    sim->add_option("--ymin", o.ymin);
    sim->add_option("--ymax", o.ymax);
    sim->add_option("--nx", o.nx);
    sim->add_option("--ny", o.ny);
    sim->add_option("--ksigma", o.ksigma, "breakdown detection sigmas");
    sim->add_option("--window", o.window, "breakdown confirmation window");
    sim->add_option("--floor", o.floor, "breakdown absolute floor");
    add_out_flag(sim, o, "simulate.csv");
    sim->callback([&o] { run_simulate(o); });

    auto* bfit = app.add_subcommand("breakdown-fit",
                                    "power-law fit of breakdown times");
    bfit->add_option("--points", o.points, "comma list of ai:tc pairs")
        ->required();
    add_out_flag(bfit, o, "breakdown_fit.csv");
    bfit->callback([&o] { run_breakdown_fit(o); });

    auto* s1 = app.add_subcommand("spectrum-1d",
                                  "1D Hamiltonian levels and norms");
    s1->add_option("--lambda", o.lambda, "quartic coupling");
    add_theta_flags(s1, o);
    s1->add_option("--n", o.N, "basis truncation");
    s1->add_option("--levels", o.levels, "rows to emit");
    add_out_flag(s1, o, "spectrum_1d.csv");
    // tables live at the fully rotated angle
    s1->preparse_callback([&o](std::size_t) { o.theta = M_PI / 2.0; });
    s1->callback([&o] { run_spectrum_1d(o); });

    auto* s2 = app.add_subcommand("spectrum-2d",
                                  "2D Fokker-Planck spectrum or ground state");
    s2->add_option("--lambda", o.lambda, "quartic coupling");
    add_theta_flags(s2, o);
    s2->add_option("--ai", o.ai, "imaginary noise strength");
    s2->add_option("--n", o.N, "basis truncation per axis");
    s2->add_option("--levels", o.levels, "eigenvalues to emit");
    s2->add_flag("--grid", o.grid, "emit the ground-state grid instead");
    s2->add_option("--npts", o.npts, "grid points per axis");
    s2->add_option("--half-width", o.half_width,
                   "grid half width (0 = automatic)");
    add_out_flag(s2, o, "spectrum_2d.csv");
    s2->preparse_callback([&o](std::size_t) {
        o.theta = M_PI / 2.0;
        o.ai = 1.0;
        o.N = 50;
        o.levels = 8;
    });
    s2->callback([&o] { run_spectrum_2d(o); });

    auto* harm = app.add_subcommand("harmonic",
                                    "quadratic-action reference curves");
    harm->add_option("--omega", o.omega, "frequency");
    add_theta_flags(harm, o);
    harm->add_option("--ai", o.ai, "imaginary noise strength");
    harm->add_option("--tmax", o.tmax, "last time on the grid");
    harm->add_option("--npoints", o.npoints, "grid intervals");
    add_out_flag(harm, o, "harmonic.csv");
    harm->preparse_callback([&o](std::size_t) {
        o.theta = M_PI / 2.0;
        o.ai = 1.0;
    });
    harm->callback([&o] { run_harmonic(o); });

    auto* cmp = app.add_subcommand(
        "compare", "joined Langevin / Borel / spectral moment curves");
    cmp->add_option("--lambda", o.lambda, "quartic coupling");
    add_theta_flags(cmp, o);
    cmp->add_option("--ai", o.ai, "imaginary noise strength");
    cmp->add_option("--delta", o.delta, "nominal step size");
    cmp->add_option("--ntraj", o.ntraj, "ensemble size")
        ->check(CLI::PositiveNumber);
    cmp->add_option("--seed", o.seed, "master seed");
    cmp->add_option("--threads", o.threads, "worker threads");
    cmp->add_option("--checkpoints", o.checkpoints,
                    "comma list of recording times");
    cmp->add_option("--tfinal", o.tfinal, "horizon when no list is given");
    cmp->add_option("--npoints", o.npoints, "grid points on (0, tfinal]");
    cmp->add_option("--n", o.N, "2D basis truncation per axis");
    cmp->add_option("--ksigma", o.ksigma, "breakdown detection sigmas");
    cmp->add_option("--window", o.window, "breakdown confirmation window");
    cmp->add_option("--floor", o.floor, "breakdown absolute floor");
    add_out_flag(cmp, o, "compare.csv");
    // defaults favor the rotated quartic where the routes disagree
    cmp->preparse_callback([&o](std::size_t) {
        o.theta = M_PI / 2.0;
        o.ai = 1.0;
        o.ntraj = 20000;
        o.tfinal = 0.3;
        o.npoints = 15;
        o.N = 50;
    });
    cmp->callback([&o] { run_compare(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        if (app.get_subcommands().empty()) std::cerr << app.help();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
