#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "parallel.hpp"
#include "simulation.hpp"
#include "spectral.hpp"
#include "stats.hpp"

namespace kclust {

enum class SweepVariable { Gamma, NParticles, Beta };

struct SweepPlan {
    SweepVariable variable = SweepVariable::Gamma;
    std::vector<double> values;
    std::vector<int> n_trajectories; // one entry for all values, or one per value
    SimConfig base;
    std::uint64_t seed_base = 1;
    int threads = 1;

    int trajectories_for(std::size_t i) const
    {
        if (n_trajectories.empty()) throw std::invalid_argument("sweep: n_trajectories missing");
        const int n = n_trajectories.size() == 1 ? n_trajectories[0] : n_trajectories.at(i);
        if (n < 1) throw std::invalid_argument("sweep: n_trajectories must be >= 1");
        return n;
    }

    void validate() const
    {
        if (values.empty()) throw std::invalid_argument("sweep: no values");
        if (n_trajectories.size() != 1 && n_trajectories.size() != values.size())
            throw std::invalid_argument("sweep: n_trajectories must have one entry or one per value");
        for (std::size_t i = 0; i < values.size(); ++i) trajectories_for(i);
        base.validate();
    }

    SimConfig config_for(double value) const
    {
        SimConfig c = base;
        switch (variable) {
        case SweepVariable::Gamma: c.gamma = value; break;
        case SweepVariable::NParticles: c.n_particles = int(std::lround(value)); break;
        case SweepVariable::Beta: c.beta = value; break;
        }
        return c;
    }
};

struct SeedRange {
    std::uint64_t first = 0, last = 0;
};

// Runs one ensemble per value; job(value_index, config_with_seed) -> Result. Seeds are
// seed_base + global trajectory index, results ordered by that index.
template <class Result, class Job>
std::vector<std::vector<Result>> run_ensembles(const SweepPlan& plan, const std::vector<SimConfig>& configs, Job job,
                                               std::vector<SeedRange>& seeds)
{
    struct Task {
        std::size_t value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    seeds.clear();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const int n = plan.trajectories_for(i);
        seeds.push_back({plan.seed_base + tasks.size(), plan.seed_base + tasks.size() + n - 1});
        for (int k = 0; k < n; ++k) tasks.push_back({i, plan.seed_base + tasks.size()});
    }
    std::vector<Result> flat(tasks.size());
    parallel_for(int(tasks.size()), plan.threads, [&](int t) {
        SimConfig c = configs[tasks[t].value];
        c.seed = tasks[t].seed;
        flat[t] = job(tasks[t].value, c);
    });
    std::vector<std::vector<Result>> out(configs.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) out[tasks[t].value].push_back(std::move(flat[t]));
    return out;
}

// First time d_com drops below the threshold, or nullopt within the step budget.
inline std::optional<double> first_convergence(const SimConfig& c, double threshold)
{
    std::optional<double> hit;
    RunOptions o;
    o.keep_samples = false;
    o.observer = [&](const ParticleState&, const ObservableSample& s) {
        if (!s.com_degenerate && s.d_com < threshold) {
            hit = s.time;
            return false;
        }
        return true;
    };
    SimConfig cc = c;
    cc.dump_trajectory = false;
    run(cc, o);
    return hit;
}

struct ConvergenceRow {
    double value = 0.0; // swept variable
    MeanCi t_star;      // over trajectories that reached the threshold
    int n_traj = 0;
    int n_reached = 0;
    SeedRange seeds;
    bool flagged() const { return n_reached == 0; }
};

// Convergence times t*_s per swept value, h scaled as h_base min(gamma, 1/gamma).
inline std::vector<ConvergenceRow> run_convergence_sweep(SweepPlan plan, double threshold)
{
    plan.base.auto_scale_step = true;
    plan.validate();
    std::vector<SimConfig> cfgs;
    for (double v : plan.values) cfgs.push_back(plan.config_for(v));
    std::vector<SeedRange> seeds;
    auto res = run_ensembles<std::optional<double>>(
        plan, cfgs, [&](std::size_t, const SimConfig& c) { return first_convergence(c, threshold); }, seeds);
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        ConvergenceRow r;
        r.value = plan.values[i];
        r.n_traj = int(res[i].size());
        r.seeds = seeds[i];
        std::vector<double> ts;
        for (auto& t : res[i])
            if (t) ts.push_back(*t);
        r.n_reached = int(ts.size());
        r.t_star = mean_ci(ts);
        rows.push_back(r);
    }
    return rows;
}

// Dimensionless DBSCAN parameters for onset detection.
struct OnsetDetection {
    double eps_tilde = 0.05;
    double min_pts_tilde = 0.18;

    // 1D: eps = 0.5 at L = 10, N_min = 90 N / 500. 2D and 3D: (0.025, 0.025).
    static OnsetDetection defaults(int dims, double box)
    {
        if (dims == 1) return {0.5 / box, 90.0 / 500.0};
        return {0.025, 0.025};
    }
};

struct OnsetOutcome {
    std::optional<Onset> onset;
    std::vector<Frame> frames; // when the base config asks for a dump
};

// Runs until the first sampled frame with a DBSCAN cluster.
inline OnsetOutcome first_onset(const SimConfig& c, const OnsetDetection& det)
{
    OnsetOutcome out;
    const auto prm = DbscanParams::dimensionless(det.eps_tilde, det.min_pts_tilde, c.box, c.n_particles);
    RunOptions o;
    o.keep_samples = false;
    o.observer = [&](const ParticleState& s, const ObservableSample&) {
        const auto lab = dbscan(s, prm);
        if (lab.n_clusters > 0) {
            out.onset = Onset{s.time, lab.n_clusters};
            return false;
        }
        return true;
    };
    auto rec = run(c, o);
    out.frames = std::move(rec.frames);
    return out;
}

struct OnsetRow {
    int n_particles = 0;
    MeanCi t_cl;
    int n_traj = 0;
    int n_detected = 0;
    int n_initial = 0; // onsets on the initial frame: detection parameters not tuned for this N
    SeedRange seeds;
};

struct OnsetSweep {
    std::vector<OnsetRow> rows;
    std::optional<FitResult> fit; // t_cl vs ln N over N >= n_fit_min
    std::vector<std::vector<OnsetOutcome>> outcomes;
};

inline OnsetSweep run_onset_sweep(SweepPlan plan, const OnsetDetection& det, int n_fit_min = 600)
{
    plan.variable = SweepVariable::NParticles;
    plan.validate();
    std::vector<SimConfig> cfgs;
    for (double v : plan.values) cfgs.push_back(plan.config_for(v));
    std::vector<SeedRange> seeds;
    OnsetSweep sw;
    sw.outcomes = run_ensembles<OnsetOutcome>(
        plan, cfgs, [&](std::size_t, const SimConfig& c) { return first_onset(c, det); }, seeds);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        OnsetRow r;
        r.n_particles = cfgs[i].n_particles;
        r.n_traj = int(sw.outcomes[i].size());
        r.seeds = seeds[i];
        std::vector<double> ts;
        for (auto& o : sw.outcomes[i])
            if (o.onset) {
                ts.push_back(o.onset->time);
                if (o.onset->time == 0.0) ++r.n_initial;
            }
        r.n_detected = int(ts.size());
        r.t_cl = mean_ci(ts);
        if (r.n_detected > 0 && r.n_particles >= n_fit_min) {
            xs.push_back(r.n_particles);
            ys.push_back(r.t_cl.mean);
        }
        sw.rows.push_back(r);
    }
    if (xs.size() >= 3) sw.fit = fit_log(xs, ys);
    return sw;
}

struct CriticalRow {
    double sigma2 = 0.0;
    double beta = 0.0;
    MeanCi t_star;
    int n_traj = 0;
    int n_reached = 0;
    SeedRange seeds;
    bool diverged() const { return n_reached < n_traj; }
};

struct CriticalReference {
    double sigma2 = 0.0;
    std::optional<double> spectral; // bisection on the linearised operator
    double closed_form = 0.0;       // L / (sqrt(2 pi) sigma)
};

struct CriticalScan {
    std::vector<CriticalRow> rows;
    std::vector<CriticalReference> references;
};

// t*_s with s = s_factor sigma^2 on a grid of (sigma^2, beta); Gaussian potential in the base config.
inline CriticalScan run_critical_scan(SweepPlan plan, const std::vector<double>& sigma2s, double s_factor = 1.43,
                                      bool spectral_reference = true)
{
    plan.variable = SweepVariable::Beta;
    if (sigma2s.empty()) throw std::invalid_argument("critical scan: no sigma2 values");
    if (plan.base.dims != 1) throw std::invalid_argument("critical scan: 1D only");
    plan.base.auto_scale_step = true;
    SweepPlan flat = plan;
    flat.values.clear();
    std::vector<SimConfig> cfgs;
    std::vector<int> ntraj;
    for (std::size_t si = 0; si < sigma2s.size(); ++si)
        for (std::size_t bi = 0; bi < plan.values.size(); ++bi) {
            SimConfig c = plan.config_for(plan.values[bi]);
            c.potential = PotentialSpec::gaussian(sigma2s[si]);
            cfgs.push_back(c);
            flat.values.push_back(plan.values[bi]);
            ntraj.push_back(plan.trajectories_for(bi));
        }
    flat.n_trajectories = ntraj;
    flat.validate();
    std::vector<SeedRange> seeds;
    auto res = run_ensembles<std::optional<double>>(
        flat, cfgs,
        [&](std::size_t, const SimConfig& c) { return first_convergence(c, s_factor * c.potential.sigma2); }, seeds);
    CriticalScan out;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        CriticalRow r;
        r.sigma2 = cfgs[i].potential.sigma2;
        r.beta = cfgs[i].beta;
        r.n_traj = int(res[i].size());
        r.seeds = seeds[i];
        std::vector<double> ts;
        for (auto& t : res[i])
            if (t) ts.push_back(*t);
        r.n_reached = int(ts.size());
        r.t_star = mean_ci(ts);
        out.rows.push_back(r);
    }
    for (double s2 : sigma2s) {
        CriticalReference ref;
        ref.sigma2 = s2;
        ref.closed_form = plan.base.box / (std::sqrt(2.0 * std::numbers::pi * s2));
        if (spectral_reference) {
            StabilityConfig sc;
            sc.potential = PotentialSpec::gaussian(s2);
            sc.box = plan.base.box;
            sc.gamma = 1.0;
            ref.spectral = critical_beta(sc);
        }
        out.references.push_back(ref);
    }
    return out;
}

// 2D Gaussian threshold L^2 / (2 pi sigma^2): the long-wave limit of 1 / |W_hat(k)| in 2D.
// At k = 2 pi / L the same ratio carries an extra factor e^{sigma^2 k^2 / 2}.
inline double gaussian_2d_threshold_closed_form(double sigma2, double box)
{
    return box * box / (2.0 * std::numbers::pi * sigma2);
}

} // namespace kclust
