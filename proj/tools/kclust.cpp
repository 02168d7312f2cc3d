#include <kclust/experiments.hpp>
#include <kclust/fluctuations.hpp>
#include <kclust/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace kclust;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string potential = "gaussian";
    double sigma2 = 0.5, morse_a = 2.0, morse_de = 1.0, gem_alpha = 4.0;
    int n = 200, dims = 1;
    double box = 10.0, beta = 25.0, gamma = 1.0, h = 1.0;
    long steps = 1000, print_every = 100;
    std::string integrator = "baoab";
    std::uint64_t seed = 1;
    std::string out = ".";
    bool dump = false, scale_h = false;
    int threads = 1;

    // subcommand specific
    std::vector<double> gammas, betas, times, values, sigma2s;
    std::vector<int> n_traj = {10};
    int hermite_dim = 100, n_fourier = 30, dx_points = 201, n_fit_min = 600;
    double threshold = std::sqrt(0.5), s_factor = 1.43;
    double eps_tilde = -1.0, min_pts_tilde = -1.0;
    std::vector<std::string> traj_files;
};

void add_common(CLI::App* app, Options& o)
{
    app->add_option("--potential", o.potential, "gaussian, morse, gem or free")
        ->check(CLI::IsMember({"gaussian", "morse", "gem", "free"}));
    app->add_option("--sigma2", o.sigma2, "Gaussian / GEM width sigma^2");
    app->add_option("--morse-a", o.morse_a);
    app->add_option("--morse-de", o.morse_de);
    app->add_option("--gem-alpha", o.gem_alpha);
    app->add_option("--n", o.n, "particles");
    app->add_option("--dims", o.dims);
    app->add_option("--box", o.box);
    app->add_option("--beta", o.beta);
    app->add_option("--gamma", o.gamma);
    app->add_option("--h", o.h, "step size (base step when --scale-h is set)");
    app->add_flag("--scale-h", o.scale_h, "use h * min(gamma, 1/gamma)");
    app->add_option("--steps", o.steps);
    app->add_option("--print-every", o.print_every);
    app->add_option("--integrator", o.integrator)->check(CLI::IsMember({"baoab", "obabo", "abo", "ubu"}));
    app->add_option("--seed", o.seed, "seed, or first seed of a sweep");
    app->add_option("--out", o.out, "output directory");
    app->add_flag("--dump-traj", o.dump);
    app->add_option("--threads", o.threads);
}

PotentialSpec potential_of(const Options& o)
{
    if (o.potential == "gaussian") return PotentialSpec::gaussian(o.sigma2);
    if (o.potential == "morse") return PotentialSpec::morse(o.morse_a, o.morse_de);
    if (o.potential == "gem") return PotentialSpec::gem(o.sigma2, o.gem_alpha);
    return PotentialSpec::free();
}

SimConfig sim_config(const Options& o)
{
    SimConfig c;
    c.n_particles = o.n;
    c.dims = o.dims;
    c.box = o.box;
    c.beta = o.beta;
    c.gamma = o.gamma;
    c.h = o.h;
    c.auto_scale_step = o.scale_h;
    c.n_steps = o.steps;
    c.print_every = o.print_every;
    c.integrator = parse_integrator(o.integrator);
    c.potential = potential_of(o);
    c.seed = o.seed;
    c.dump_trajectory = o.dump;
    c.validate();
    return c;
}

StabilityConfig stability_config(const Options& o)
{
    StabilityConfig c;
    c.potential = potential_of(o);
    c.box = o.box;
    c.beta = o.beta;
    c.gamma = o.gamma;
    c.hermite_dim = o.hermite_dim;
    c.n_fourier = o.n_fourier;
    c.validate();
    return c;
}

std::ofstream open_out(const Options& o, const std::string& name)
{
    fs::create_directories(o.out);
    std::ofstream f(fs::path(o.out) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(o.out) / name).string());
    return f;
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

void write_manifest_file(const Options& o, const std::string& command, Manifest kv)
{
    kv.insert(kv.begin(), {"command", command});
    auto f = open_out(o, "manifest.txt");
    write_manifest(f, kv);
}

std::string join(const auto& xs)
{
    std::string s;
    for (auto& x : xs) {
        if (!s.empty()) s += ' ';
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::string>)
            s += x;
        else
            s += fmt_num(double(x));
    }
    return s;
}

void dump_frames(const Options& o, const std::string& name, const std::vector<Frame>& frames, int dims)
{
    auto f = open_out(o, name);
    for (auto& fr : frames) write_frame(f, fr, dims);
}

int cmd_simulate(const Options& o)
{
    const auto c = sim_config(o);
    const auto rec = run(c);
    auto f = open_out(o, "observables.csv");
    write_observables(f, rec.samples);
    if (c.dump_trajectory) dump_frames(o, "traj_" + std::to_string(c.seed) + ".txt", rec.frames, c.dims);
    auto kv = describe(c);
    kv.push_back({"steps_taken", std::to_string(rec.steps_taken)});
    write_manifest_file(o, "simulate", kv);
    return 0;
}

int cmd_stability(Options o)
{
    if (o.gammas.empty()) o.gammas = {o.gamma};
    if (o.betas.empty()) o.betas = {o.beta};
    auto f = open_out(o, "stability.csv");
    f << "gamma,beta,psi_max\n";
    for (double g : o.gammas)
        for (double b : o.betas) {
            auto c = stability_config(o);
            c.gamma = g;
            c.beta = b;
            f << fmt_num(g) << ',' << fmt_num(b) << ',' << fmt_num(max_growth_rate(c)) << '\n';
        }
    auto fc = open_out(o, "critical_beta.csv");
    fc << "potential,gamma,beta_c\n";
    for (double g : o.gammas) {
        auto c = stability_config(o);
        c.gamma = g;
        fc << o.potential << ',' << fmt_num(g) << ',' << fmt_opt(critical_beta(c)) << '\n';
    }
    const auto c = stability_config(o);
    write_manifest_file(o, "stability",
                        {{"potential", o.potential},
                         {"box", fmt_num(o.box)},
                         {"hermite_dim", std::to_string(c.hermite_dim)},
                         {"n_fourier", std::to_string(c.n_fourier)},
                         {"gammas", join(o.gammas)},
                         {"betas", join(o.betas)}});
    return 0;
}

int cmd_fluctuations(Options o)
{
    if (o.times.empty()) o.times = {1, 5, 10, 20};
    if (o.gammas.empty()) o.gammas = {o.gamma};
    if (o.dx_points < 2) throw std::invalid_argument("--dx-points must be >= 2");
    {
        CovarianceProfile prof(stability_config(o));
        std::vector<double> dx(o.dx_points);
        for (int i = 0; i < o.dx_points; ++i) dx[i] = o.box * i / (o.dx_points - 1.0);
        auto f = open_out(o, "covariance.csv");
        f << "t,dx,covariance\n";
        for (double t : o.times) {
            const auto cov = prof.at(t, dx);
            for (int i = 0; i < o.dx_points; ++i) f << fmt_num(t) << ',' << fmt_num(dx[i]) << ',' << fmt_num(cov[i]) << '\n';
        }
    }
    auto fa = open_out(o, "amplitude.csv");
    fa << "t,amplitude,gamma\n";
    for (double g : o.gammas) {
        auto c = stability_config(o);
        c.gamma = g;
        CovarianceProfile prof(c);
        for (double t : o.times) fa << fmt_num(t) << ',' << fmt_num(prof.amplitude(t)) << ',' << fmt_num(g) << '\n';
    }
    write_manifest_file(o, "fluctuations",
                        {{"potential", o.potential},
                         {"box", fmt_num(o.box)},
                         {"beta", fmt_num(o.beta)},
                         {"gamma", fmt_num(o.gamma)},
                         {"hermite_dim", std::to_string(o.hermite_dim)},
                         {"n_fourier", std::to_string(o.n_fourier)},
                         {"times", join(o.times)},
                         {"gammas", join(o.gammas)}});
    return 0;
}

int cmd_detect(const Options& o)
{
    if (o.traj_files.empty()) throw std::invalid_argument("detect: no trajectory files");
    auto f = open_out(o, "detect.csv");
    f << "trajectory_id,onset_time,n_clusters_at_onset\n";
    Manifest kv = {{"box", fmt_num(o.box)}};
    for (auto& path : o.traj_files) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read " + path);
        const auto tf = read_frames(in, path);
        if (tf.frames.empty()) throw std::runtime_error(path + ": no frames");
        auto det = OnsetDetection::defaults(tf.dims, o.box);
        if (o.eps_tilde > 0) det.eps_tilde = o.eps_tilde;
        if (o.min_pts_tilde > 0) det.min_pts_tilde = o.min_pts_tilde;
        const auto on = onset_time(tf.frames, tf.dims, o.box, det.eps_tilde, det.min_pts_tilde);
        const std::string id = fs::path(path).stem().string();
        f << id << ',' << (on ? fmt_num(on->time) : "NA") << ',' << (on ? std::to_string(on->n_clusters) : "NA") << '\n';
        kv.push_back({"eps_tilde." + id, fmt_num(det.eps_tilde)});
        kv.push_back({"min_pts_tilde." + id, fmt_num(det.min_pts_tilde)});
    }
    write_manifest_file(o, "detect", kv);
    return 0;
}

SweepPlan plan_of(const Options& o, SweepVariable v, std::vector<double> values)
{
    SweepPlan p;
    p.variable = v;
    p.values = std::move(values);
    p.n_trajectories = o.n_traj;
    p.base = sim_config(o);
    p.seed_base = o.seed;
    p.threads = o.threads;
    return p;
}

Manifest sweep_manifest(const SweepPlan& p, const Options& o)
{
    auto kv = describe(p.base);
    kv.erase(std::remove_if(kv.begin(), kv.end(), [](auto& e) { return e.first == "seed"; }), kv.end());
    kv.push_back({"seed_base", std::to_string(p.seed_base)});
    kv.push_back({"values", join(p.values)});
    kv.push_back({"n_trajectories", join(o.n_traj)});
    kv.push_back({"threads", std::to_string(o.threads)});
    return kv;
}

int cmd_sweep_convergence(Options o)
{
    if (o.gammas.empty()) o.gammas = {0.5, 1, 2, 4};
    const auto plan = plan_of(o, SweepVariable::Gamma, o.gammas);
    if (auto c = stability_config(o); o.dims == 1 && max_growth_rate(c) == 0.0)
        std::cerr << "warning: beta is below the spectral threshold; convergence is not expected\n";
    const auto rows = run_convergence_sweep(plan, o.threshold);
    auto f = open_out(o, "convergence.csv");
    f << "gamma,mean_t_star,ci95,n_traj,n_reached,seed_first,seed_last\n";
    int flagged = 0;
    for (auto& r : rows) {
        f << fmt_num(r.value) << ',' << (r.n_reached ? fmt_num(r.t_star.mean) : "NA") << ','
          << (r.n_reached ? fmt_num(r.t_star.ci95) : "NA") << ',' << r.n_traj << ',' << r.n_reached << ',' << r.seeds.first
          << ',' << r.seeds.last << '\n';
        flagged += r.flagged();
    }
    auto kv = sweep_manifest(plan, o);
    kv.push_back({"threshold", fmt_num(o.threshold)});
    kv.push_back({"h_scaling", "h * min(gamma, 1/gamma)"});
    write_manifest_file(o, "sweep-convergence", kv);
    if (flagged) {
        std::cerr << "sweep-convergence: " << flagged << " value(s) with no trajectory below the threshold\n";
        return 3;
    }
    return 0;
}

int cmd_sweep_onset(Options o)
{
    if (o.values.empty()) o.values = {200, 400, 600, 800};
    auto plan = plan_of(o, SweepVariable::NParticles, o.values);
    auto det = OnsetDetection::defaults(o.dims, o.box);
    if (o.eps_tilde > 0) det.eps_tilde = o.eps_tilde;
    if (o.min_pts_tilde > 0) det.min_pts_tilde = o.min_pts_tilde;
    const auto sw = run_onset_sweep(plan, det, o.n_fit_min);
    auto f = open_out(o, "onset.csv");
    f << "n_particles,mean_t_cl,ci95,n_traj,n_detected,n_initial,seed_first,seed_last\n";
    int flagged = 0;
    for (auto& r : sw.rows) {
        f << r.n_particles << ',' << (r.n_detected ? fmt_num(r.t_cl.mean) : "NA") << ','
          << (r.n_detected ? fmt_num(r.t_cl.ci95) : "NA") << ',' << r.n_traj << ',' << r.n_detected << ',' << r.n_initial
          << ',' << r.seeds.first << ',' << r.seeds.last << '\n';
        flagged += r.n_detected == 0 || r.n_initial > 0;
    }
    StabilityConfig sc = stability_config(o);
    sc.hermite_dim = 40;
    const double psi = o.dims == 1 ? max_growth_rate(sc) : 0.0;
    auto ff = open_out(o, "onset_fit.csv");
    ff << "slope,slope_ci95,intercept,intercept_ci95,n_points,n_fit_min,predicted_slope\n";
    if (sw.fit)
        ff << fmt_num(sw.fit->slope) << ',' << fmt_num(sw.fit->slope_ci95) << ',' << fmt_num(sw.fit->intercept) << ','
           << fmt_num(sw.fit->intercept_ci95) << ',' << sw.fit->n << ',' << o.n_fit_min << ','
           << (psi > 0 ? fmt_num(1 / (2 * psi)) : "NA") << '\n';
    if (plan.base.dump_trajectory)
        for (std::size_t i = 0; i < sw.outcomes.size(); ++i)
            for (std::size_t k = 0; k < sw.outcomes[i].size(); ++k)
                dump_frames(o, "traj_" + std::to_string(sw.rows[i].seeds.first + k) + ".txt", sw.outcomes[i][k].frames,
                            o.dims);
    auto kv = sweep_manifest(plan, o);
    kv.push_back({"eps_tilde", fmt_num(det.eps_tilde)});
    kv.push_back({"min_pts_tilde", fmt_num(det.min_pts_tilde)});
    kv.push_back({"n_fit_min", std::to_string(o.n_fit_min)});
    write_manifest_file(o, "sweep-onset", kv);
    if (flagged) {
        std::cerr << "sweep-onset: " << flagged << " row(s) with no onset or an onset on the initial frame\n";
        return 3;
    }
    if (!sw.fit) {
        std::cerr << "sweep-onset: fewer than 3 particle counts >= n_fit_min; no fit\n";
        return 3;
    }
    return 0;
}

int cmd_sweep_critical(Options o)
{
    if (o.sigma2s.empty()) o.sigma2s = {o.sigma2};
    if (o.betas.empty()) throw std::invalid_argument("sweep-critical: --betas is required");
    o.potential = "gaussian";
    auto plan = plan_of(o, SweepVariable::Beta, o.betas);
    const auto scan = run_critical_scan(plan, o.sigma2s, o.s_factor);
    auto f = open_out(o, "critical_scan.csv");
    f << "sigma2,beta,mean_t_star,ci95,n_traj,n_reached,diverged,seed_first,seed_last\n";
    for (auto& r : scan.rows)
        f << fmt_num(r.sigma2) << ',' << fmt_num(r.beta) << ',' << (r.n_reached ? fmt_num(r.t_star.mean) : "NA") << ','
          << (r.n_reached ? fmt_num(r.t_star.ci95) : "NA") << ',' << r.n_traj << ',' << r.n_reached << ','
          << (r.diverged() ? 1 : 0) << ',' << r.seeds.first << ',' << r.seeds.last << '\n';
    auto fr = open_out(o, "critical_reference.csv");
    fr << "sigma2,beta_c_spectral,beta_c_closed_form\n";
    for (auto& r : scan.references) fr << fmt_num(r.sigma2) << ',' << fmt_opt(r.spectral) << ',' << fmt_num(r.closed_form) << '\n';
    auto kv = sweep_manifest(plan, o);
    kv.push_back({"sigma2s", join(o.sigma2s)});
    kv.push_back({"s_factor", fmt_num(o.s_factor)});
    write_manifest_file(o, "sweep-critical", kv);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cluster formation in kinetic Langevin particle systems"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    Options o;

    auto* sim = app.add_subcommand("simulate", "run one trajectory, write observables.csv");
    add_common(sim, o);

    auto* stab = app.add_subcommand("stability", "growth rates on a (gamma, beta) grid and beta_c");
    add_common(stab, o);
    stab->add_option("--gammas", o.gammas);
    stab->add_option("--betas", o.betas);
    stab->add_option("--hermite-dim", o.hermite_dim);
    stab->add_option("--n-fourier", o.n_fourier);

    auto* fl = app.add_subcommand("fluctuations", "linearised covariance and its oscillation amplitude");
    add_common(fl, o);
    fl->add_option("--times", o.times);
    fl->add_option("--gammas", o.gammas, "frictions for amplitude.csv");
    fl->add_option("--dx-points", o.dx_points);
    fl->add_option("--hermite-dim", o.hermite_dim, "default 40 here");
    fl->add_option("--n-fourier", o.n_fourier);

    auto* det = app.add_subcommand("detect", "DBSCAN onset times of trajectory dumps");
    add_common(det, o);
    det->add_option("files", o.traj_files, "trajectory dump files")->required();
    det->add_option("--eps-tilde", o.eps_tilde, "eps / L (default depends on dims)");
    det->add_option("--min-pts-tilde", o.min_pts_tilde, "min_pts / N");

    auto* sc = app.add_subcommand("sweep-convergence", "t*_s ensembles over gamma");
    add_common(sc, o);
    sc->add_option("--gammas", o.gammas);
    sc->add_option("--n-traj", o.n_traj, "one value, or one per gamma");
    sc->add_option("--threshold", o.threshold, "d_com threshold s");

    auto* so = app.add_subcommand("sweep-onset", "onset times over N and the t_cl vs ln N fit");
    add_common(so, o);
    so->add_option("--ns", o.values, "particle counts");
    so->add_option("--n-traj", o.n_traj);
    so->add_option("--n-fit-min", o.n_fit_min);
    so->add_option("--eps-tilde", o.eps_tilde);
    so->add_option("--min-pts-tilde", o.min_pts_tilde);

    auto* scr = app.add_subcommand("sweep-critical", "t* over (sigma^2, beta) to locate the divergence");
    add_common(scr, o);
    scr->add_option("--sigma2s", o.sigma2s);
    scr->add_option("--betas", o.betas)->required();
    scr->add_option("--n-traj", o.n_traj, "default 5 here");
    scr->add_option("--s-factor", o.s_factor, "threshold s = s_factor sigma^2");

    CLI11_PARSE(app, argc, argv);
    // per-subcommand defaults that differ from the simulate defaults
    auto fallback = [](CLI::App* a, const char* flag, auto& var, auto value) {
        if (a->parsed() && a->count(flag) == 0) var = value;
    };
    // step budgets: at beta = 25, gamma = 1, N = 200, h = 1 every seed of 10 converged by t = 5000
    fallback(sc, "--steps", o.steps, 20000L);
    fallback(sc, "--print-every", o.print_every, 10L);
    fallback(so, "--h", o.h, 0.5);
    fallback(so, "--steps", o.steps, 2000L);
    fallback(so, "--print-every", o.print_every, 1L);
    fallback(scr, "--gamma", o.gamma, 0.01);
    fallback(scr, "--n-traj", o.n_traj, std::vector<int>{5});
    fallback(scr, "--n", o.n, 1000);
    fallback(scr, "--steps", o.steps, 200000L);
    fallback(scr, "--print-every", o.print_every, 100L);
    if (fl->parsed() && fl->count("--hermite-dim") == 0) o.hermite_dim = 40;

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (stab->parsed()) return cmd_stability(o);
        if (fl->parsed()) return cmd_fluctuations(o);
        if (det->parsed()) return cmd_detect(o);
        if (sc->parsed()) return cmd_sweep_convergence(o);
        if (so->parsed()) return cmd_sweep_onset(o);
        if (scr->parsed()) return cmd_sweep_critical(o);
    } catch (const std::exception& e) {
        std::cerr << "kclust: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
