#include <gtest/gtest.h>

#include <kclust/experiments.hpp>

#include <random>

using namespace kclust;

TEST(FitLog, ExactLine)
{
    std::vector<double> xs = {100, 200, 400, 800}, ys;
    for (double x : xs) ys.push_back(1.5 + 2.0 * std::log(x));
    const auto f = fit_log(xs, ys);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.5, 1e-10);
    EXPECT_NEAR(f.slope_ci95, 0.0, 1e-9);
    EXPECT_EQ(f.n, 4);
}

TEST(FitLog, ConstantData)
{
    const auto f = fit_log({1, 2, 3, 4}, {5, 5, 5, 5});
    EXPECT_NEAR(f.slope, 0.0, 1e-14);
    EXPECT_NEAR(f.intercept, 5.0, 1e-14);
}

TEST(FitLog, DoublingGridIsLinearInIndex)
{
    // ln 2^j = j ln 2, so the slope on ln N equals the slope on j divided by ln 2
    std::vector<double> xs, ys;
    for (int j = 0; j < 6; ++j) {
        xs.push_back(std::ldexp(100.0, j));
        ys.push_back(3.0 * j + (j % 2 ? 0.1 : -0.1));
    }
    const auto f = fit_log(xs, ys);
    double mj = 2.5, sxy = 0, sxx = 0;
    for (int j = 0; j < 6; ++j) sxy += (j - mj) * ys[j], sxx += (j - mj) * (j - mj);
    EXPECT_NEAR(f.slope, sxy / sxx / std::log(2.0), 1e-12);
}

TEST(FitLog, CoverageOfTheSlopeInterval)
{
    std::mt19937_64 g(17);
    std::normal_distribution<double> nd(0, 0.5);
    int covered = 0;
    const int repeats = 400;
    for (int r = 0; r < repeats; ++r) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 60; ++i) {
            xs.push_back(50.0 + 25.0 * i);
            ys.push_back(1.0 + 0.8 * std::log(xs.back()) + nd(g));
        }
        const auto f = fit_log(xs, ys);
        covered += std::abs(f.slope - 0.8) <= f.slope_ci95;
    }
    // binomial(400, 0.95): sd ~ 0.011
    EXPECT_NEAR(covered / double(repeats), 0.95, 0.035);
}

TEST(FitLog, BadInput)
{
    EXPECT_THROW(fit_log({1, 2}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(fit_log({2, 2, 2}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(fit_log({1, -2, 3}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(fit_log({1, 2, 3}, {1, 2}), std::invalid_argument);
}

TEST(MeanCi, Values)
{
    const auto m = mean_ci({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.ci95, z95 * std::sqrt((5.0 / 3.0) / 4.0), 1e-12);
    EXPECT_EQ(mean_ci({}).n, 0);
    EXPECT_EQ(mean_ci({3.0}).ci95, 0.0);
}

TEST(Sweep, SeedsAreContiguousAndResultsReproducible)
{
    SweepPlan plan;
    plan.variable = SweepVariable::Gamma;
    plan.values = {0.5, 1.0, 2.0};
    plan.n_trajectories = {2, 3, 1};
    plan.base.n_particles = 40;
    plan.base.n_steps = 200;
    plan.base.print_every = 10;
    plan.base.h = 0.5;
    plan.seed_base = 100;
    const auto rows = run_convergence_sweep(plan, 1.5);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].seeds.first, 100u);
    EXPECT_EQ(rows[0].seeds.last, 101u);
    EXPECT_EQ(rows[1].seeds.first, 102u);
    EXPECT_EQ(rows[2].seeds.last, 105u);
    EXPECT_EQ(rows[1].n_traj, 3);

    plan.threads = 3;
    const auto again = run_convergence_sweep(plan, 1.5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].n_reached, again[i].n_reached);
        EXPECT_EQ(rows[i].t_star.mean, again[i].t_star.mean);
    }
}

TEST(Sweep, SingleTrajectoryMatchesDirectRun)
{
    SweepPlan plan;
    plan.values = {1.0};
    plan.n_trajectories = {1};
    plan.base.n_particles = 60;
    plan.base.n_steps = 400;
    plan.base.print_every = 5;
    plan.base.h = 0.5;
    plan.seed_base = 7;
    const auto rows = run_convergence_sweep(plan, 1.0);
    SimConfig c = plan.base;
    c.auto_scale_step = true;
    c.seed = 7;
    const auto t = first_convergence(c, 1.0);
    EXPECT_EQ(rows[0].n_reached, t ? 1 : 0);
    if (t) {
        EXPECT_EQ(rows[0].t_star.mean, *t);
    }
}

TEST(Sweep, InvalidPlans)
{
    SweepPlan plan;
    EXPECT_THROW(plan.validate(), std::invalid_argument);
    plan.values = {1, 2};
    plan.n_trajectories = {1, 2, 3};
    EXPECT_THROW(plan.validate(), std::invalid_argument);
    plan.n_trajectories = {0};
    EXPECT_THROW(plan.validate(), std::invalid_argument);
}

TEST(Sweep, ConfigForEachVariable)
{
    SweepPlan plan;
    plan.variable = SweepVariable::NParticles;
    EXPECT_EQ(plan.config_for(800.0).n_particles, 800);
    plan.variable = SweepVariable::Beta;
    EXPECT_EQ(plan.config_for(12.0).beta, 12.0);
}

TEST(Onset, DefaultsAndDetection)
{
    const auto d1 = OnsetDetection::defaults(1, 10.0);
    EXPECT_DOUBLE_EQ(d1.eps_tilde * 10.0, 0.5);
    EXPECT_DOUBLE_EQ(d1.min_pts_tilde * 500, 90.0);
    EXPECT_DOUBLE_EQ(OnsetDetection::defaults(2, 10.0).eps_tilde, 0.025);

    SimConfig c;
    c.n_particles = 500;
    c.beta = 25.0;
    c.h = 0.5;
    c.n_steps = 400;
    c.print_every = 2;
    const auto o = first_onset(c, d1);
    ASSERT_TRUE(o.onset);
    EXPECT_GT(o.onset->time, 0.0);
    EXPECT_LT(o.onset->time, 200.0);
}

TEST(Critical, ClosedForms)
{
    EXPECT_NEAR(10.0 / std::sqrt(2 * std::numbers::pi * 0.5), 5.642, 1e-3);
    EXPECT_NEAR(gaussian_2d_threshold_closed_form(0.5, 10.0), 31.831, 1e-3);
}

TEST(Critical, ScanLayoutAndReferences)
{
    SweepPlan plan;
    plan.values = {3.0, 9.0};
    plan.n_trajectories = {1};
    plan.base.n_particles = 40;
    plan.base.n_steps = 100;
    plan.base.print_every = 10;
    const auto scan = run_critical_scan(plan, {0.5, 1.0}, 1.43, false);
    ASSERT_EQ(scan.rows.size(), 4u);
    EXPECT_EQ(scan.rows[1].sigma2, 0.5);
    EXPECT_EQ(scan.rows[1].beta, 9.0);
    EXPECT_EQ(scan.rows[2].sigma2, 1.0);
    EXPECT_EQ(scan.rows[3].seeds.first, plan.seed_base + 3);
    EXPECT_NEAR(scan.references[1].closed_form, 10.0 / std::sqrt(2 * std::numbers::pi), 1e-12);
    EXPECT_FALSE(scan.references[0].spectral);
    plan.base.dims = 2;
    EXPECT_THROW(run_critical_scan(plan, {0.5}), std::invalid_argument);
}
