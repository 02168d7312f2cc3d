#include <gtest/gtest.h>

#include <kclust/observables.hpp>

using namespace kclust;

namespace {

ParticleState line_state(std::vector<double> xs, double box = 10.0)
{
    ParticleState s(int(xs.size()), 1, box);
    s.positions = xs;
    s.freeze_initial();
    return s;
}

} // namespace

TEST(PeriodicCom, AcrossTheSeam)
{
    const auto com = periodic_com(line_state({0.1, 9.9}));
    EXPECT_FALSE(com.degenerate);
    EXPECT_NEAR(minimum_image(com.point[0], 10.0), 0.0, 1e-12);
    EXPECT_NEAR(periodic_com(line_state({4.9, 5.0, 5.1})).point[0], 5.0, 1e-12);
    EXPECT_NEAR(d_com(line_state({0.1, 9.9})), 0.1, 1e-12);
}

TEST(PeriodicCom, DegenerateWhenBalanced)
{
    const auto com = periodic_com(line_state({0.0, 5.0}));
    EXPECT_TRUE(com.degenerate);
    EXPECT_TRUE(sample_observables(line_state({0.0, 2.5, 5.0, 7.5}), 0.0).com_degenerate);
}

TEST(PeriodicCom, PerAxisIn2D)
{
    ParticleState s(3, 2, 10.0);
    s.positions = {9.8, 3.0, 0.2, 3.2, 0.0, 2.8};
    const auto com = periodic_com(s);
    EXPECT_NEAR(minimum_image(com.point[0], 10.0), 0.0, 1e-12);
    EXPECT_NEAR(com.point[1], 3.0, 1e-12);
}

TEST(DCom, UniformCloudIsAQuarterBox)
{
    std::vector<double> xs;
    for (int i = 0; i < 10001; ++i) xs.push_back(10.0 * (i + 0.37) / 10001 + 1e-3 * std::sin(double(i)));
    // exactly uniform points have a degenerate COM; d_com is then L/4 from any reference point
    const auto s = line_state(xs);
    EXPECT_NEAR(d_com(s, PeriodicCom{{3.3}, false}), 2.5, 1e-3);
}

TEST(DCom, TranslationInvariant)
{
    std::vector<double> xs = {1.0, 1.4, 2.2, 8.9, 9.5, 0.3};
    const double a = d_com(line_state(xs));
    for (double& x : xs) x = wrap(x + 6.1, 10.0);
    EXPECT_NEAR(d_com(line_state(xs)), a, 1e-12);
}

TEST(Msd, WrappedAndUnwrapped)
{
    auto s = line_state({1.0, 9.5});
    s.positions = {2.0, 0.5};
    s.unwrapped_displacement = {11.0, 1.0};
    EXPECT_NEAR(msd(s), (1.0 + 1.0) / 2, 1e-12);
    EXPECT_NEAR(msd_unwrapped(s), (121.0 + 1.0) / 2, 1e-12);
}

TEST(KineticTemperature, MeanSquareVelocity)
{
    ParticleState s(2, 2, 10.0);
    s.velocities = {1.0, 0.0, 0.0, 2.0};
    EXPECT_DOUBLE_EQ(kinetic_temperature(s), 5.0 / 4.0);
}

TEST(ConvergenceTime, FirstCrossing)
{
    const std::vector<std::pair<double, double>> series = {{0, 2.5}, {10, 1.2}, {20, 0.6}, {30, 0.8}, {40, 0.3}};
    EXPECT_EQ(convergence_time(series, 0.7), 20.0);
    EXPECT_EQ(convergence_time(series, 0.2), std::nullopt);
    EXPECT_EQ(convergence_time(series, 3.0), 0.0);
    EXPECT_THROW(convergence_time(std::vector<std::pair<double, double>>{}, 1.0), std::invalid_argument);

    std::vector<ObservableSample> smp = {{0, 0.1, 0, 0, 0, true}, {5, 0.4, 0, 0, 0, false}};
    EXPECT_EQ(convergence_time(smp, 0.5), 5.0);
}

TEST(MsdOnset, FirstDecrease)
{
    const std::vector<std::pair<double, double>> s = {{0, 0.0}, {1, 1.0}, {2, 2.0}, {3, 1.5}, {4, 3.0}};
    EXPECT_EQ(msd_onset_time(s), 3.0);
    const std::vector<std::pair<double, double>> mono = {{0, 0.0}, {1, 1.0}, {2, 2.0}};
    EXPECT_EQ(msd_onset_time(mono), std::nullopt);
    // window 2: averages 0, .5, 1.5, 1.75, 2.25 never decrease
    EXPECT_EQ(msd_onset_time(s, 2), std::nullopt);
    EXPECT_THROW(msd_onset_time({{0, 1.0}}), std::invalid_argument);
}

TEST(ConvergenceTime, FourPointExample)
{
    const std::vector<std::pair<double, double>> s = {{0, 1.0}, {1, 0.9}, {2, 0.6}, {3, 0.3}};
    EXPECT_EQ(convergence_time(s, 0.5), 3.0);
    const std::vector<std::pair<double, double>> m = {{0, 0.0}, {1, 2.0}, {2, 3.0}, {3, 2.9}};
    EXPECT_EQ(msd_onset_time(m), 3.0);
}

TEST(DCom, RandomUniformSampleNearQuarterBox)
{
    SimConfig c;
    c.n_particles = 10000;
    const auto s = init_state(c);
    EXPECT_NEAR(d_com(s) / 2.5, 1.0, 0.05);
}

TEST(KineticTemperature, FreshMaxwellianAtBeta150)
{
    SimConfig c;
    c.n_particles = 1000;
    c.beta = 150.0;
    const auto s = init_state(c);
    const double se = (1.0 / 150) * std::sqrt(2.0 / 1000);
    EXPECT_NEAR(kinetic_temperature(s), 1.0 / 150, 3 * se);
    auto t = s;
    for (double& v : t.velocities) v *= 2;
    EXPECT_NEAR(kinetic_temperature(t), 4 * kinetic_temperature(s), 1e-15);
}
