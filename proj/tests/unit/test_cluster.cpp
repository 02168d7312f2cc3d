#include <gtest/gtest.h>

#include <kclust/cluster.hpp>

#include "reference_dbscan.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

using namespace kclust;


TEST(Dbscan, MatchesReferenceOnRandomInstances)
{
    std::mt19937_64 g(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int dims = 1 + trial % 2;
        const int n = 20 + int(g() % 181);
        std::uniform_real_distribution<double> u(0, 10), e(0.1, 1.5);
        std::normal_distribution<double> blob(0, 0.4);
        std::vector<double> x(std::size_t(n) * dims);
        const double cx = u(g);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < dims; ++c) x[i * dims + c] = i % 3 == 0 ? cx + blob(g) : u(g);
        const double eps = e(g);
        const int mp = 2 + int(g() % 15);
        const auto a = dbscan(x, dims, 10.0, {eps, mp});
        const auto b = testing_support::reference_dbscan(x, dims, eps, mp);
        ASSERT_EQ(a.n_clusters, b.n_clusters) << trial;
        ASSERT_EQ(a.labels, b.labels) << trial;
    }
}

TEST(Dbscan, TwoBlobsAndNoise)
{
    std::vector<double> x;
    for (int i = 0; i < 20; ++i) x.push_back(2.0 + 0.01 * i);
    for (int i = 0; i < 20; ++i) x.push_back(7.0 + 0.01 * i);
    x.push_back(4.5);
    const auto r = dbscan(x, 1, 10.0, {0.3, 5});
    EXPECT_EQ(r.n_clusters, 2);
    EXPECT_EQ(r.labels[0], 0);
    EXPECT_EQ(r.labels[25], 1);
    EXPECT_EQ(r.labels[40], -1);
}

TEST(Dbscan, CoincidentPointsAndSelfCount)
{
    const std::vector<double> x(5, 3.0);
    EXPECT_EQ(dbscan(x, 1, 10.0, {0.1, 5}).n_clusters, 1);
    EXPECT_EQ(dbscan(x, 1, 10.0, {0.1, 6}).n_clusters, 0);
}

TEST(Dbscan, PeriodicOption)
{
    std::vector<double> x;
    for (int i = 0; i < 5; ++i) x.push_back(0.05 * i);
    for (int i = 0; i < 5; ++i) x.push_back(9.8 + 0.03 * i);
    EXPECT_EQ(dbscan(x, 1, 10.0, {0.3, 3}).n_clusters, 2);
    EXPECT_EQ(dbscan(x, 1, 10.0, {0.3, 3, true}).n_clusters, 1);
}

TEST(Dbscan, MonotoneInEps)
{
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> x(300);
    for (double& v : x) v = u(g);
    int prev_noise = 1 << 30;
    for (double eps : {0.01, 0.03, 0.1, 0.3}) {
        const auto r = dbscan(x, 1, 10.0, {eps, 8});
        const int noise = int(std::count(r.labels.begin(), r.labels.end(), -1));
        EXPECT_LE(noise, prev_noise);
        prev_noise = noise;
    }
}

TEST(Dbscan, PermutationKeepsCorePartition)
{
    std::mt19937_64 g(4);
    std::normal_distribution<double> nd(0, 0.3);
    std::vector<double> x;
    for (int i = 0; i < 60; ++i) x.push_back((i % 2 ? 3.0 : 7.0) + nd(g));
    const auto a = dbscan(x, 1, 10.0, {0.2, 6});
    std::vector<int> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm[i]];
    const auto b = dbscan(y, 1, 10.0, {0.2, 6});
    EXPECT_EQ(a.n_clusters, b.n_clusters);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(a.labels[perm[i]] == -1, b.labels[i] == -1);
}

TEST(Dbscan, UniformDrawHasNoClusterAtOnsetParameters)
{
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0, 10);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(500);
        for (double& v : x) v = u(g);
        EXPECT_EQ(dbscan(x, 1, 10.0, DbscanParams::dimensionless(0.05, 0.18, 10.0, 500)).n_clusters, 0);
    }
}

TEST(Dbscan, Parameters)
{
    const auto p = DbscanParams::dimensionless(0.05, 0.18, 10.0, 500);
    EXPECT_DOUBLE_EQ(p.eps, 0.5);
    EXPECT_EQ(p.min_pts, 90);
    EXPECT_EQ(DbscanParams::scaled(0.5, 90, 500, 1000).min_pts, 180);
    EXPECT_THROW(DbscanParams::dimensionless(0.0, 0.1, 10.0, 100), std::invalid_argument);
    EXPECT_THROW(DbscanParams::dimensionless(0.05, 0.001, 10.0, 100), std::invalid_argument);
}

TEST(OnsetTime, FirstClusteredFrame)
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<Frame> frames;
    for (int f = 0; f < 3; ++f) {
        Frame fr{10.0 * f, std::vector<double>(200)};
        for (double& v : fr.positions) v = u(g);
        if (f == 2)
            for (int i = 0; i < 100; ++i) fr.positions[i] = 5.0 + 0.002 * i;
        frames.push_back(fr);
    }
    const auto o = onset_time(frames, 1, 10.0, 0.05, 0.18);
    ASSERT_TRUE(o);
    EXPECT_EQ(o->time, 20.0);
    EXPECT_EQ(o->n_clusters, 1);
    frames.pop_back();
    EXPECT_FALSE(onset_time(frames, 1, 10.0, 0.05, 0.18));
    EXPECT_THROW(onset_time({}, 1, 10.0, 0.05, 0.18), std::invalid_argument);
}

TEST(Dbscan, TwoBlobs2D)
{
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0, 1);
    std::vector<double> x;
    for (double cx : {3.0, 7.0})
        for (int i = 0; i < 50; ++i) {
            const double r = 0.2 * std::sqrt(rad(g)), a = ang(g);
            x.push_back(cx + r * std::cos(a));
            x.push_back(5.0 + r * std::sin(a));
        }
    const auto r = dbscan(x, 2, 10.0, {0.5, 10});
    EXPECT_EQ(r.n_clusters, 2);
    EXPECT_EQ(std::count(r.labels.begin(), r.labels.end(), -1), 0);
    EXPECT_EQ(r.labels, testing_support::reference_dbscan(x, 2, 0.5, 10).labels);
}

TEST(Dbscan, AllFarApartIsNoise)
{
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
    const auto r = dbscan(x, 1, 10.0, {0.5, 2});
    EXPECT_EQ(r.n_clusters, 0);
    EXPECT_EQ(std::count(r.labels.begin(), r.labels.end(), -1), 4);
}
