#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <kclust/hermite.hpp>
#include <kclust/linalg/quadrature.hpp>
#include <kclust/potentials.hpp>

using namespace kclust;

TEST(Potentials, ClosedFormValues)
{
    const auto g = PotentialSpec::gaussian(0.5);
    EXPECT_DOUBLE_EQ(potential(g, 0.0), -1.0);
    EXPECT_NEAR(potential(g, std::sqrt(0.5)), -std::exp(-0.5), 1e-15);

    const auto m = PotentialSpec::morse(2.0, 1.0);
    EXPECT_DOUBLE_EQ(potential(m, 0.0), -1.0);
    EXPECT_NEAR(potential(m, std::log(2.0) / 2.0), -0.75, 1e-15);
    EXPECT_NEAR(potential(PotentialSpec::morse(1.0, 2.0), 0.0), -2.0, 1e-15);

    const auto gem = PotentialSpec::gem(0.5, 4.0);
    EXPECT_DOUBLE_EQ(potential(gem, 0.0), -1.0);
    EXPECT_NEAR(potential(gem, 1.0), -std::exp(-1.0), 1e-15);
    EXPECT_NEAR(potential(gem, 2.0), -std::exp(-16.0), 1e-20);

    EXPECT_EQ(potential(PotentialSpec::free(), 1.3), 0.0);
}

TEST(Potentials, WrappedGaussianIsPeriodicAndEven)
{
    const auto w = PotentialSpec::wrapped_gaussian(0.5, 10.0);
    for (double r : {0.1, 1.7, 4.9}) {
        EXPECT_NEAR(potential(w, r), potential(w, -r), 1e-15);
        EXPECT_NEAR(potential(w, r), potential(w, r - 10.0), 1e-12);
    }
}

TEST(Potentials, DerivativeMatchesFiniteDifference)
{
    const PotentialSpec specs[] = {PotentialSpec::gaussian(0.5), PotentialSpec::morse(2.0, 1.0),
                                   PotentialSpec::morse(1.0, 2.0), PotentialSpec::gem(0.5, 4.0),
                                   PotentialSpec::gem(0.3, 3.0), PotentialSpec::wrapped_gaussian(0.5, 10.0)};
    for (const auto& p : specs)
        for (double r : {0.05, 0.4, 1.0, 2.2, 4.0}) {
            const double h = 1e-6;
            const double fd = (potential(p, r + h) - potential(p, r - h)) / (2 * h);
            EXPECT_NEAR(potential_derivative(p, r), fd, 1e-8) << to_string(p.kind) << " r=" << r;
        }
}

TEST(Potentials, GradientMatchesFiniteDifferenceInEachDimension)
{
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& p : {PotentialSpec::gaussian(0.5), PotentialSpec::morse(2.0, 1.0), PotentialSpec::gem(0.5, 4.0)})
        for (int d = 1; d <= 3; ++d)
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<double> x(d), grad(d);
                for (auto& c : x) c = u(g);
                potential_gradient(p, x, grad);
                for (int c = 0; c < d; ++c) {
                    auto xp = x, xm = x;
                    xp[c] += 1e-6;
                    xm[c] -= 1e-6;
                    auto norm = [](const std::vector<double>& v) {
                        double s = 0;
                        for (double t : v) s += t * t;
                        return std::sqrt(s);
                    };
                    const double fd = (potential(p, norm(xp)) - potential(p, norm(xm))) / 2e-6;
                    EXPECT_NEAR(grad[c], fd, 1e-8);
                }
            }
}

TEST(Potentials, GradientAtOriginIsZero)
{
    std::vector<double> x{0.0, 0.0}, out{1.0, 1.0};
    potential_gradient(PotentialSpec::morse(2.0, 1.0), x, out);
    EXPECT_EQ(out[0], 0.0);
    EXPECT_EQ(out[1], 0.0);
}

TEST(Potentials, RejectsBadParameters)
{
    EXPECT_THROW(PotentialSpec::gaussian(0.0), std::invalid_argument);
    EXPECT_THROW(PotentialSpec::gaussian(-1.0), std::invalid_argument);
    EXPECT_THROW(PotentialSpec::morse(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(PotentialSpec::morse(1.0, -1.0), std::invalid_argument);
    EXPECT_THROW(PotentialSpec::gem(0.5, 1.0), std::invalid_argument);
    EXPECT_THROW(parse_potential_kind("lennard-jones"), std::invalid_argument);
    EXPECT_EQ(parse_potential_kind("gem"), PotentialKind::Gem);
}

TEST(Fourier, WrappedGaussianMatchesClosedForm)
{
    const double box = 10.0;
    const auto w = PotentialSpec::wrapped_gaussian(0.5, box);
    for (int n = 0; n <= 6; ++n) {
        const double k = 2 * M_PI * n / box;
        EXPECT_NEAR(fourier_coefficient_uncached(w, box, k), wrapped_gaussian_fourier(0.5, box, k), 1e-9) << n;
    }
}

TEST(Fourier, GaussianOnTheBoxIsNearlyTheFullLineTransform)
{
    // tails beyond L/2 = 5 weigh e^{-25}
    const double box = 10.0, k = 2 * M_PI / box;
    const double v = fourier_coefficient(PotentialSpec::gaussian(0.5), box, k);
    EXPECT_NEAR(v, wrapped_gaussian_fourier(0.5, box, k), 1e-10);
    EXPECT_NEAR(v, -0.160588, 1e-6);
}

TEST(Fourier, MorseMatchesAnalyticIntegral)
{
    // 2 int_0^{L/2} e^{-b y} cos(k y) dy in closed form
    auto piece = [](double b, double k, double half) {
        return 2.0 * (b - std::exp(-b * half) * (b * std::cos(k * half) - k * std::sin(k * half))) / (b * b + k * k);
    };
    const double box = 10.0;
    for (auto [a, de] : {std::pair{2.0, 1.0}, std::pair{1.0, 2.0}})
        for (int n : {1, 2, 5}) {
            const double k = 2 * M_PI * n / box;
            const double exact = de * (piece(2 * a, k, box / 2) - 2.0 * piece(a, k, box / 2)) / box;
            EXPECT_NEAR(fourier_coefficient(PotentialSpec::morse(a, de), box, k), exact, 1e-11);
        }
}

TEST(Fourier, CacheReturnsIdenticalValues)
{
    const auto p = PotentialSpec::gem(0.5, 4.0);
    const double k = 2 * M_PI * 3 / 10.0;
    const double a = fourier_coefficient(p, 10.0, k);
    EXPECT_EQ(a, fourier_coefficient(p, 10.0, k));
    EXPECT_EQ(a, fourier_coefficient_uncached(p, 10.0, k));
}

TEST(Fourier, ZeroModeIsTheMean)
{
    const auto p = PotentialSpec::gaussian(0.5);
    EXPECT_NEAR(fourier_coefficient(p, 10.0, 0.0), -std::sqrt(2 * M_PI * 0.5) / 10.0, 1e-10);
}

TEST(Hermite, FirstPolynomials)
{
    const HermiteBasis h(2.0, 4);
    const double v = 0.7, u = std::sqrt(2.0) * v;
    const auto vals = h.values(v);
    EXPECT_DOUBLE_EQ(vals[0], 1.0);
    EXPECT_NEAR(vals[1], u, 1e-15);
    EXPECT_NEAR(vals[2], (u * u - 1) / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(vals[3], (u * u * u - 3 * u) / std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(h(4, v), (std::pow(u, 4) - 6 * u * u + 3) / std::sqrt(24.0), 1e-14);
}

TEST(Hermite, OrthonormalUnderTheMaxwellian)
{
    // int h_m h_n F dv with F = N(0, 1/beta), by Gauss-Hermite: v = sqrt(2/beta) x
    const double beta = 3.0;
    const int nmax = 20;
    const auto q = gauss_hermite(40);
    const HermiteBasis h(beta, nmax);
    std::vector<std::vector<double>> gram(nmax + 1, std::vector<double>(nmax + 1, 0.0));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const auto vals = h.values(std::sqrt(2.0 / beta) * q.nodes[i]);
        for (int m = 0; m <= nmax; ++m)
            for (int n = 0; n <= nmax; ++n) gram[m][n] += q.weights[i] / std::sqrt(M_PI) * vals[m] * vals[n];
    }
    for (int m = 0; m <= nmax; ++m)
        for (int n = 0; n <= nmax; ++n) EXPECT_NEAR(gram[m][n], m == n ? 1.0 : 0.0, 1e-11) << m << "," << n;
}

TEST(Hermite, EigenfunctionsOfTheOuGenerator)
{
    // (1/beta) h'' - v h' = -n h, by central differences
    const double beta = 1.7, d = 1e-4;
    const HermiteBasis h(beta, 6);
    for (int n = 0; n <= 6; ++n)
        for (double v : {-1.1, 0.2, 0.9}) {
            const double hp = h(n, v + d), h0 = h(n, v), hm = h(n, v - d);
            const double lhs = (hp - 2 * h0 + hm) / (d * d) / beta - v * (hp - hm) / (2 * d);
            EXPECT_NEAR(lhs, -n * h0, 2e-5 * std::max(1.0, std::abs(h0) * n));
        }
}

TEST(Hermite, ReportsOverflowAndBadArguments)
{
    EXPECT_THROW(HermiteBasis(0.0, 3), std::invalid_argument);
    EXPECT_THROW(HermiteBasis(1.0, 3)(4, 0.0), std::out_of_range);
    EXPECT_THROW(HermiteBasis(1.0, 400).values(1e300), std::overflow_error);
}
