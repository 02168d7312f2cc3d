#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace kclust {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int half = (n + 1) / 2;
    auto legendre = [n](double z, double& dp) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        return p1;
    };
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double dz = legendre(z, dp) / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        legendre(z, dp);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        q.nodes[i] = -z;
        q.nodes[n - 1 - i] = z;
        q.weights[i] = q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

// Gauss-Hermite rule for the weight exp(-x^2).
inline QuadratureRule gauss_hermite(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0.0;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * q.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * q.nodes[1];
        else
            z = 2.0 * z - q.nodes[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        q.nodes[i] = z;
        q.nodes[n - 1 - i] = -z;
        q.weights[i] = q.weights[n - 1 - i] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    // ascending order
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        std::swap(q.nodes[i], q.nodes[j]);
        std::swap(q.weights[i], q.weights[j]);
    }
    return q;
}

struct IntegrationError : std::runtime_error {
    IntegrationError(const char* what, std::complex<double> best)
        : std::runtime_error(what), best_estimate(best) {}
    std::complex<double> best_estimate;
};

namespace detail {

inline const QuadratureRule& gl10()
{
    static const QuadratureRule r = gauss_legendre(10);
    return r;
}

template <class F>
auto gl_panel(F& f, double a, double b)
{
    const auto& r = gl10();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using T = std::invoke_result_t<F&, double>;
    T s{};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return T(s * h);
}

template <class F, class T>
T adapt(F& f, double a, double b, T whole, double tol, int depth, bool& failed)
{
    const double m = 0.5 * (a + b);
    const T left = gl_panel(f, a, m), right = gl_panel(f, m, b);
    const T both = left + right;
    const double err = std::abs(both - whole);
    // error small, or limited by roundoff in the panel sums
    if (err <= tol || err <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(both)) return both;
    if (depth <= 0) {
        failed = true;
        return both;
    }
    return adapt(f, a, m, left, 0.5 * tol, depth - 1, failed) + adapt(f, m, b, right, 0.5 * tol, depth - 1, failed);
}

} // namespace detail

// Adaptive Gauss-Legendre (10 points per panel, bisection) to absolute tolerance tol.
template <class F>
auto integrate(F f, double a, double b, double tol, int max_depth = 40)
{
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: bounds must be finite");
    using T = std::invoke_result_t<F&, double>;
    if (a == b) return T{};
    bool failed = false;
    const T whole = detail::gl_panel(f, a, b);
    const T v = detail::adapt(f, a, b, whole, tol, max_depth, failed);
    if (failed) throw IntegrationError("integrate: recursion depth exhausted", std::complex<double>(v));
    return v;
}

} // namespace kclust
