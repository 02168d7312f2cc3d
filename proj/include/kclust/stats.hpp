#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kclust {

inline constexpr double z95 = 1.959963984540054;

struct MeanCi {
    double mean = 0.0;
    double ci95 = 0.0; // half-width, normal approximation
    int n = 0;
};

inline MeanCi mean_ci(const std::vector<double>& xs)
{
    MeanCi r;
    r.n = int(xs.size());
    if (r.n == 0) return r;
    for (double x : xs) r.mean += x;
    r.mean /= r.n;
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.ci95 = z95 * std::sqrt(ss / (r.n - 1) / r.n);
    return r;
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci95 = 0.0;
    double intercept_ci95 = 0.0;
    int n = 0;
};

// Ordinary least squares of y on ln x.
inline FitResult fit_log(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_log: size mismatch");
    const int n = int(xs.size());
    if (n < 3) throw std::invalid_argument("fit_log: need at least 3 points");
    std::vector<double> lx(n);
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("fit_log: x must be positive");
        lx[i] = std::log(xs[i]);
        mx += lx[i];
        my += ys[i];
    }
    mx /= n, my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 1e-300) throw std::invalid_argument("fit_log: x values are all equal");
    FitResult f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = ys[i] - f.intercept - f.slope * lx[i];
        rss += e * e;
    }
    const double s2 = rss / (n - 2);
    f.slope_ci95 = z95 * std::sqrt(s2 / sxx);
    f.intercept_ci95 = z95 * std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return f;
}

} // namespace kclust
