#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kclust {

// Normalised Hermite polynomials orthonormal under N(0, 1/beta):
// h_0 = 1, h_{n+1} = (u h_n - sqrt(n) h_{n-1}) / sqrt(n+1), u = sqrt(beta) v.
struct HermiteBasis {
    double beta = 1.0;
    int max_n = 0;

    HermiteBasis(double beta_, int max_n_) : beta(beta_), max_n(max_n_)
    {
        if (!(beta > 0.0)) throw std::invalid_argument("HermiteBasis: beta must be positive");
        if (max_n < 0) throw std::invalid_argument("HermiteBasis: max_n must be >= 0");
    }

    // h_0(v) .. h_max_n(v)
    std::vector<double> values(double v) const
    {
        std::vector<double> h(max_n + 1);
        const double u = std::sqrt(beta) * v;
        h[0] = 1.0;
        if (max_n >= 1) h[1] = u;
        for (int n = 1; n < max_n; ++n) {
            h[n + 1] = (u * h[n] - std::sqrt(double(n)) * h[n - 1]) / std::sqrt(n + 1.0);
            if (!std::isfinite(h[n + 1]))
                throw std::overflow_error("HermiteBasis: recursion overflowed");
        }
        return h;
    }

    double operator()(int n, double v) const
    {
        if (n < 0 || n > max_n) throw std::out_of_range("HermiteBasis: index out of range");
        return HermiteBasis(beta, n).values(v)[n];
    }
};

} // namespace kclust
