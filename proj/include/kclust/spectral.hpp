#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "linalg/complex_matrix.hpp"
#include "linalg/eigen.hpp"
#include "potentials.hpp"

namespace kclust {

// Linearised kinetic Fokker-Planck operator about the uniform Maxwellian,
// truncated to hermite_dim velocity modes and wavenumbers 2 pi n / L, n <= n_fourier.
struct StabilityConfig {
    PotentialSpec potential = PotentialSpec::gaussian(0.5);
    double box = 10.0;
    double beta = 1.0;
    double gamma = 1.0;
    int hermite_dim = 100;
    int n_fourier = 30;

    void validate() const
    {
        potential.validate();
        if (!(box > 0.0)) throw std::invalid_argument("stability: box must be positive");
        if (!(beta > 0.0)) throw std::invalid_argument("stability: beta must be positive");
        if (!(gamma > 0.0)) throw std::invalid_argument("stability: gamma must be positive");
        if (hermite_dim < 2) throw std::invalid_argument("stability: hermite_dim must be >= 2");
        if (n_fourier < 1) throw std::invalid_argument("stability: n_fourier must be >= 1");
    }

    double wavenumber(int n) const { return 2.0 * std::numbers::pi * n / box; }
};

// Tridiagonal mode-coupling matrix at wavenumber k.
inline ComplexMatrix linearized_operator(const StabilityConfig& c, double k)
{
    c.validate();
    const int m = c.hermite_dim;
    ComplexMatrix a(m);
    const cplx ik(0.0, k);
    const double sb = std::sqrt(c.beta);
    for (int i = 0; i < m; ++i) {
        a(i, i) = -double(i) * c.gamma;
        if (i + 1 < m) a(i, i + 1) = -ik * std::sqrt((i + 1.0) / c.beta);
        if (i >= 1) a(i, i - 1) = -ik * std::sqrt(double(i) / c.beta);
    }
    const double w = k == 0.0 ? 0.0 : fourier_coefficient(c.potential, c.box, k);
    a(1, 0) = -ik / sb - ik * sb * w;
    return a;
}

inline double max_growth_rate_at(const StabilityConfig& c, double k)
{
    return spectral_abscissa(linearized_operator(c, k));
}

// Largest growth rate over k != 0: the k = 0 mode is neutral by construction.
inline double max_growth_rate_nonzero(const StabilityConfig& c)
{
    double best = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= c.n_fourier; ++n) best = std::max(best, max_growth_rate_at(c, c.wavenumber(n)));
    return best;
}

// psi_max over k in {0} and 2 pi n / L; never below 0.
inline double max_growth_rate(const StabilityConfig& c)
{
    return std::max(0.0, max_growth_rate_nonzero(c));
}

// Growth rates below this count as neutral when locating the transition.
inline constexpr double instability_threshold = 1e-9;

struct CriticalBetaOptions {
    double beta_lo = 0.5;
    double beta_hi = 20.0;
    double tol = 1e-3;
    double beta_max = 1e6;
    double beta_min = 1e-6;
};

// Smallest beta with a growing mode, by bisection. nullopt if no bracket exists in [beta_min, beta_max].
inline std::optional<double> critical_beta(StabilityConfig c, CriticalBetaOptions o = {})
{
    c.validate();
    auto unstable = [&](double b) {
        c.beta = b;
        for (int n = 1; n <= c.n_fourier; ++n)
            if (max_growth_rate_at(c, c.wavenumber(n)) > instability_threshold) return true;
        return false;
    };
    double lo = o.beta_lo, hi = o.beta_hi;
    while (!unstable(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > o.beta_max) return std::nullopt;
    }
    while (unstable(lo)) {
        hi = lo;
        lo *= 0.5;
        if (lo < o.beta_min) return std::nullopt;
    }
    while (hi - lo > o.tol) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace kclust
