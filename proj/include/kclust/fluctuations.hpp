#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "linalg/expm.hpp"
#include "linalg/quadrature.hpp"
#include "spectral.hpp"

namespace kclust {

// E||c(t,k)||^2 for the truncated linear SDE dc = A c dt + sqrt(8 gamma) B dW,
// c(0) ~ identity covariance, B = diag(0, 1, ..., M-1).
//
// The noise integral P(t) = int_0^t E(u) B B^T E(u)^* du is built from short
// panels of width tau, each done by Gauss-Legendre, and glued with
// P(a + b) = P(a) + E(a) P(b) E(a)^*. A single rule over [0, t] misses the
// boundary layer near u = 0 once t is large.
class ModeVariance {
public:
    ModeVariance(const StabilityConfig& c, double k, int quadrature_points = 64)
        : a_(linearized_operator(c, k)), gamma_(c.gamma), rule_(gauss_legendre(quadrature_points))
    {
        const double nrm = a_.norm1();
        tau_ = 1.0;
        while (tau_ * nrm > 0.5) tau_ *= 0.5;
        levels_.push_back(panel(tau_));
    }

    double operator()(double t)
    {
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("mode_variance: t must be finite and >= 0");
        const double steps = std::floor(t / tau_);
        if (steps > 1e15) throw std::overflow_error("mode_variance: t too large");
        unsigned long long n = static_cast<unsigned long long>(steps);
        double rest = t - steps * tau_;
        if (rest < 1e-14 * std::max(1.0, t)) rest = 0.0;

        const std::size_t dim = a_.dim();
        ComplexMatrix e = ComplexMatrix::identity(dim);
        double noise = 0.0;
        auto add = [&](const Piece& p) {
            noise += trace_sandwich(e, p.p).real();
            e = e * p.e;
        };
        for (std::size_t j = 0; n != 0; ++j, n >>= 1) {
            if (!(n & 1ULL)) continue;
            while (levels_.size() <= j) {
                const Piece& q = levels_.back();
                Piece next;
                next.p = q.p;
                next.p += q.e * q.p * q.e.adjoint();
                next.e = q.e * q.e;
                levels_.push_back(std::move(next));
            }
            add(levels_[j]);
        }
        if (rest > 0.0) add(panel(rest));
        const double f = e.frobenius();
        return f * f + 8.0 * gamma_ * noise;
    }

    const ComplexMatrix& generator() const { return a_; }
    double panel_width() const { return tau_; }

private:
    struct Piece {
        ComplexMatrix e, p;
    };

    Piece panel(double w) const
    {
        const std::size_t dim = a_.dim();
        Piece out{expm(a_ * cplx(w)), ComplexMatrix(dim)};
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
            const double u = 0.5 * w * (rule_.nodes[q] + 1.0);
            const ComplexMatrix eu = expm(a_ * cplx(u));
            ComplexMatrix eg = eu;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) eg(i, j) *= double(j) * double(j);
            out.p += eg * eu.adjoint() * cplx(0.5 * w * rule_.weights[q]);
        }
        return out;
    }

    ComplexMatrix a_;
    double gamma_;
    QuadratureRule rule_;
    double tau_;
    std::vector<Piece> levels_;
};

inline double mode_variance(const StabilityConfig& c, double t, double k, int quadrature_points = 64)
{
    return ModeVariance(c, k, quadrature_points)(t);
}

// Covariance of the density perturbation at separation dx:
// (1/L^2) sum_{1 <= |n| <= K} e^{ik dx} V(t, k).
inline double perturbation_covariance(const StabilityConfig& c, double t, double dx)
{
    cplx s{};
    for (int n = 1; n <= c.n_fourier; ++n)
        for (int sign : {1, -1}) {
            const double k = sign * c.wavenumber(n);
            s += std::exp(cplx(0.0, k * dx)) * mode_variance(c, t, k);
        }
    s /= c.box * c.box;
    if (std::abs(s.imag()) > 1e-8 * std::max(1.0, std::abs(s.real())))
        throw std::logic_error("perturbation_covariance: imaginary residue too large");
    return s.real();
}

// Covariance profiles at several times, one evaluator per wavenumber.
// V(t, -k) = V(t, k) since A(-k) is the complex conjugate of A(k).
class CovarianceProfile {
public:
    explicit CovarianceProfile(const StabilityConfig& c, int quadrature_points = 64) : c_(c)
    {
        for (int n = 1; n <= c.n_fourier; ++n) modes_.emplace_back(c, c.wavenumber(n), quadrature_points);
    }

    std::vector<double> mode_variances(double t)
    {
        std::vector<double> v;
        for (auto& m : modes_) v.push_back(m(t));
        return v;
    }

    std::vector<double> at(double t, const std::vector<double>& offsets)
    {
        const auto v = mode_variances(t);
        std::vector<double> out;
        for (double dx : offsets) {
            double s = 0.0;
            for (int n = 1; n <= c_.n_fourier; ++n) s += 2.0 * std::cos(c_.wavenumber(n) * dx) * v[n - 1];
            out.push_back(s / (c_.box * c_.box));
        }
        return out;
    }

    // (max - min) / 2 over dx in [0.15 L, 0.85 L]
    double amplitude(double t, int grid = 281)
    {
        const auto off = amplitude_grid(grid);
        const auto p = at(t, off);
        const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
        return 0.5 * (*hi - *lo);
    }

    std::vector<double> amplitude_grid(int grid) const
    {
        std::vector<double> off(grid);
        for (int i = 0; i < grid; ++i) off[i] = c_.box * (0.15 + 0.7 * i / (grid - 1.0));
        return off;
    }

private:
    StabilityConfig c_;
    std::vector<ModeVariance> modes_;
};

inline double oscillation_amplitude(const StabilityConfig& c, double t) { return CovarianceProfile(c).amplitude(t); }

struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> times;
    std::vector<double> amplitudes;
};

// Least-squares slope of ln(amplitude) over [t0, t1] with npts equally spaced times.
// Times are rounded to multiples of 1/8 so they land on whole panels (cheap to evaluate).
inline GrowthFit amplitude_growth_fit(const StabilityConfig& c, double t0, double t1, int npts = 9)
{
    if (npts < 2 || !(t1 > t0)) throw std::invalid_argument("amplitude_growth_fit: need t1 > t0 and npts >= 2");
    CovarianceProfile prof(c);
    GrowthFit g;
    for (int i = 0; i < npts; ++i) {
        const double t = std::round(8.0 * (t0 + (t1 - t0) * i / (npts - 1.0))) / 8.0;
        g.times.push_back(t);
        g.amplitudes.push_back(prof.amplitude(t));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < npts; ++i) {
        const double x = g.times[i], y = std::log(g.amplitudes[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    g.slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    g.intercept = (sy - g.slope * sx) / npts;
    return g;
}

// Late-time window used for the growth-rate check: [8/psi, 16/psi].
inline GrowthFit late_time_growth_fit(const StabilityConfig& c, double psi, int npts = 9)
{
    if (!(psi > 0.0)) throw std::domain_error("late_time_growth_fit: psi must be positive");
    return amplitude_growth_fit(c, 8.0 / psi, 16.0 / psi, npts);
}

// ln(N) / (2 psi)
inline double predict_t_cl(double n_particles, double psi)
{
    if (!(psi > 0.0)) throw std::domain_error("predict_t_cl: psi must be positive");
    if (!(n_particles >= 1.0)) throw std::invalid_argument("predict_t_cl: N must be >= 1");
    return std::log(n_particles) / (2.0 * psi);
}

} // namespace kclust
