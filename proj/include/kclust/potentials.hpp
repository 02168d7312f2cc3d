#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>

#include "linalg/quadrature.hpp"

namespace kclust {

enum class PotentialKind { Gaussian, Morse, Gem, WrappedGaussian, Free };

inline std::string to_string(PotentialKind k)
{
    switch (k) {
    case PotentialKind::Gaussian: return "gaussian";
    case PotentialKind::Morse: return "morse";
    case PotentialKind::Gem: return "gem";
    case PotentialKind::WrappedGaussian: return "wrapped-gaussian";
    case PotentialKind::Free: return "free";
    }
    return "?";
}

inline PotentialKind parse_potential_kind(const std::string& s)
{
    if (s == "gaussian") return PotentialKind::Gaussian;
    if (s == "morse") return PotentialKind::Morse;
    if (s == "gem") return PotentialKind::Gem;
    if (s == "wrapped-gaussian") return PotentialKind::WrappedGaussian;
    if (s == "free") return PotentialKind::Free;
    throw std::invalid_argument("unknown potential kind: " + s);
}

// Radial pair potential W(r). Only the fields of the selected kind are used.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::Gaussian;
    double sigma2 = 0.5; // Gaussian, GEM, wrapped Gaussian
    double alpha = 4.0;  // GEM exponent
    double a = 2.0;      // Morse inverse width
    double de = 1.0;     // Morse well depth
    double period = 10.0; // wrapped Gaussian image spacing
    int n_images = 3;

    static PotentialSpec gaussian(double sigma2) { return checked({PotentialKind::Gaussian, sigma2}); }
    static PotentialSpec gem(double sigma2, double alpha)
    {
        PotentialSpec p{PotentialKind::Gem, sigma2};
        p.alpha = alpha;
        return checked(p);
    }
    static PotentialSpec morse(double a, double de)
    {
        PotentialSpec p{PotentialKind::Morse};
        p.a = a;
        p.de = de;
        return checked(p);
    }
    static PotentialSpec wrapped_gaussian(double sigma2, double period, int n_images = 3)
    {
        PotentialSpec p{PotentialKind::WrappedGaussian, sigma2};
        p.period = period;
        p.n_images = n_images;
        return checked(p);
    }
    static PotentialSpec free() { return {PotentialKind::Free}; }

    static PotentialSpec checked(PotentialSpec p)
    {
        p.validate();
        return p;
    }

    void validate() const
    {
        auto pos = [](double v, const char* what) {
            if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("potential: ") + what + " must be positive");
        };
        switch (kind) {
        case PotentialKind::Gaussian: pos(sigma2, "sigma2"); break;
        case PotentialKind::Gem:
            pos(sigma2, "sigma2");
            if (!(alpha >= 2.0)) throw std::invalid_argument("potential: GEM exponent must be >= 2");
            break;
        case PotentialKind::Morse:
            pos(a, "a");
            pos(de, "depth");
            break;
        case PotentialKind::WrappedGaussian:
            pos(sigma2, "sigma2");
            pos(period, "period");
            if (n_images < 0) throw std::invalid_argument("potential: n_images must be >= 0");
            break;
        case PotentialKind::Free: break;
        }
    }
};

inline double potential(const PotentialSpec& p, double r)
{
    switch (p.kind) {
    case PotentialKind::Gaussian: return -std::exp(-r * r / (2.0 * p.sigma2));
    case PotentialKind::Gem: return -std::exp(-std::pow(std::abs(r) / std::sqrt(2.0 * p.sigma2), p.alpha));
    case PotentialKind::Morse: {
        const double e = std::exp(-p.a * std::abs(r));
        return p.de * (e * e - 2.0 * e);
    }
    case PotentialKind::WrappedGaussian: {
        double s = 0.0;
        for (int n = -p.n_images; n <= p.n_images; ++n) {
            const double y = r + n * p.period;
            s -= std::exp(-y * y / (2.0 * p.sigma2));
        }
        return s;
    }
    case PotentialKind::Free: return 0.0;
    }
    return 0.0;
}

// dW/dr for r >= 0
inline double potential_derivative(const PotentialSpec& p, double r)
{
    switch (p.kind) {
    case PotentialKind::Gaussian: return r / p.sigma2 * std::exp(-r * r / (2.0 * p.sigma2));
    case PotentialKind::Gem: {
        if (r == 0.0) return 0.0;
        const double u = std::pow(r / std::sqrt(2.0 * p.sigma2), p.alpha);
        return p.alpha * u / r * std::exp(-u);
    }
    case PotentialKind::Morse: {
        const double e = std::exp(-p.a * r);
        return 2.0 * p.a * p.de * e * (1.0 - e);
    }
    case PotentialKind::WrappedGaussian: {
        double s = 0.0;
        for (int n = -p.n_images; n <= p.n_images; ++n) {
            const double y = r + n * p.period;
            s += y / p.sigma2 * std::exp(-y * y / (2.0 * p.sigma2));
        }
        return s;
    }
    case PotentialKind::Free: return 0.0;
    }
    return 0.0;
}

// grad_x W(|x|); zero at the origin.
inline void potential_gradient(const PotentialSpec& p, std::span<const double> x, std::span<double> out)
{
    if (x.size() != out.size()) throw std::invalid_argument("potential_gradient: size mismatch");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double r = std::sqrt(r2);
    if (r == 0.0) {
        for (double& o : out) o = 0.0;
        return;
    }
    const double f = potential_derivative(p, r) / r;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
}

// W(0) is the minimum for every kind here; used for the U_pot lower bound.
inline double potential_minimum(const PotentialSpec& p) { return potential(p, 0.0); }

// Magnitude of the pair force at the half-box distance.
inline double tail_force(const PotentialSpec& p, double box) { return std::abs(potential_derivative(p, 0.5 * box)); }

// (1/L) int_{-L/2}^{L/2} W(y) e^{-iky} dy, uncached.
inline double fourier_coefficient_uncached(const PotentialSpec& p, double box, double k)
{
    if (!(box > 0.0)) throw std::invalid_argument("fourier_coefficient: box must be positive");
    if (p.kind == PotentialKind::Free) return 0.0;
    auto f = [&](double y) { return potential(p, y) * std::exp(std::complex<double>(0.0, -k * y)); };
    // split at 0: Morse has a kink there
    const std::complex<double> v = (integrate(f, -0.5 * box, 0.0, 1e-13) + integrate(f, 0.0, 0.5 * box, 1e-13)) / box;
    if (std::abs(v.imag()) > 1e-10) throw std::logic_error("fourier_coefficient: imaginary part should vanish");
    return v.real();
}

// Closed form for the infinitely wrapped Gaussian.
inline double wrapped_gaussian_fourier(double sigma2, double box, double k)
{
    return -std::sqrt(2.0 * std::numbers::pi * sigma2) / box * std::exp(-0.5 * sigma2 * k * k);
}

inline double fourier_coefficient(const PotentialSpec& p, double box, double k)
{
    using Key = std::tuple<int, double, double, double, double, double, int, double, double>;
    static std::map<Key, double> cache;
    static std::mutex mu;
    const Key key{int(p.kind), p.sigma2, p.alpha, p.a, p.de, p.period, p.n_images, box, k};
    {
        std::lock_guard lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double v = fourier_coefficient_uncached(p, box, k);
    std::lock_guard lk(mu);
    cache.emplace(key, v);
    return v;
}

} // namespace kclust
