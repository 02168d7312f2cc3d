#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "potentials.hpp"
#include "state.hpp"

namespace kclust {

namespace detail {

// e^a for a <= 0, branch-free so the pair loop vectorises. Arguments below -700 are
// clamped (e^-700 ~ 1e-304). Agrees with std::exp to about 2 ulp.
inline double exp_neg(double a)
{
    a = a > -700.0 ? a : -700.0;
    constexpr double shifter = 0x1.8p52;
    double kd = a * 1.4426950408889634 + shifter;
    const std::int64_t ki = std::bit_cast<std::int64_t>(kd);
    kd -= shifter;
    double r = a - kd * 6.93147180369123816490e-01;
    r -= kd * 1.90821492927058770002e-10;
    double p = 1.0 / 479001600;
    p = p * r + 1.0 / 39916800;
    p = p * r + 1.0 / 3628800;
    p = p * r + 1.0 / 362880;
    p = p * r + 1.0 / 40320;
    p = p * r + 1.0 / 5040;
    p = p * r + 1.0 / 720;
    p = p * r + 1.0 / 120;
    p = p * r + 1.0 / 24;
    p = p * r + 1.0 / 6;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;
    return p * std::bit_cast<double>((ki + 1023) << 52);
}

// Each kernel gives W and W'(r)/r from r^2.
struct GaussianKernel {
    double inv2s2, invs2;
    explicit GaussianKernel(const PotentialSpec& p) : inv2s2(0.5 / p.sigma2), invs2(1.0 / p.sigma2) {}
    void operator()(double r2, double& w, double& dw) const
    {
        const double e = exp_neg(-r2 * inv2s2);
        w = -e;
        dw = e * invs2;
    }
};

struct MorseKernel {
    double a, de;
    explicit MorseKernel(const PotentialSpec& p) : a(p.a), de(p.de) {}
    void operator()(double r2, double& w, double& dw) const
    {
        const double r = std::sqrt(r2);
        const double e = exp_neg(-a * r);
        w = de * (e * e - 2.0 * e);
        // 2 a De e (1 - e) / r -> 2 a^2 De as r -> 0 (the force itself vanishes there)
        const double rs = r > 1e-12 ? r : 1.0;
        dw = r > 1e-12 ? 2.0 * a * de * e * (1.0 - e) / rs : 2.0 * a * a * de;
    }
};

// GEM with alpha = 4, the case used in the experiments
struct Gem4Kernel {
    double inv2s2;
    explicit Gem4Kernel(const PotentialSpec& p) : inv2s2(0.5 / p.sigma2) {}
    void operator()(double r2, double& w, double& dw) const
    {
        const double u = r2 * inv2s2;
        const double e = exp_neg(-u * u);
        w = -e;
        dw = 4.0 * e * u * inv2s2;
    }
};

struct GemKernel {
    double inv2s2, alpha;
    explicit GemKernel(const PotentialSpec& p) : inv2s2(0.5 / p.sigma2), alpha(p.alpha) {}
    void operator()(double r2, double& w, double& dw) const
    {
        const double u = r2 * inv2s2;
        const double pm1 = u > 0.0 ? std::pow(u, 0.5 * alpha - 1.0) : (alpha == 2.0 ? 1.0 : 0.0);
        const double e = std::exp(-pm1 * u);
        w = -e;
        dw = e * alpha * pm1 * inv2s2;
    }
};

// Pair sums in structure-of-arrays form: x[c][i] is component c of particle i.
template <int D, class K>
double pair_loop(const K& kern, const double* const* x, double* const* f, int n, double box)
{
    const double invl = 1.0 / box;
    constexpr double shifter = 0x1.8p52;
    double u = 0.0;
    for (int i = 0; i < n; ++i) {
        double xi[3] = {0.0, 0.0, 0.0};
        for (int c = 0; c < D; ++c) xi[c] = x[c][i];
        double ui = 0.0, f0 = 0.0, f1 = 0.0, f2 = 0.0;
        double* __restrict g0 = f[0];
        double* __restrict g1 = D > 1 ? f[1] : f[0];
        double* __restrict g2 = D > 2 ? f[2] : f[0];
        const double* __restrict y0 = x[0];
        const double* __restrict y1 = D > 1 ? x[1] : x[0];
        const double* __restrict y2 = D > 2 ? x[2] : x[0];
#pragma omp simd reduction(+ : ui, f0, f1, f2)
        for (int j = i + 1; j < n; ++j) {
            // minimum image by round-to-nearest
            double d0 = xi[0] - y0[j];
            d0 -= box * ((d0 * invl + shifter) - shifter);
            double r2 = d0 * d0, d1 = 0.0, d2 = 0.0;
            if constexpr (D > 1) {
                d1 = xi[1] - y1[j];
                d1 -= box * ((d1 * invl + shifter) - shifter);
                r2 += d1 * d1;
            }
            if constexpr (D > 2) {
                d2 = xi[2] - y2[j];
                d2 -= box * ((d2 * invl + shifter) - shifter);
                r2 += d2 * d2;
            }
            double w, dw;
            kern(r2, w, dw);
            ui += w;
            f0 -= dw * d0;
            g0[j] += dw * d0;
            if constexpr (D > 1) {
                f1 -= dw * d1;
                g1[j] += dw * d1;
            }
            if constexpr (D > 2) {
                f2 -= dw * d2;
                g2[j] += dw * d2;
            }
        }
        u += ui;
        f[0][i] += f0;
        if constexpr (D > 1) f[1][i] += f1;
        if constexpr (D > 2) f[2][i] += f2;
    }
    return u;
}

template <class K>
double pair_sum(const K& kern, const ParticleState& s, std::vector<double>& forces)
{
    const int n = s.n, d = s.dims;
    std::vector<double> xs(std::size_t(n) * d), fs(std::size_t(n) * d, 0.0);
    const double* xp[3];
    double* fp[3];
    for (int c = 0; c < d; ++c) {
        xp[c] = xs.data() + std::size_t(c) * n;
        fp[c] = fs.data() + std::size_t(c) * n;
        for (int i = 0; i < n; ++i) xs[std::size_t(c) * n + i] = s.positions[std::size_t(i) * d + c];
    }
    double u = 0.0;
    switch (d) {
    case 1: u = pair_loop<1>(kern, xp, fp, n, s.box); break;
    case 2: u = pair_loop<2>(kern, xp, fp, n, s.box); break;
    case 3: u = pair_loop<3>(kern, xp, fp, n, s.box); break;
    default: throw std::invalid_argument("compute_forces: dims must be 1, 2 or 3");
    }
    const double invn = 1.0 / n;
    for (int c = 0; c < d; ++c)
        for (int i = 0; i < n; ++i) forces[std::size_t(i) * d + c] = fs[std::size_t(c) * n + i] * invn;
    return u * invn;
}

} // namespace detail

// forces_i = -(1/N) sum_{j != i} grad W(minimum image x_i - x_j); returns U_pot = (1/N) sum_{i>j} W.
inline double compute_forces(const ParticleState& s, const PotentialSpec& p, std::vector<double>& forces)
{
    forces.assign(s.size(), 0.0);
    if (s.n == 0) return 0.0;
    switch (p.kind) {
    case PotentialKind::Gaussian: return detail::pair_sum(detail::GaussianKernel(p), s, forces);
    case PotentialKind::Morse: return detail::pair_sum(detail::MorseKernel(p), s, forces);
    case PotentialKind::Gem:
        if (p.alpha == 4.0) return detail::pair_sum(detail::Gem4Kernel(p), s, forces);
        return detail::pair_sum(detail::GemKernel(p), s, forces);
    case PotentialKind::Free: return 0.0;
    case PotentialKind::WrappedGaussian:
        throw std::invalid_argument("compute_forces: the wrapped Gaussian is not a particle potential");
    }
    return 0.0;
}

inline double potential_energy(const ParticleState& s, const PotentialSpec& p)
{
    std::vector<double> f;
    return compute_forces(s, p, f);
}

} // namespace kclust
