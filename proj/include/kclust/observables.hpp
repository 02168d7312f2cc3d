#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "state.hpp"

namespace kclust {

struct ObservableSample {
    double time = 0.0;
    double d_com = 0.0;
    double msd = 0.0;
    double t_kin = 0.0;
    double u_pot = 0.0;
    bool com_degenerate = false;
};

struct PeriodicCom {
    std::vector<double> point;
    bool degenerate = false; // some axis had a vanishing mean unit vector
};

// Circular mean per axis. positions are flat, n * dims.
inline PeriodicCom periodic_com(std::span<const double> positions, int dims, double box)
{
    if (dims < 1) throw std::invalid_argument("periodic_com: dims must be >= 1");
    const std::size_t n = positions.size() / dims;
    if (n == 0) throw std::invalid_argument("periodic_com: no particles");
    PeriodicCom out;
    out.point.resize(dims);
    const double w = 2.0 * std::numbers::pi / box;
    for (int c = 0; c < dims; ++c) {
        double cs = 0.0, sn = 0.0, plain = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = positions[i * dims + c];
            cs += std::cos(w * x);
            sn += std::sin(w * x);
            plain += wrap(x, box);
        }
        cs /= n, sn /= n;
        if (std::hypot(cs, sn) < 1e-12) {
            out.degenerate = true;
            out.point[c] = plain / n;
        } else {
            out.point[c] = wrap(std::atan2(sn, cs) / w, box);
        }
    }
    return out;
}

inline PeriodicCom periodic_com(const ParticleState& s) { return periodic_com(s.positions, s.dims, s.box); }

// Mean minimum-image distance to the periodic centre of mass.
inline double d_com(const ParticleState& s, const PeriodicCom& com)
{
    double total = 0.0;
    for (int i = 0; i < s.n; ++i) {
        double r2 = 0.0;
        for (int c = 0; c < s.dims; ++c) {
            const double d = minimum_image(s.positions[i * s.dims + c] - com.point[c], s.box);
            r2 += d * d;
        }
        total += std::sqrt(r2);
    }
    return total / s.n;
}

inline double d_com(const ParticleState& s) { return d_com(s, periodic_com(s)); }

// Wrapped-difference MSD: minimum image of x(t) - x(0).
inline double msd(const ParticleState& s)
{
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = minimum_image(s.positions[i] - s.initial_positions[i], s.box);
        total += d * d;
    }
    return total / s.n;
}

// MSD of the true (never wrapped) displacement.
inline double msd_unwrapped(const ParticleState& s)
{
    double total = 0.0;
    for (double d : s.unwrapped_displacement) total += d * d;
    return total / s.n;
}

inline double kinetic_temperature(const ParticleState& s)
{
    double total = 0.0;
    for (double v : s.velocities) total += v * v;
    return total / (double(s.n) * s.dims);
}

inline ObservableSample sample_observables(const ParticleState& s, double u_pot)
{
    const auto com = periodic_com(s);
    return {s.time, d_com(s, com), msd(s), kinetic_temperature(s), u_pot, com.degenerate};
}

// First sample with d_com < threshold. Samples with a degenerate COM are skipped.
inline std::optional<double> convergence_time(const std::vector<ObservableSample>& series, double threshold)
{
    if (series.empty()) throw std::invalid_argument("convergence_time: empty series");
    for (auto& p : series)
        if (!p.com_degenerate && p.d_com < threshold) return p.time;
    return std::nullopt;
}

inline std::optional<double> convergence_time(const std::vector<std::pair<double, double>>& series, double threshold)
{
    if (series.empty()) throw std::invalid_argument("convergence_time: empty series");
    for (auto& [t, d] : series)
        if (d < threshold) return t;
    return std::nullopt;
}

// First time at which the (optionally moving-averaged) MSD decreases.
inline std::optional<double> msd_onset_time(const std::vector<std::pair<double, double>>& series, int window = 1)
{
    if (series.size() < 2) throw std::invalid_argument("msd_onset_time: need at least two samples");
    if (window < 1) throw std::invalid_argument("msd_onset_time: window must be >= 1");
    std::vector<double> smooth(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i].second;
        if (i >= std::size_t(window)) acc -= series[i - window].second;
        smooth[i] = acc / double(std::min<std::size_t>(i + 1, window));
    }
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        if (smooth[i + 1] - smooth[i] < 0.0) return series[i + 1].first;
    return std::nullopt;
}

} // namespace kclust
