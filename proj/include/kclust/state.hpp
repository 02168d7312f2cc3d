#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "potentials.hpp"
#include "rng.hpp"

namespace kclust {

enum class IntegratorKind { BAOAB, OBABO, ABO, UBU };

inline std::string to_string(IntegratorKind k)
{
    switch (k) {
    case IntegratorKind::BAOAB: return "baoab";
    case IntegratorKind::OBABO: return "obabo";
    case IntegratorKind::ABO: return "abo";
    case IntegratorKind::UBU: return "ubu";
    }
    return "?";
}

inline IntegratorKind parse_integrator(const std::string& s)
{
    if (s == "baoab") return IntegratorKind::BAOAB;
    if (s == "obabo") return IntegratorKind::OBABO;
    if (s == "abo") return IntegratorKind::ABO;
    if (s == "ubu") return IntegratorKind::UBU;
    throw std::invalid_argument("unknown integrator: " + s);
}

struct SimConfig {
    int n_particles = 200;
    int dims = 1;
    double box = 10.0;
    double beta = 25.0;
    double gamma = 1.0;
    double h = 1.0;
    bool auto_scale_step = false; // h_effective = h * min(gamma, 1/gamma)
    long n_steps = 1000;
    long print_every = 100;
    IntegratorKind integrator = IntegratorKind::BAOAB;
    PotentialSpec potential = PotentialSpec::gaussian(0.5);
    std::uint64_t seed = 1;
    bool dump_trajectory = false;

    double step() const
    {
        if (!auto_scale_step || gamma == 0.0) return h;
        return h * std::min(gamma, 1.0 / gamma);
    }

    void validate() const
    {
        if (n_particles < 1) throw std::invalid_argument("config: n_particles must be >= 1");
        if (dims < 1 || dims > 3) throw std::invalid_argument("config: dims must be 1, 2 or 3");
        if (!(box > 0.0)) throw std::invalid_argument("config: box must be positive");
        if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
        if (!(gamma >= 0.0)) throw std::invalid_argument("config: gamma must be >= 0");
        if (!(h > 0.0)) throw std::invalid_argument("config: h must be positive");
        if (n_steps < 0) throw std::invalid_argument("config: n_steps must be >= 0");
        if (print_every < 1) throw std::invalid_argument("config: print_every must be >= 1");
        if (integrator == IntegratorKind::UBU && gamma == 0.0)
            throw std::invalid_argument("config: UBU needs gamma > 0");
        potential.validate();
        if (potential.kind == PotentialKind::WrappedGaussian)
            throw std::invalid_argument("config: the wrapped Gaussian is for spectral checks only");
    }
};

// dx - L round(dx/L), in [-L/2, L/2)
inline double minimum_image(double dx, double box)
{
    double r = dx - box * std::floor(dx / box + 0.5);
    if (r >= 0.5 * box) r -= box;
    if (r < -0.5 * box) r += box;
    return r;
}

inline double wrap(double x, double box)
{
    double r = x - box * std::floor(x / box);
    if (r >= box) r -= box;
    if (r < 0.0) r = 0.0;
    return r;
}

// Flat storage: component c of particle i sits at i * dims + c.
struct ParticleState {
    int n = 0;
    int dims = 1;
    double box = 1.0;
    double time = 0.0;
    std::vector<double> positions;
    std::vector<double> velocities;
    std::vector<double> initial_positions;
    std::vector<double> unwrapped_displacement;

    ParticleState() = default;
    ParticleState(int n_, int dims_, double box_)
        : n(n_), dims(dims_), box(box_), positions(std::size_t(n_) * dims_), velocities(positions.size()),
          initial_positions(positions.size()), unwrapped_displacement(positions.size())
    {
    }

    std::size_t size() const { return positions.size(); }

    // Start measuring displacements from the current positions.
    void freeze_initial()
    {
        initial_positions = positions;
        std::fill(unwrapped_displacement.begin(), unwrapped_displacement.end(), 0.0);
    }

    bool finite() const
    {
        for (std::size_t i = 0; i < size(); ++i)
            if (!std::isfinite(positions[i]) || !std::isfinite(velocities[i])) return false;
        return true;
    }
};

// Positions uniform on [0, L)^d, then velocities N(0, 1/beta), both in (particle, component) order.
inline ParticleState init_state(const SimConfig& c, NormalStream& rng)
{
    c.validate();
    ParticleState s(c.n_particles, c.dims, c.box);
    for (double& x : s.positions) x = wrap(c.box * (1.0 - rng.uniform()), c.box);
    const double sd = 1.0 / std::sqrt(c.beta);
    for (double& v : s.velocities) v = sd * rng.normal();
    s.freeze_initial();
    return s;
}

inline ParticleState init_state(const SimConfig& c)
{
    NormalStream rng(c.seed);
    return init_state(c, rng);
}

} // namespace kclust
