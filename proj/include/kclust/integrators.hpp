#pragma once

#include <cmath>
#include <vector>

#include "forces.hpp"
#include "rng.hpp"
#include "state.hpp"

namespace kclust {

// A: x <- x + t v
inline void step_map_a(ParticleState& s, double t)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dx = t * s.velocities[i];
        s.unwrapped_displacement[i] += dx;
        s.positions[i] = wrap(s.positions[i] + dx, s.box);
    }
}

// B: v <- v + t F
inline void step_map_b(ParticleState& s, const std::vector<double>& forces, double t)
{
    for (std::size_t i = 0; i < s.size(); ++i) s.velocities[i] += t * forces[i];
}

// O: exact Ornstein-Uhlenbeck velocity update
inline void step_map_o(ParticleState& s, double gamma, double beta, double t, NormalStream& rng)
{
    if (gamma == 0.0 || t == 0.0) return;
    const double eta = std::exp(-gamma * t);
    const double sd = std::sqrt(-std::expm1(-2.0 * gamma * t) / beta);
    for (double& v : s.velocities) v = eta * v + sd * rng.normal();
}

// Coefficients of the exact free underdamped step over time t, in terms of g = gamma t.
struct UbuCoefficients {
    double eta;   // e^{-g}
    double e1;    // (1 - e^{-g}) / g
    double ghat;  // (g - 1 + e^{-g}) / g^2
    double qhat;  // [(1 - e^{-2g})/2 - (1 - e^{-g})^2 / g] / g^3

    static UbuCoefficients make(double g)
    {
        UbuCoefficients c;
        c.eta = std::exp(-g);
        if (g < 1e-2) {
            // the closed forms for ghat and qhat cancel badly for small g
            c.e1 = 1.0 - g / 2 + g * g / 6 - g * g * g / 24 + g * g * g * g / 120 - std::pow(g, 5) / 720;
            c.ghat = 0.5 - g / 6 + g * g / 24 - g * g * g / 120 + g * g * g * g / 720 - std::pow(g, 5) / 5040;
            c.qhat = 1.0 / 12 - g / 12 + 17 * g * g / 360 - 7 * g * g * g / 360 + 43 * g * g * g * g / 6720
                     - 107 * std::pow(g, 5) / 60480;
        } else {
            const double om = -std::expm1(-g);
            c.e1 = om / g;
            c.ghat = (g - om) / (g * g);
            c.qhat = (0.5 * (-std::expm1(-2.0 * g)) - om * om / g) / (g * g * g);
        }
        return c;
    }
};

// U: exact free Langevin flow over time t (gamma > 0), two normals per component.
inline void step_map_u(ParticleState& s, double gamma, double beta, double t, NormalStream& rng)
{
    const double g = gamma * t;
    const auto c = UbuCoefficients::make(g);
    const double sq = std::sqrt(std::max(c.qhat, 0.0));
    const double amp = std::sqrt(2.0 / beta);
    const double ax1 = amp * std::sqrt(gamma) * t * std::sqrt(t) * c.ghat;
    const double ax2 = -amp * std::sqrt(gamma) * t * std::sqrt(t) * sq;
    const double av1 = amp * c.e1 * std::sqrt(g);
    const double av2 = amp * sq * g * std::sqrt(g);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x1 = rng.normal(), x2 = rng.normal();
        const double v = s.velocities[i];
        const double dx = t * c.e1 * v + ax1 * x1 + ax2 * x2;
        s.velocities[i] = c.eta * v + av1 * x1 + av2 * x2;
        s.unwrapped_displacement[i] += dx;
        s.positions[i] = wrap(s.positions[i] + dx, s.box);
    }
}

// Advances a state with one of the splitting schemes, keeping the last force evaluation.
class Propagator {
public:
    Propagator(const SimConfig& c, ParticleState& s, NormalStream& rng)
        : kind_(c.integrator), pot_(c.potential), beta_(c.beta), gamma_(c.gamma), h_(c.step()), s_(s), rng_(rng)
    {
        u_pot_ = compute_forces(s_, pot_, forces_);
        forces_at_positions_ = true;
    }

    void step()
    {
        const double h = h_, hh = 0.5 * h_;
        switch (kind_) {
        case IntegratorKind::BAOAB:
            step_map_b(s_, forces_, hh);
            step_map_a(s_, hh);
            step_map_o(s_, gamma_, beta_, h, rng_);
            step_map_a(s_, hh);
            eval();
            step_map_b(s_, forces_, hh);
            break;
        case IntegratorKind::OBABO:
            step_map_o(s_, gamma_, beta_, hh, rng_);
            step_map_b(s_, forces_, hh);
            step_map_a(s_, h);
            eval();
            step_map_b(s_, forces_, hh);
            step_map_o(s_, gamma_, beta_, hh, rng_);
            break;
        case IntegratorKind::ABO:
            step_map_a(s_, h);
            eval();
            step_map_b(s_, forces_, h);
            step_map_o(s_, gamma_, beta_, h, rng_);
            break;
        case IntegratorKind::UBU:
            step_map_u(s_, gamma_, beta_, hh, rng_);
            eval();
            step_map_b(s_, forces_, h);
            step_map_u(s_, gamma_, beta_, hh, rng_);
            forces_at_positions_ = false;
            break;
        }
        s_.time += h;
    }

    // U_pot at the current positions
    double potential_energy()
    {
        if (!forces_at_positions_) {
            u_pot_ = kclust::potential_energy(s_, pot_);
            forces_at_positions_ = true;
        }
        return u_pot_;
    }

    double step_size() const { return h_; }

private:
    void eval()
    {
        u_pot_ = compute_forces(s_, pot_, forces_);
        forces_at_positions_ = true;
    }

    IntegratorKind kind_;
    PotentialSpec pot_;
    double beta_, gamma_, h_;
    ParticleState& s_;
    NormalStream& rng_;
    std::vector<double> forces_;
    double u_pot_ = 0.0;
    bool forces_at_positions_ = false;
};

} // namespace kclust
