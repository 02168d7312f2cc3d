#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "integrators.hpp"
#include "observables.hpp"
#include "state.hpp"

namespace kclust {

struct SimulationBlowUp : std::runtime_error {
    SimulationBlowUp(long step_) : std::runtime_error("non-finite state at step " + std::to_string(step_)), step(step_) {}
    long step;
};

struct TrajectoryRecord {
    std::vector<ObservableSample> samples;
    std::vector<Frame> frames; // filled when dump_trajectory is set
    ParticleState final_state;
    long steps_taken = 0;
    bool stopped_early = false;
};

// Called at every sample; return false to stop the run there.
using SampleObserver = std::function<bool(const ParticleState&, const ObservableSample&)>;

struct RunOptions {
    SampleObserver observer;
    bool keep_samples = true;
    const ParticleState* initial = nullptr; // use instead of init_state (the RNG stream is still seeded)
};

inline TrajectoryRecord run(const SimConfig& c, const RunOptions& opt = {})
{
    c.validate();
    NormalStream rng(c.seed);
    TrajectoryRecord rec;
    ParticleState s = opt.initial ? *opt.initial : init_state(c, rng);
    Propagator prop(c, s, rng);
    const double u_floor = 0.5 * (s.n - 1) * potential_minimum(c.potential);
    auto record = [&]() {
        const double u = prop.potential_energy();
        if (u < u_floor - 1e-9 * std::max(1.0, std::abs(u_floor)))
            throw std::logic_error("run: U_pot below its lower bound");
        const auto smp = sample_observables(s, u);
        if (opt.keep_samples) rec.samples.push_back(smp);
        if (c.dump_trajectory) rec.frames.push_back({s.time, s.positions});
        return opt.observer ? opt.observer(s, smp) : true;
    };
    bool go = record();
    for (long k = 1; go && k <= c.n_steps; ++k) {
        prop.step();
        if (!s.finite()) throw SimulationBlowUp(k);
        rec.steps_taken = k;
        if (k % c.print_every == 0) {
            go = record();
            if (!go && k < c.n_steps) rec.stopped_early = true;
        }
    }
    if (!go && rec.steps_taken == 0 && c.n_steps > 0) rec.stopped_early = true;
    rec.final_state = std::move(s);
    return rec;
}

} // namespace kclust
