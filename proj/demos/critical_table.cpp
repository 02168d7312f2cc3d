// Spectral thresholds and growth rates for the three potentials on L = 10.
#include <kclust/spectral.hpp>

#include <cstdio>

using namespace kclust;

int main()
{
    const std::pair<const char*, PotentialSpec> pots[] = {
        {"gaussian s2=0.5", PotentialSpec::gaussian(0.5)},
        {"gem-4 s2=0.5", PotentialSpec::gem(0.5, 4.0)},
        {"morse a=2 De=1", PotentialSpec::morse(2.0, 1.0)},
        {"morse a=1 De=2", PotentialSpec::morse(1.0, 2.0)},
    };
    std::printf("%-18s %9s %12s\n", "potential", "beta_c", "psi(25)");
    for (auto& [name, p] : pots) {
        StabilityConfig c;
        c.potential = p;
        const auto bc = critical_beta(c);
        c.beta = 25.0;
        c.hermite_dim = 40;
        std::printf("%-18s %9.4f %12.6f\n", name, bc.value_or(NAN), max_growth_rate(c));
    }
}
