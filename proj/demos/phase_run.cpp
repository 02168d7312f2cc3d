// 1D Gaussian system above and below the threshold: d_com every 500 time units.
#include <kclust/simulation.hpp>

#include <cstdio>

using namespace kclust;

int main()
{
    for (double beta : {3.0, 25.0}) {
        SimConfig c;
        c.beta = beta;
        c.n_steps = 5000;
        c.print_every = 500;
        const auto rec = run(c);
        std::printf("beta = %g\n  t      d_com   T_kin   U_pot\n", beta);
        for (auto& s : rec.samples) std::printf("  %-6g %.4f  %.4f  %.3f\n", s.time, s.d_com, s.t_kin, s.u_pot);
    }
}
