#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "observables.hpp"
#include "state.hpp"

namespace kclust {

// %.10g, the number format of every text output
inline std::string fmt_num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& x) { return x ? fmt_num(*x) : "NA"; }

inline constexpr const char* observable_header = "time,d_com,msd,t_kin,u_pot";

inline void write_observables(std::ostream& os, const std::vector<ObservableSample>& samples)
{
    os << observable_header << '\n';
    for (auto& s : samples)
        os << fmt_num(s.time) << ',' << fmt_num(s.d_com) << ',' << fmt_num(s.msd) << ',' << fmt_num(s.t_kin) << ','
           << fmt_num(s.u_pot) << '\n';
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_num(const std::string& s, const std::string& where)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + s + "'");
    }
}

inline std::vector<ObservableSample> read_observables(std::istream& is, const std::string& name = "observables")
{
    std::string line;
    if (!std::getline(is, line) || line != observable_header) throw ParseError(name + ":1: bad header");
    std::vector<ObservableSample> out;
    int ln = 1;
    while (std::getline(is, line)) {
        ++ln;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 5) throw ParseError(name + ":" + std::to_string(ln) + ": expected 5 columns");
        ObservableSample s;
        double* dst[5] = {&s.time, &s.d_com, &s.msd, &s.t_kin, &s.u_pot};
        for (int c = 0; c < 5; ++c)
            *dst[c] = parse_num(cells[c], name + ":" + std::to_string(ln) + ":" + std::to_string(c + 1));
        out.push_back(s);
    }
    return out;
}

// "# t=<time>" then one line per particle with dims space-separated coordinates.
inline void write_frame(std::ostream& os, const Frame& f, int dims)
{
    os << "# t=" << fmt_num(f.time) << '\n';
    const std::size_t n = f.positions.size() / dims;
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < dims; ++c) {
            if (c) os << ' ';
            os << fmt_num(f.positions[i * dims + c]);
        }
        os << '\n';
    }
}

struct TrajectoryFile {
    int dims = 0;
    std::vector<Frame> frames;
};

inline TrajectoryFile read_frames(std::istream& is, const std::string& name = "trajectory")
{
    TrajectoryFile out;
    std::string line;
    int ln = 0;
    std::size_t n_particles = 0;
    auto close_frame = [&]() {
        if (out.frames.empty()) return;
        const auto& f = out.frames.back();
        const std::size_t n = out.dims ? f.positions.size() / out.dims : 0;
        if (n == 0) throw ParseError(name + ": frame at t=" + fmt_num(f.time) + " has no particles");
        if (n_particles == 0) n_particles = n;
        if (n != n_particles) throw ParseError(name + ": frame at t=" + fmt_num(f.time) + " has a different particle count");
    };
    while (std::getline(is, line)) {
        ++ln;
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(ln);
        if (line.rfind("# t=", 0) == 0) {
            close_frame();
            out.frames.push_back({parse_num(line.substr(4), where), {}});
            continue;
        }
        if (out.frames.empty()) throw ParseError(where + ": coordinates before the first '# t=' header");
        std::istringstream ls(line);
        std::string tok;
        int count = 0;
        while (ls >> tok) {
            out.frames.back().positions.push_back(parse_num(tok, where));
            ++count;
        }
        if (out.dims == 0) out.dims = count;
        if (count != out.dims) throw ParseError(where + ": expected " + std::to_string(out.dims) + " coordinates");
    }
    close_frame();
    return out;
}

// key=value lines
inline void write_manifest(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& kv)
{
    for (auto& [k, v] : kv) os << k << '=' << v << '\n';
}

inline std::vector<std::pair<std::string, std::string>> describe(const SimConfig& c)
{
    const auto& p = c.potential;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"potential", to_string(p.kind)},
        {"n", std::to_string(c.n_particles)},
        {"dims", std::to_string(c.dims)},
        {"box", fmt_num(c.box)},
        {"beta", fmt_num(c.beta)},
        {"gamma", fmt_num(c.gamma)},
        {"h", fmt_num(c.h)},
        {"auto_scale_step", c.auto_scale_step ? "1" : "0"},
        {"h_effective", fmt_num(c.step())},
        {"steps", std::to_string(c.n_steps)},
        {"print_every", std::to_string(c.print_every)},
        {"integrator", to_string(c.integrator)},
        {"seed", std::to_string(c.seed)},
        {"dump_traj", c.dump_trajectory ? "1" : "0"},
    };
    switch (p.kind) {
    case PotentialKind::Gaussian: kv.push_back({"sigma2", fmt_num(p.sigma2)}); break;
    case PotentialKind::Gem:
        kv.push_back({"sigma2", fmt_num(p.sigma2)});
        kv.push_back({"gem_alpha", fmt_num(p.alpha)});
        break;
    case PotentialKind::Morse:
        kv.push_back({"morse_a", fmt_num(p.a)});
        kv.push_back({"morse_de", fmt_num(p.de)});
        break;
    default: break;
    }
    return kv;
}

} // namespace kclust
