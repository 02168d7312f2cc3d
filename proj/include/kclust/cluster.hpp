#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace kclust {

struct DbscanParams {
    double eps = 0.5;
    int min_pts = 10;
    bool periodic = false; // minimum-image distances; off by default

    void validate() const
    {
        if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be positive");
        if (min_pts < 2) throw std::invalid_argument("dbscan: min_pts must be >= 2");
    }

    // eps = eps_tilde L, min_pts = round(min_pts_tilde N)
    static DbscanParams dimensionless(double eps_tilde, double min_pts_tilde, double box, int n)
    {
        DbscanParams p{eps_tilde * box, int(std::lround(min_pts_tilde * n))};
        p.validate();
        return p;
    }

    // min_pts = round(min_pts_0 N / N_0)
    static DbscanParams scaled(double eps, int min_pts_0, int n_0, int n)
    {
        DbscanParams p{eps, int(std::lround(double(min_pts_0) * n / n_0))};
        p.validate();
        return p;
    }
};

struct ClusterLabels {
    std::vector<int> labels; // -1 noise, else cluster id
    int n_clusters = 0;
};

// Plain O(N^2) DBSCAN. The neighbourhood of p counts p itself.
inline ClusterLabels dbscan(std::span<const double> positions, int dims, double box, const DbscanParams& prm)
{
    prm.validate();
    const std::size_t n = positions.size() / dims;
    const double eps2 = prm.eps * prm.eps;
    auto close = [&](std::size_t a, std::size_t b) {
        double r2 = 0.0;
        for (int c = 0; c < dims; ++c) {
            double d = positions[a * dims + c] - positions[b * dims + c];
            if (prm.periodic) d = minimum_image(d, box);
            r2 += d * d;
        }
        return r2 <= eps2;
    };
    std::vector<std::vector<int>> nbr(n);
    for (std::size_t i = 0; i < n; ++i) {
        nbr[i].push_back(int(i));
        for (std::size_t j = i + 1; j < n; ++j)
            if (close(i, j)) {
                nbr[i].push_back(int(j));
                nbr[j].push_back(int(i));
            }
    }
    ClusterLabels out;
    out.labels.assign(n, -1);
    std::vector<char> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = nbr[i].size() >= std::size_t(prm.min_pts);

    std::deque<int> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || out.labels[i] != -1) continue;
        const int id = out.n_clusters++;
        out.labels[i] = id;
        queue.push_back(int(i));
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            if (!core[p]) continue;
            for (int q : nbr[p]) {
                if (out.labels[q] != -1) continue;
                out.labels[q] = id;
                queue.push_back(q);
            }
        }
    }
    return out;
}

inline ClusterLabels dbscan(const ParticleState& s, const DbscanParams& prm)
{
    return dbscan(s.positions, s.dims, s.box, prm);
}

struct Frame {
    double time = 0.0;
    std::vector<double> positions;
};

struct Onset {
    double time = 0.0;
    int n_clusters = 0;
};

// First frame in which DBSCAN finds a cluster.
inline std::optional<Onset> onset_time(const std::vector<Frame>& frames, int dims, double box, double eps_tilde,
                                       double min_pts_tilde)
{
    if (frames.empty()) throw std::invalid_argument("onset_time: no frames");
    for (auto& f : frames) {
        const int n = int(f.positions.size() / dims);
        const auto lab = dbscan(f.positions, dims, box, DbscanParams::dimensionless(eps_tilde, min_pts_tilde, box, n));
        if (lab.n_clusters > 0) return Onset{f.time, lab.n_clusters};
    }
    return std::nullopt;
}

} // namespace kclust
