#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "complex_matrix.hpp"

namespace kclust {

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg_reduce(ComplexMatrix& h)
{
    const std::size_t n = h.dim();
    if (n < 3) return;
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += abs1(h(i, k));
        if (scale == 0.0) continue;
        double sigma = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k) / scale;
            sigma += std::norm(v[i]);
        }
        double tail = sigma - std::norm(v[k + 1]);
        if (tail == 0.0) continue; // column already reduced
        const double alpha = std::sqrt(sigma);
        const cplx phase = std::abs(v[k + 1]) == 0.0 ? cplx(1.0) : v[k + 1] / std::abs(v[k + 1]);
        v[k + 1] += phase * alpha;
        const double vnorm2 = tail + std::norm(v[k + 1]);
        // H <- (I - 2 v v^*/|v|^2) H (I - 2 v v^*/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Rotation [c s; -conj(s) c] that zeroes q in (p, q).
struct Givens {
    double c = 1.0;
    cplx s{};

    static Givens make(cplx p, cplx q)
    {
        Givens g;
        if (q == cplx{}) return g;
        if (p == cplx{}) {
            g.c = 0.0;
            g.s = std::conj(q) / std::abs(q);
            return g;
        }
        const double ap = std::abs(p);
        const double nrm = std::hypot(ap, std::abs(q));
        g.c = ap / nrm;
        g.s = (p / ap) * std::conj(q) / nrm;
        return g;
    }
};

inline cplx wilkinson_shift(const ComplexMatrix& t, std::size_t iu, int iter)
{
    if ((iter == 10 || iter == 20) && iu >= 2)
        return std::abs(t(iu, iu - 1).real()) + std::abs(t(iu - 1, iu - 2).real());
    cplx a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
    const double nt = abs1(a) + abs1(b) + abs1(c) + abs1(d);
    if (nt == 0.0) return 0.0;
    a /= nt, b /= nt, c /= nt, d /= nt;
    const cplx bc = b * c;
    const cplx diff = a - d;
    const cplx disc = std::sqrt(diff * diff + 4.0 * bc);
    const cplx det = a * d - bc;
    const cplx tr = a + d;
    cplx e1 = 0.5 * (tr + disc), e2 = 0.5 * (tr - disc);
    if (abs1(e1) > abs1(e2))
        e2 = det / e1;
    else if (e2 != cplx{})
        e1 = det / e2;
    return nt * (abs1(e1 - d) < abs1(e2 - d) ? e1 : e2);
}

} // namespace detail

// All eigenvalues of a square complex matrix (Hessenberg + shifted QR).
inline std::vector<cplx> eigenvalues(ComplexMatrix t)
{
    if (!t.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entry");
    const std::size_t n = t.dim();
    std::vector<cplx> out;
    if (n == 0) return out;
    detail::hessenberg_reduce(t);

    const double eps = std::numeric_limits<double>::epsilon();
    const long budget = 50L * static_cast<long>(n);
    long sweeps = 0;
    int iter = 0;
    std::size_t iu = n - 1;
    auto negligible = [&](std::size_t i) {
        const double d = detail::abs1(t(i, i)) + detail::abs1(t(i - 1, i - 1));
        const double sd = detail::abs1(t(i, i - 1));
        return sd <= eps * d || sd < std::numeric_limits<double>::min();
    };
    while (true) {
        while (iu > 0 && negligible(iu)) {
            t(iu, iu - 1) = 0.0;
            --iu;
            iter = 0;
        }
        if (iu == 0) break;
        ++iter;
        if (++sweeps > budget)
            throw NonConvergence("eigenvalues: QR iteration exceeded " + std::to_string(budget) + " sweeps");
        std::size_t il = iu - 1;
        while (il > 0 && !negligible(il)) --il;
        if (il > 0) t(il, il - 1) = 0.0;

        const cplx shift = detail::wilkinson_shift(t, iu, iter);
        auto apply = [&](const detail::Givens& g, std::size_t i, std::size_t col0) {
            for (std::size_t j = col0; j <= iu; ++j) {
                const cplx x = t(i, j), y = t(i + 1, j);
                t(i, j) = g.c * x + g.s * y;
                t(i + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
            const std::size_t rmax = std::min(i + 2, iu);
            for (std::size_t r = il; r <= rmax; ++r) {
                const cplx x = t(r, i), y = t(r, i + 1);
                t(r, i) = x * g.c + y * std::conj(g.s);
                t(r, i + 1) = -x * g.s + y * g.c;
            }
        };
        apply(detail::Givens::make(t(il, il) - shift, t(il + 1, il)), il, il);
        for (std::size_t i = il + 1; i < iu; ++i) {
            const auto g = detail::Givens::make(t(i, i - 1), t(i + 1, i - 1));
            apply(g, i, i - 1);
            t(i + 1, i - 1) = 0.0;
        }
    }
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(t(i, i));
    return out;
}

// max Re(lambda) over the spectrum
inline double spectral_abscissa(const ComplexMatrix& m)
{
    const auto ev = eigenvalues(m);
    if (ev.empty()) throw std::invalid_argument("spectral_abscissa: empty matrix");
    double best = -std::numeric_limits<double>::infinity();
    for (auto& z : ev) best = std::max(best, z.real());
    return best;
}

} // namespace kclust
