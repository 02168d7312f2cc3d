#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "complex_matrix.hpp"

namespace kclust {

// Inputs with a larger 1-norm are refused rather than squared into overflow.
inline constexpr double expm_norm_limit = 1e6;

// e^A by scaling and squaring with a [8/8] Pade approximant.
inline ComplexMatrix expm(const ComplexMatrix& a)
{
    if (!a.all_finite()) throw std::invalid_argument("expm: non-finite entry");
    const std::size_t n = a.dim();
    const double nrm = a.norm1();
    if (nrm > expm_norm_limit) throw std::overflow_error("expm: norm exceeds supported range");

    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const ComplexMatrix x = a * cplx(std::ldexp(1.0, -s));

    constexpr int q = 8;
    std::array<double, q + 1> c{};
    c[0] = 1.0;
    for (int j = 1; j <= q; ++j) c[j] = c[j - 1] * (q - j + 1) / (double(j) * (2 * q - j + 1));

    ComplexMatrix num = ComplexMatrix::identity(n), den = ComplexMatrix::identity(n);
    ComplexMatrix p = ComplexMatrix::identity(n);
    for (int j = 1; j <= q; ++j) {
        p = p * x;
        num += p * cplx(c[j]);
        den += p * cplx((j % 2 ? -1.0 : 1.0) * c[j]);
    }
    ComplexMatrix r = lu_solve(den, num);
    for (int i = 0; i < s; ++i) r = r * r;
    if (!r.all_finite()) throw std::overflow_error("expm: result overflowed");
    return r;
}

} // namespace kclust
