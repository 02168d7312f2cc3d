#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace kclust {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, cplx{}) {}

    ComplexMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries))
    {
        if (a_.size() != n * n)
            throw std::invalid_argument("ComplexMatrix: entry count does not match dimension");
        if (!all_finite())
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size())
    {
        a_.reserve(n_ * n_);
        for (auto& r : rows) {
            if (r.size() != n_)
                throw std::invalid_argument("ComplexMatrix: matrix must be square");
            a_.insert(a_.end(), r.begin(), r.end());
        }
        if (!all_finite())
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    cplx* row(std::size_t i) { return a_.data() + i * n_; }
    const cplx* row(std::size_t i) const { return a_.data() + i * n_; }

    bool all_finite() const
    {
        for (auto& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s)
    {
        for (auto& z : a_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
    {
        a.check_same(b);
        const std::size_t n = a.n_;
        ComplexMatrix c(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx* ci = c.row(i);
            const cplx* ai = a.row(i);
            for (std::size_t k = 0; k < n; ++k) {
                const cplx aik = ai[k];
                if (aik == cplx{}) continue;
                const cplx* bk = b.row(k);
                for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
            }
        }
        return c;
    }

    ComplexMatrix adjoint() const
    {
        ComplexMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const
    {
        cplx t{};
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    // max column sum
    double norm1() const
    {
        double best = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double frobenius() const
    {
        double s = 0.0;
        for (auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

private:
    void check_same(const ComplexMatrix& o) const
    {
        if (o.n_ != n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

// Tr(A B A^*) without forming the product with A^*.
inline cplx trace_sandwich(const ComplexMatrix& a, const ComplexMatrix& b)
{
    const ComplexMatrix ab = a * b;
    cplx t{};
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t += ab(i, j) * std::conj(a(i, j));
    return t;
}

// Solve A X = B by LU with partial pivoting. Throws on a singular pivot.
inline ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b)
{
    const std::size_t n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), p = i;
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(b(k, j), b(p, j));
            }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            if (f == cplx{}) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < n; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = b(kk, j);
            for (std::size_t m = kk + 1; m < n; ++m) s -= a(kk, m) * b(m, j);
            b(kk, j) = s / a(kk, kk);
        }
    }
    return b;
}

} // namespace kclust
