#pragma once

// Fixed-capacity dense complex matrices and vectors for level systems of
// dimension <= 6, plus the handful of operations the steering simulator
// needs: products, adjoints, traces, Frobenius norms and a cyclic-Jacobi
// Hermitian eigensolver used for positivity checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerlab {

using cxd = std::complex<double>;

inline constexpr int kMaxDim = 6;
inline constexpr double kHermTol = 1e-10;

namespace detail {
inline void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "], got " +
                                    std::to_string(dim));
}
}  // namespace detail

/// Square complex matrix, row-major, value semantic. Capacity is fixed at
/// kMaxDim x kMaxDim; the logical dimension is a runtime field.
class ComplexMatrix {
  public:
    ComplexMatrix() : dim_(1) { a_.fill(cxd{}); }

    explicit ComplexMatrix(int dim) : dim_(dim) {
        detail::check_dim(dim);
        a_.fill(cxd{});
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cxd>> rows) {
        const int dim = static_cast<int>(rows.size());
        ComplexMatrix m(dim);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim)
                throw std::invalid_argument("from_rows: ragged row list");
            int j = 0;
            for (const cxd& v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int dim() const { return dim_; }

    cxd& operator()(int i, int j) { return a_[static_cast<size_t>(i) * kMaxDim + j]; }
    const cxd& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * kMaxDim + j]; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) -= o(i, j);
        return *this;
    }
    ComplexMatrix& operator*=(cxd s) {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
        return *this;
    }

    /// In-place a += s*b; avoids temporaries in the integrator hot loop.
    void axpy(cxd s, const ComplexMatrix& b) {
        require_same_dim(b);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) += s * b(i, j);
    }

    void require_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_)
            throw std::invalid_argument("matrix dimension mismatch: " +
                                        std::to_string(dim_) + " vs " +
                                        std::to_string(o.dim_));
    }

  private:
    int dim_;
    std::array<cxd, kMaxDim * kMaxDim> a_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(cxd s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, cxd s) { return a *= s; }

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cxd aik = a(i, k);
            if (aik == cxd{}) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return mat_mul(a, b);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

inline cxd trace(const ComplexMatrix& a) {
    cxd t{};
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

/// ||A - A^dag||_F, the distance from the Hermitian subspace.
inline double hermiticity_defect(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s);
}

inline bool all_finite(const ComplexMatrix& a) {
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

/// Complex column vector with the same fixed capacity as ComplexMatrix.
class ComplexVector {
  public:
    ComplexVector() : dim_(1) { v_.fill(cxd{}); }

    explicit ComplexVector(int dim) : dim_(dim) {
        detail::check_dim(dim);
        v_.fill(cxd{});
    }

    static ComplexVector from(std::initializer_list<cxd> entries) {
        ComplexVector v(static_cast<int>(entries.size()));
        int i = 0;
        for (const cxd& e : entries) v[i++] = e;
        return v;
    }

    /// Basis ket |index> in the given dimension.
    static ComplexVector basis(int dim, int index) {
        ComplexVector v(dim);
        if (index < 0 || index >= dim)
            throw std::invalid_argument("basis index out of range");
        v[index] = 1.0;
        return v;
    }

    int dim() const { return dim_; }
    cxd& operator[](int i) { return v_[static_cast<size_t>(i)]; }
    const cxd& operator[](int i) const { return v_[static_cast<size_t>(i)]; }

  private:
    int dim_;
    std::array<cxd, kMaxDim> v_;
};

/// <bra|ket>; conjugates the first argument.
inline cxd dot(const ComplexVector& bra, const ComplexVector& ket) {
    if (bra.dim() != ket.dim()) throw std::invalid_argument("vector dimension mismatch");
    cxd s{};
    for (int i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
    return s;
}

inline double norm(const ComplexVector& v) {
    double s = 0.0;
    for (int i = 0; i < v.dim(); ++i) s += std::norm(v[i]);
    return std::sqrt(s);
}

inline bool all_finite(const ComplexVector& v) {
    for (int i = 0; i < v.dim(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

/// |u><v| outer product.
inline ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("vector dimension mismatch");
    ComplexMatrix m(u.dim());
    for (int i = 0; i < u.dim(); ++i)
        for (int j = 0; j < v.dim(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

inline ComplexVector apply(const ComplexMatrix& a, const ComplexVector& v) {
    if (a.dim() != v.dim()) throw std::invalid_argument("matrix/vector dimension mismatch");
    ComplexVector r(v.dim());
    for (int i = 0; i < a.dim(); ++i) {
        cxd s{};
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

/// <bra| A |ket>.
inline cxd sandwich(const ComplexVector& bra, const ComplexMatrix& a, const ComplexVector& ket) {
    return dot(bra, apply(a, ket));
}

namespace detail {
inline double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}
}  // namespace detail

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi with complex
/// plane rotations; converges to off-diagonal Frobenius norm < 1e-13 in a
/// handful of sweeps at these sizes. Rejects input whose Hermiticity defect
/// exceeds kHermTol.
inline std::vector<double> herm_eigvals(const ComplexMatrix& input) {
    const double defect = hermiticity_defect(input);
    if (!(defect < kHermTol))
        throw std::invalid_argument("herm_eigvals: matrix is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
    const int n = input.dim();

    // Work on the exactly-Hermitian part.
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

    constexpr double kOffTol = 1e-13;
    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (detail::offdiag_norm(a) < kOffTol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double m = std::abs(apq);
                if (m < 1e-300) continue;
                const cxd phase = apq / m;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double d = (aqq - app) / (2.0 * m);
                const double sgn = (d >= 0.0) ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(d) + std::sqrt(d * d + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- V^dag A V with V = [[c, -s e^{i th}], [s e^{-i th}, c]]
                // on rows/cols (p, q), th = arg(a_pq).
                for (int k = 0; k < n; ++k) {
                    const cxd akp = a(k, p);
                    const cxd akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(phase) * akq;
                    a(k, q) = -s * phase * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cxd apk = a(p, k);
                    const cxd aqk = a(q, k);
                    a(p, k) = c * apk + s * phase * aqk;
                    a(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
            }
        }
    }
    if (!(detail::offdiag_norm(a) < 1e-11))
        throw std::runtime_error("herm_eigvals: Jacobi iteration failed to converge");

    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace steerlab
