#pragma once

// Small fixed-capacity vectors and matrices over an arbitrary scalar type.
// Dimensions are runtime values bounded by kMaxDim, which is enough for
// CP^n / CH^n / C^n x R with n <= 4.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

#include "cosym/error.hpp"

namespace cosym {

inline constexpr int kMaxComplexDim = 4;
inline constexpr int kMaxDim = 2 * kMaxComplexDim + 1;

template <class S>
class Vec {
public:
    Vec() : n_(0) {}
    explicit Vec(int n, const S& fill = S(0.0)) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        for (int i = 0; i < kMaxDim; ++i) v_[i] = fill;
    }
    Vec(std::initializer_list<S> init) : Vec(static_cast<int>(init.size())) {
        int i = 0;
        for (const auto& x : init) v_[i++] = x;
    }

    int size() const { return n_; }
    S& operator[](int i) { return v_[i]; }
    const S& operator[](int i) const { return v_[i]; }

    static Vec unit(int n, int axis) {
        Vec e(n);
        e[axis] = S(1.0);
        return e;
    }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(const S& s) {
        for (int i = 0; i < n_; ++i) v_[i] *= s;
        return *this;
    }
    Vec& operator/=(const S& s) {
        for (int i = 0; i < n_; ++i) v_[i] /= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, const S& s) { return a *= s; }
    friend Vec operator*(const S& s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, const S& s) { return a /= s; }
    friend Vec operator-(Vec a) {
        for (int i = 0; i < a.n_; ++i) a.v_[i] = -a.v_[i];
        return a;
    }

private:
    int n_;
    std::array<S, kMaxDim> v_{};
};

template <class S>
class Mat {
public:
    Mat() : n_(0) {}
    explicit Mat(int n, const S& fill = S(0.0)) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        for (auto& x : a_) x = fill;
    }
    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
        return m;
    }

    int size() const { return n_; }
    S& operator()(int i, int j) { return a_[i * kMaxDim + j]; }
    const S& operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

    Vec<S> operator*(const Vec<S>& x) const {
        Vec<S> y(n_);
        for (int i = 0; i < n_; ++i) {
            S acc(0.0);
            for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }
    Mat operator*(const Mat& o) const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                S acc(0.0);
                for (int k = 0; k < n_; ++k) acc += (*this)(i, k) * o(k, j);
                r(i, j) = acc;
            }
        return r;
    }
    Mat transpose() const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

private:
    int n_;
    std::array<S, kMaxDim * kMaxDim> a_{};
};

/// Bilinear form x^T g y.
template <class S>
S bilinear(const Mat<S>& g, const Vec<S>& x, const Vec<S>& y) {
    S acc(0.0);
    for (int i = 0; i < g.size(); ++i) {
        S row(0.0);
        for (int j = 0; j < g.size(); ++j) row += g(i, j) * y[j];
        acc += x[i] * row;
    }
    return acc;
}

template <class S>
S dot(const Vec<S>& x, const Vec<S>& y) {
    S acc(0.0);
    for (int i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

inline double max_abs(const Vec<double>& x) {
    double m = 0.0;
    for (int i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

inline double max_abs(const Mat<double>& a) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

/// Inverse of a symmetric positive-definite matrix (Cholesky).
inline Mat<double> spd_inverse(const Mat<double>& a) {
    const int n = a.size();
    Mat<double> l(n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw DegenerateError("matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    // inv(L), lower triangular
    Mat<double> li(n);
    for (int i = 0; i < n; ++i) {
        li(i, i) = 1.0 / l(i, i);
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= l(i, k) * li(k, j);
            li(i, j) = s / l(i, i);
        }
    }
    Mat<double> inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j); k < n; ++k) s += li(k, i) * li(k, j);
            inv(i, j) = s;
        }
    return inv;
}

/// True when a Cholesky factorization exists.
inline bool is_positive_definite(const Mat<double>& a) {
    try {
        (void)spd_inverse(a);
        return true;
    } catch (const DegenerateError&) {
        return false;
    }
}

/// Eigenvalues (ascending) and unit eigenvectors of a symmetric 2x2 matrix.
struct Eigen2 {
    double lo = 0.0, hi = 0.0;
    std::array<double, 2> vec_lo{1.0, 0.0}, vec_hi{0.0, 1.0};
};

inline Eigen2 symmetric_eigen2(double a, double b, double d) {
    Eigen2 r;
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    r.lo = mean - rad;
    r.hi = mean + rad;
    if (rad == 0.0) return r;
    // eigenvector for hi: (b, hi - a) or (hi - d, b), whichever is better conditioned
    double x = b, y = r.hi - a;
    if (std::hypot(x, y) < std::hypot(r.hi - d, b)) {
        x = r.hi - d;
        y = b;
    }
    const double nrm = std::hypot(x, y);
    r.vec_hi = {x / nrm, y / nrm};
    r.vec_lo = {-r.vec_hi[1], r.vec_hi[0]};
    return r;
}

}  // namespace cosym
