#pragma once

// Truncated two-variable Taylor arithmetic.
//
// A Jet<T, K> stores the Taylor coefficients c(i, j) = d^i_u d^j_v f / (i! j!)
// of a scalar field f(u, v) for all i + j <= K. Arithmetic is exact up to the
// truncation order, so derivatives of any composition of the supported
// primitives come out to machine precision. The scalar type T may itself be a
// Jet, which gives nested (mixed) differentiation for free.

#include <array>
#include <cmath>
#include <ostream>
#include <type_traits>

#include "cosym/error.hpp"

namespace cosym {

template <class T, int K>
class Jet;

template <class T>
struct is_jet : std::false_type {};
template <class T, int K>
struct is_jet<Jet<T, K>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

inline double primal(double x) { return x; }

template <class T, int K>
double primal(const Jet<T, K>& x) {
    return primal(x.value());
}

template <class T, int K>
class Jet {
    static_assert(K >= 0, "jet order must be non-negative");

public:
    using scalar_type = T;
    static constexpr int order = K;
    static constexpr int size = (K + 1) * (K + 2) / 2;

    static constexpr int index(int i, int j) {
        const int d = i + j;
        return d * (d + 1) / 2 + j;
    }

    Jet() { c_.fill(T(0.0)); }
    Jet(const T& value) {  // NOLINT(google-explicit-constructor)
        c_.fill(T(0.0));
        c_[0] = value;
    }
    template <class S>
        requires(std::is_arithmetic_v<S> && !std::is_same_v<S, T>)
    Jet(S value) : Jet(T(static_cast<double>(value))) {}  // NOLINT

    /// Jet of the coordinate function u (value + du).
    static Jet variable_u(const T& value) {
        Jet j(value);
        if constexpr (K >= 1) j.coeff(1, 0) = T(1.0);
        return j;
    }
    /// Jet of the coordinate function v.
    static Jet variable_v(const T& value) {
        Jet j(value);
        if constexpr (K >= 1) j.coeff(0, 1) = T(1.0);
        return j;
    }

    const T& value() const { return c_[0]; }
    T& value() { return c_[0]; }
    const T& coeff(int i, int j) const { return c_[index(i, j)]; }
    T& coeff(int i, int j) { return c_[index(i, j)]; }
    const std::array<T, size>& coeffs() const { return c_; }

    /// Partial derivative d^i_u d^j_v at the expansion point.
    T derivative(int i, int j) const {
        if (i < 0 || j < 0 || i + j > K) return T(0.0);
        return coeff(i, j) * T(factorial(i) * factorial(j));
    }

    /// Jet of df/du, one order lower.
    Jet<T, (K > 0 ? K - 1 : 0)> du() const {
        Jet<T, (K > 0 ? K - 1 : 0)> r;
        if constexpr (K > 0) {
            for (int d = 0; d < K; ++d)
                for (int j = 0; j <= d; ++j) r.coeff(d - j, j) = coeff(d - j + 1, j) * T(double(d - j + 1));
        }
        return r;
    }
    /// Jet of df/dv, one order lower.
    Jet<T, (K > 0 ? K - 1 : 0)> dv() const {
        Jet<T, (K > 0 ? K - 1 : 0)> r;
        if constexpr (K > 0) {
            for (int d = 0; d < K; ++d)
                for (int j = 0; j <= d; ++j) r.coeff(d - j, j) = coeff(d - j, j + 1) * T(double(j + 1));
        }
        return r;
    }

    template <int L>
    Jet<T, L> truncate() const {
        static_assert(L <= K);
        Jet<T, L> r;
        for (int d = 0; d <= L; ++d)
            for (int j = 0; j <= d; ++j) r.coeff(d - j, j) = coeff(d - j, j);
        return r;
    }

    /// Antiderivative in u vanishing on u = 0; the top order is dropped.
    Jet integrate_u() const {
        Jet r;
        for (int d = 1; d <= K; ++d)
            for (int j = 0; j <= d - 1; ++j) {
                const int i = d - j;
                r.coeff(i, j) = coeff(i - 1, j) / T(double(i));
            }
        return r;
    }

    Jet operator-() const {
        Jet r;
        for (int k = 0; k < size; ++k) r.c_[k] = -c_[k];
        return r;
    }
    Jet& operator+=(const Jet& o) {
        for (int k = 0; k < size; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k < size; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        *this = *this / o;
        return *this;
    }
    Jet& operator+=(const T& s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(const T& s) {
        c_[0] -= s;
        return *this;
    }
    Jet& operator*=(const T& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Jet& operator/=(const T& s) {
        for (auto& x : c_) x /= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, const T& s) { return a += s; }
    friend Jet operator+(const T& s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, const T& s) { return a -= s; }
    friend Jet operator-(const T& s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, const T& s) { return a *= s; }
    friend Jet operator*(const T& s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, const T& s) { return a /= s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int d = 0; d <= K; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                T acc(0.0);
                for (int p = 0; p <= i; ++p)
                    for (int q = 0; q <= j; ++q) acc += a.coeff(p, q) * b.coeff(i - p, j - q);
                r.coeff(i, j) = acc;
            }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(const T& s, const Jet& b) { return reciprocal(b) * s; }

    /// f(a) given the Taylor coefficients f^(k)(a0)/k! of a univariate f.
    friend Jet compose(const Jet& a, const std::array<T, K + 1>& taylor) {
        Jet delta = a;
        delta.c_[0] = T(0.0);
        Jet r(taylor[K]);
        for (int k = K - 1; k >= 0; --k) {
            r = delta * r;
            r.c_[0] += taylor[k];
        }
        return r;
    }

    friend Jet reciprocal(const Jet& a) {
        if (primal(a.value()) == 0.0) throw DomainError("jet division by a field vanishing at the expansion point");
        std::array<T, K + 1> t;
        const T inv = T(1.0) / a.value();
        t[0] = inv;
        for (int k = 1; k <= K; ++k) t[k] = -t[k - 1] * inv;
        return compose(a, t);
    }

    friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
        os << "Jet{";
        for (int k = 0; k < size; ++k) os << (k ? ", " : "") << j.c_[k];
        return os << "}";
    }

private:
    static constexpr double factorial(int n) {
        double r = 1.0;
        for (int k = 2; k <= n; ++k) r *= k;
        return r;
    }

    std::array<T, size> c_;
};

// Analytic primitives. Each builds the univariate Taylor coefficients at the
// expansion value and composes.

template <class T, int K>
Jet<T, K> sqrt(const Jet<T, K>& a) {
    using std::sqrt;
    if (primal(a.value()) <= 0.0) throw DomainError("jet sqrt of a non-positive value");
    std::array<T, K + 1> t;
    const T inv = T(1.0) / a.value();
    t[0] = sqrt(a.value());
    for (int k = 1; k <= K; ++k) t[k] = t[k - 1] * T((0.5 - (k - 1)) / k) * inv;
    return compose(a, t);
}

template <class T, int K>
Jet<T, K> exp(const Jet<T, K>& a) {
    using std::exp;
    std::array<T, K + 1> t;
    t[0] = exp(a.value());
    for (int k = 1; k <= K; ++k) t[k] = t[k - 1] / T(double(k));
    return compose(a, t);
}

template <class T, int K>
Jet<T, K> log(const Jet<T, K>& a) {
    using std::log;
    if (primal(a.value()) <= 0.0) throw DomainError("jet log of a non-positive value");
    std::array<T, K + 1> t;
    const T inv = T(1.0) / a.value();
    t[0] = log(a.value());
    T p = inv;
    for (int k = 1; k <= K; ++k) {
        t[k] = p / T(double((k % 2 == 1) ? k : -k));
        p = p * inv;
    }
    return compose(a, t);
}

namespace detail {
// Taylor coefficients of a function whose derivatives cycle through four values.
template <class T, int K>
std::array<T, K + 1> cyclic_taylor(const std::array<T, 4>& cycle, bool period_two) {
    std::array<T, K + 1> t;
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        t[k] = cycle[period_two ? k % 2 : k % 4] / T(fact);
    }
    return t;
}
}  // namespace detail

template <class T, int K>
Jet<T, K> sin(const Jet<T, K>& a) {
    using std::cos;
    using std::sin;
    const T s = sin(a.value()), c = cos(a.value());
    return compose(a, detail::cyclic_taylor<T, K>({s, c, -s, -c}, false));
}

template <class T, int K>
Jet<T, K> cos(const Jet<T, K>& a) {
    using std::cos;
    using std::sin;
    const T s = sin(a.value()), c = cos(a.value());
    return compose(a, detail::cyclic_taylor<T, K>({c, -s, -c, s}, false));
}

template <class T, int K>
Jet<T, K> sinh(const Jet<T, K>& a) {
    using std::cosh;
    using std::sinh;
    const T s = sinh(a.value()), c = cosh(a.value());
    return compose(a, detail::cyclic_taylor<T, K>({s, c, s, c}, true));
}

template <class T, int K>
Jet<T, K> cosh(const Jet<T, K>& a) {
    using std::cosh;
    using std::sinh;
    const T s = sinh(a.value()), c = cosh(a.value());
    return compose(a, detail::cyclic_taylor<T, K>({c, s, c, s}, true));
}

/// Jet-aware square; works for plain doubles too.
template <class S>
S square(const S& x) {
    return x * x;
}

}  // namespace cosym
