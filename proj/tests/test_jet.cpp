#include "doctest.h"

#include <cmath>

#include "cosym/calculus.hpp"

using namespace cosym;

namespace {

template <class T>
T sample_fn(const T& u, const T& v) {
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    return exp(u) * sin(v) + u * u * v / (1.0 + v * v) + sqrt(2.0 + u * v) * log(3.0 + u);
}

}  // namespace

TEST_CASE("jet partials agree with nested central differences") {
    const double u0 = 0.3, v0 = -0.2;
    const Jet3 f = sample_fn(Jet3::variable_u(u0), Jet3::variable_v(v0));
    CHECK(f.value() == doctest::Approx(sample_fn(u0, v0)).epsilon(1e-15));
    auto fd = [&](int i, int j) {
        const double h = 1e-3;
        // tensor product of central stencils; exact enough for a 1e-5 comparison
        auto d1 = [&](auto&& g, double x, double y, bool along_u) {
            return along_u ? (g(x + h, y) - g(x - h, y)) / (2 * h) : (g(x, y + h) - g(x, y - h)) / (2 * h);
        };
        std::function<double(double, double)> g = [](double x, double y) { return sample_fn(x, y); };
        for (int k = 0; k < i; ++k) {
            auto prev = g;
            g = [prev, d1](double x, double y) { return d1(prev, x, y, true); };
        }
        for (int k = 0; k < j; ++k) {
            auto prev = g;
            g = [prev, d1](double x, double y) { return d1(prev, x, y, false); };
        }
        return g(u0, v0);
    };
    for (int d = 1; d <= 3; ++d)
        for (int j = 0; j <= d; ++j) {
            CAPTURE(d);
            CAPTURE(j);
            CHECK(f.derivative(d - j, j) == doctest::Approx(fd(d - j, j)).epsilon(1e-5));
        }
}

TEST_CASE("jet elementary functions match closed-form derivatives") {
    const double x = 0.7;
    const Jet3 t = Jet3::variable_u(x);
    const Jet3 s = sin(t), c = cos(t), e = exp(t), l = log(t), r = sqrt(t), sh = sinh(t), ch = cosh(t);
    CHECK(s.derivative(3, 0) == doctest::Approx(-std::cos(x)));
    CHECK(c.derivative(2, 0) == doctest::Approx(-std::cos(x)));
    CHECK(e.derivative(3, 0) == doctest::Approx(std::exp(x)));
    CHECK(l.derivative(3, 0) == doctest::Approx(2.0 / (x * x * x)));
    CHECK(r.derivative(2, 0) == doctest::Approx(-0.25 * std::pow(x, -1.5)));
    CHECK(sh.derivative(3, 0) == doctest::Approx(std::cosh(x)));
    CHECK(ch.derivative(1, 0) == doctest::Approx(std::sinh(x)));
    const Jet3 q = 1.0 / t;
    CHECK(q.derivative(3, 0) == doctest::Approx(-6.0 / std::pow(x, 4)));
}

TEST_CASE("jet derivative and antiderivative are inverse on the retained orders") {
    const Jet3 f = sample_fn(Jet3::variable_u(0.1), Jet3::variable_v(0.4));
    const Jet3 g = f.integrate_u();
    const auto back = g.du();
    for (int d = 0; d <= 2; ++d)
        for (int j = 0; j <= d; ++j) CHECK(back.coeff(d - j, j) == doctest::Approx(f.coeff(d - j, j)));
    CHECK(g.value() == 0.0);
}

TEST_CASE("jet domain errors") {
    CHECK_THROWS_AS(sqrt(Jet3::variable_u(-1.0)), DomainError);
    CHECK_THROWS_AS(log(Jet3::variable_u(0.0)), DomainError);
}

TEST_CASE("map jets and the finite-difference oracle agree") {
    const MapFunction f = [](const Jet3& u, const Jet3& v) {
        Vec<Jet3> x(3);
        x[0] = sin(u) * v;
        x[1] = exp(u - v);
        x[2] = u * u * u + v;
        return x;
    };
    const MapJet j = jet_eval(f, 0.2, 0.5, 3);
    const auto lower = [&](double u, double v) { return jet_eval(f, u, v, 2); };
    for (auto [i, k] : {std::pair{3, 0}, {2, 1}, {1, 2}, {0, 3}}) {
        const Vec<double> a = j.partial(i, k), b = fd_partial(lower, 0.2, 0.5, i, k);
        for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-6));
    }
    const PointFunction pf = [&](double u, double v) { return map_value(f, u, v); };
    const Vec<double> a = j.partial(1, 1), b = fd_partial_values(pf, 0.2, 0.5, 1, 1);
    for (int c = 0; c < 3; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-5));
    CHECK_THROWS_AS(jet_eval(f, 0.2, 0.5, 1).partial(2, 0), PreconditionError);
    CHECK_THROWS(jet_eval(f, 0.0, 0.0, 4));
}
