#include "doctest.h"

#include <cmath>

#include "cosym/curves.hpp"
#include "cosym/qforms.hpp"

using namespace cosym;

namespace {

QGrid synthetic(const std::function<cplx(double, double)>& f, int n) {
    QGrid qg;
    qg.grid.rect = {-0.5, 0.5, -0.5, 0.5};
    qg.grid.nu = qg.grid.nv = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QValue q;
            q.u = qg.grid.u(i);
            q.v = qg.grid.v(j);
            q.q = f(q.u, q.v);
            q.qprime = std::conj(q.q);
            q.lambda2 = 1.0;
            q.H_norm = 1.0;
            qg.values.push_back(q);
        }
    return qg;
}

}  // namespace

TEST_CASE("the dbar stencil annihilates holomorphic functions") {
    const QGrid qg = synthetic([](double u, double v) { return std::pow(cplx(u, v), 3) + std::exp(cplx(u, v)); }, 41);
    CHECK(dbar_residual(qg, QForm::Q).raw < 1e-8);
    // qprime holds the conjugate, whose Zbar derivative is sqrt(2) conj(f')
    const DbarResult r = dbar_residual(synthetic([](double u, double v) { return cplx(u, v); }, 41), QForm::QPrime);
    CHECK(r.raw == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.pointwise.size() == 41u * 41u);
    CHECK(std::isnan(r.pointwise[0]));
}

TEST_CASE("dbar needs enough interior nodes") {
    const QGrid qg = synthetic([](double u, double) { return cplx(u, 0.0); }, 19);
    CHECK_THROWS_AS(dbar_residual(qg, QForm::Q), PreconditionError);
}

TEST_CASE("fourth-order stencils") {
    const double h = 1e-2, x = 0.4;
    auto f = [](double t) { return std::sin(t); };
    CHECK(stencil_d1(f(x - 2 * h), f(x - h), f(x + h), f(x + 2 * h), h) == doctest::Approx(std::cos(x)).epsilon(1e-9));
    CHECK(stencil_d2(f(x - 2 * h), f(x - h), f(x), f(x + h), f(x + 2 * h), h) ==
          doctest::Approx(-std::sin(x)).epsilon(1e-7));
}

TEST_CASE("Q and Q' differ by the phi-term") {
    const ProductSpace sp(SpaceFormSpec::make(Family::CP, 2, 4.0));
    auto cyl = make_cylinder(sp, CurvatureLaw{1.3, 0.2, 2.0}, 0.4);
    const SurfaceGeometry geo = geometry_at(sp, *cyl, 0.8, 0.2, false);
    const QValue q = q_value(sp, geo);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx pz = s * cplx(geo.inner(sp.phi(geo.fu), geo.H), -geo.inner(sp.phi(geo.fv), geo.H));
    const cplx lhs = q.q - geo.H_norm * geo.H_norm * q.qprime;
    const cplx rhs = 3.0 * sp.rho() * pz * pz;
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("Q(Z,Z) scales with the conformal factor") {
    const ProductSpace sp(SpaceFormSpec::make(Family::CH, 2, -4.0));
    auto cyl = make_cylinder(sp, CurvatureLaw::constant(1.4), 0.3);
    const double a = 0.5;
    const ReparametrizedImmersion rep(cyl, a, 0.1, 0.2);
    const QValue q0 = q_value(sp, *cyl, a * 0.6 + 0.1, a * 0.4 + 0.2);
    const QValue q1 = q_value(sp, rep, 0.6, 0.4);
    CHECK(std::abs(q1.q - a * a * q0.q) < 1e-12);
    CHECK(std::abs(q1.qprime - a * a * q0.qprime) < 1e-12);
    CHECK(q1.lambda2 == doctest::Approx(a * a * q0.lambda2));
}

TEST_CASE("non-isothermal parametrizations are refused for Q") {
    const SpaceFormSpec s = SpaceFormSpec::make(Family::CP, 2, 4.0);
    const ProductSpace sp(s);
    auto g = make_graph_surface(s);
    CHECK_THROWS_AS(q_value(sp, *g, 0.0, 0.0), PreconditionError);
    CHECK_NOTHROW(q_value(sp, *make_complex_line(s), 0.1, 0.1));
}

TEST_CASE("Q vanishes on a totally geodesic complex line") {
    const SpaceFormSpec s = SpaceFormSpec::make(Family::CH, 2, -4.0);
    const ProductSpace sp(s);
    const QValue q = q_value(sp, *make_complex_line(s), 0.2, -0.1);
    CHECK(std::abs(q.q) < 1e-14);
    CHECK(std::abs(q.qprime) < 1e-14);
}

TEST_CASE("Q grid CSV has one row per node") {
    const ProductSpace sp(SpaceFormSpec::make(Family::CH, 2, -4.0));
    auto cyl = make_cylinder(sp, CurvatureLaw::constant(1.0), 0.0);
    Grid g;
    g.rect = cyl->domain();
    g.nu = g.nv = 20;
    std::ostringstream os;
    write_q_csv(os, q_grid(sp, *cyl, g));
    const std::string out = os.str();
    CHECK(out.rfind("u,v,re_q,im_q,re_qprime,im_qprime,dbar_q,dbar_qprime\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 401);
}
