#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cosym/curves.hpp"

using namespace cosym;

namespace {

const SpaceFormSpec kCP = SpaceFormSpec::make(Family::CP, 2, 4.0);
const SpaceFormSpec kCH = SpaceFormSpec::make(Family::CH, 2, -4.0);
const SpaceFormSpec kC = SpaceFormSpec::make(Family::C, 2, 0.0);

/// Q(Z,Z) and Q'(Z,Z) of the cylinder over a circle with curvature kappa and torsion tau.
cplx q_closed_form(double rho, double kappa, double tau) {
    return kappa * kappa / 8.0 * (4.0 * kappa * kappa + rho * (1.0 + 3.0 * tau * tau));
}
cplx qprime_closed_form(double rho, double kappa) { return 0.5 * (4.0 * kappa * kappa + rho); }

}  // namespace

TEST_CASE("initial circle frame has the requested complex torsion") {
    const ProductSpace sp(kCP);
    Vec<double> p(5);
    p[0] = 0.2;
    for (double tau : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
        const FrenetState st = circle_initial_frame(sp, p, 1.2, tau);
        const Mat<double> g = sp.metric(p);
        CHECK(norm(g, st.E[0]) == doctest::Approx(1.0));
        CHECK(norm(g, st.E[1]) == doctest::Approx(1.0));
        CHECK(bilinear(g, st.E[0], st.E[1]) == doctest::Approx(0.0).scale(1.0));
        CHECK(bilinear(g, st.E[0], sp.phi(st.E[1])) == doctest::Approx(tau).scale(1.0));
    }
    CHECK_THROWS_AS(circle_initial_frame(sp, p, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(circle_initial_frame(sp, p, 0.0, 0.0), DomainError);
    const ProductSpace one(SpaceFormSpec::make(Family::CP, 1, 4.0));
    CHECK_THROWS_AS(circle_initial_frame(one, Vec<double>(3), 1.0, 0.5), DomainError);
    CHECK_NOTHROW(circle_initial_frame(one, Vec<double>(3), 1.0, 1.0));
}

TEST_CASE("flat circles close up") {
    const ProductSpace sp(kC);
    const Vec<double> p(5);
    const double kappa = 2.0;
    const FrenetState st = circle_initial_frame(sp, p, kappa, 0.3);
    const CurveSamples c = integrate_frenet(sp, st, CurvatureLaw::constant(kappa), std::numbers::pi, 2000);
    CHECK(norm(sp.metric(p), c.x.back() - c.x.front()) < 1e-10);
    // every point lies at distance 1 / kappa from the centre p + E2 / kappa
    const Vec<double> centre = p + (1.0 / kappa) * st.E[1];
    for (int k = 0; k < c.size(); k += 97) CHECK(norm(sp.metric(p), c.x[k] - centre) == doctest::Approx(0.5));
}

TEST_CASE("complex torsion is conserved along circles") {
    for (const auto& s : {kCP, kCH}) {
        const ProductSpace sp(s);
        const double len = s.family == Family::CH ? 1.0 : 2.0 * std::numbers::pi;
        const FrenetState st = circle_initial_frame(sp, Vec<double>(5), 1.3, 0.4);
        const CurveSamples c = integrate_frenet(sp, st, CurvatureLaw::constant(1.3), len, static_cast<int>(400 * len));
        CHECK_FALSE(c.truncated);
        double drift = 0.0;
        for (double t : c.tau) drift = std::max(drift, std::abs(t - 0.4));
        CHECK(drift < 1e-8);
    }
}

TEST_CASE("integrated curves recover their curvature") {
    const ProductSpace sp(kCP);
    const CurvatureLaw law{1.0, 0.3, 2.0};
    const FrenetState st = circle_initial_frame(sp, Vec<double>(5), law.value(0.0), 0.2);
    const CurveSamples c = integrate_frenet(sp, st, law, 2.0, 4000);
    for (int k : {500, 1500, 3000}) {
        const double h = c.ds;
        const Vec<double> dE = (1.0 / (2 * h)) * (c.E1[k + 1] - c.E1[k - 1]);
        const Connection con = sp.connection_at(c.x[k], 1);
        const Vec<double> acc = dE + con.apply(c.E1[k], c.E1[k]);
        CHECK(norm(sp.metric(c.x[k]), acc) == doctest::Approx(law.value(c.s[k])).epsilon(1e-6));
    }
}

TEST_CASE("the integrator refuses coarse steps and truncates at the chart edge") {
    const ProductSpace sp(kCH);
    const FrenetState st = circle_initial_frame(sp, Vec<double>(5), 1.0, 0.0);
    CHECK_THROWS_AS(integrate_frenet(sp, st, CurvatureLaw::constant(1.0), 1.0, 50), PreconditionError);
    const CurveSamples c = integrate_frenet(sp, st, CurvatureLaw::constant(1.0), 10.0, 4000);
    CHECK(c.truncated);
    CHECK_FALSE(c.warning.empty());
    CHECK(c.length() < 10.0);
}

TEST_CASE("cylinder Q values match the closed forms") {
    for (auto [rho, tau] : {std::pair{-4.0, 0.0}, {-4.0, 1.0}, {-2.0, 0.5}, {4.0, 0.3}, {0.0, 0.7}}) {
        const SpaceFormSpec s = rho < 0 ? SpaceFormSpec::make(Family::CH, 2, rho)
                                        : (rho > 0 ? SpaceFormSpec::make(Family::CP, 2, rho) : kC);
        const ProductSpace sp(s);
        for (double kappa : {0.7, 1.0, 1.6}) {
            const CylinderClassification cc = classify_cylinder(sp, kappa, tau, 20);
            CAPTURE(rho);
            CAPTURE(tau);
            CAPTURE(kappa);
            CHECK(cc.pmc);
            CHECK(cc.H_norm == doctest::Approx(kappa / 2.0));
            const cplx q = q_closed_form(rho, kappa, tau), qp = qprime_closed_form(rho, kappa);
            CHECK(std::abs(cc.q - q) < 1e-9 * std::max(1.0, std::abs(q)));
            CHECK(std::abs(cc.qprime - qp) < 1e-9 * std::max(1.0, std::abs(qp)));
            CHECK(cc.predicate == doctest::Approx(4 * kappa * kappa + rho * (1 + 3 * tau * tau)));
        }
    }
}

TEST_CASE("proposition curvature and torsion symmetry") {
    CHECK(proposition_kappa(-4.0, 0.0) == doctest::Approx(1.0));
    CHECK(proposition_kappa(-4.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(proposition_kappa(0.0, 0.0), DomainError);
    const ProductSpace sp(kCH);
    const double k = proposition_kappa(-4.0, 0.6);
    const CylinderClassification a = classify_cylinder(sp, k, 0.6, 20), b = classify_cylinder(sp, k, -0.6, 20);
    CHECK(a.q_vanishes);
    CHECK(b.q_vanishes);
    CHECK(a.H_bounds_hold);
    CHECK(std::abs(a.qprime - b.qprime) < 1e-12);
}

TEST_CASE("non-constant curvature breaks pmc") {
    const ProductSpace sp(kCH);
    auto cyl = make_cylinder(sp, CurvatureLaw{1.0, 0.1, 1.0}, 0.0);
    Grid g;
    g.rect = cyl->domain();
    g.nu = g.nv = 24;
    CHECK(pmc_residual(sp, *cyl, g).value > 1e-2);
}

TEST_CASE("kappa scan finds the Q-vanishing curvature") {
    const ProductSpace sp(kCH);
    const KappaScan s = kappa_scan(sp, 0.0, 0.5, 1.5, 101);
    REQUIRE(s.roots.size() == 1);
    CHECK(s.roots[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(kappa_scan(sp, 0.0, 1.0, 0.5, 10), ConfigError);
}

TEST_CASE("curve CSV header") {
    const ProductSpace sp(kCP);
    const FrenetState st = circle_initial_frame(sp, Vec<double>(5), 1.0, 0.0);
    std::ostringstream os;
    write_curve_csv(os, integrate_frenet(sp, st, CurvatureLaw::constant(1.0), 1.0, 100));
    CHECK(os.str().rfind("s,", 0) == 0);
}
