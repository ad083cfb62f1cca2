#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cosym/rotational.hpp"

using namespace cosym;

namespace {

const SpaceFormSpec kCP = SpaceFormSpec::make(Family::CP, 2, 4.0);
const SpaceFormSpec kCH = SpaceFormSpec::make(Family::CH, 2, -4.0);
const SpaceFormSpec kC = SpaceFormSpec::make(Family::C, 2, 0.0);

}  // namespace

TEST_CASE("slice chart radius inverts the geodesic distance quadrature") {
    for (const auto& s : {kCP, kCH, kC}) {
        const ProductSpace sp(s);
        for (double x : {0.1, 0.5, 0.85}) {
            auto speed = [&](double t) {
                Vec<double> p(5);
                p[0] = t;
                return std::sqrt(sp.metric(p)(0, 0));
            };
            const double r = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, 0.0, x);
            CHECK(slice_chart_radius(s, r) == doctest::Approx(x).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(slice_chart_radius(kCP, 2.0), DomainError);
}

TEST_CASE("centred slice charts put the centre at the origin") {
    for (const auto& s : {kCP, kCH, kC}) {
        const SliceCenter c{0.4, 0.7, 0.3};
        const Vec<double> x = slice_coords(s, 0.4, 0.7, 0.3, &c);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(x[i]) < 1e-14);
        const Vec<double> y = slice_coords<double>(s, 0.4, 0.7, 0.3);
        const ProductPoint p = real_slice_embed(s, 0.4, 0.7, 0.3);
        for (int i = 0; i < 5; ++i) CHECK(y[i] == doctest::Approx(p.coords()[i]));
    }
}

TEST_CASE("turning rate solve reproduces the target curvature") {
    const ProductSpace sp(kCH);
    const double a = solve_turning_rate(sp, 0.5, 0.1, 0.8, 0.6);
    CHECK(measured_mean_curvature(sp, 0.5, 0.1, 0.8, a) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("euclidean spheres have the round profile") {
    const ProductSpace sp(kC);
    const double H = 0.8;
    const ShootResult s = shoot_sphere(sp, H);
    REQUIRE(s.converged);
    CHECK(s.total_length == doctest::Approx(std::numbers::pi / H).epsilon(1e-7));
    CHECK(s.top_height == doctest::Approx(2.0 / H).epsilon(1e-7));
    CHECK(s.exit_slope == doctest::Approx(H).epsilon(1e-6));
    for (const auto& p : s.profile.samples) CHECK(std::hypot(p.r, p.h - 1.0 / H) == doctest::Approx(1.0 / H).epsilon(1e-7));
}

TEST_CASE("spheres close in CP and in CH above the threshold") {
    for (auto [s, H] : {std::pair{kCP, 0.5}, {kCH, 0.6}}) {
        const ProductSpace sp(s);
        const ShootResult r = shoot_sphere(sp, H);
        CHECK(r.converged);
        CHECK(std::abs(r.closure_defect) < 1e-6);
        CHECK(r.pole_smoothness_defect < 1e-6);
        CHECK(mirror_defect(r) < 1e-6);
        double dev = 0.0;
        for (const auto& p : r.profile.samples) dev = std::max(dev, std::abs(p.H_measured - H));
        CHECK(dev < 1e-10);
    }
}

TEST_CASE("no sphere below the hyperbolic threshold") {
    const ProductSpace sp(kCH);
    const ShootResult r = shoot_sphere(sp, 0.4);
    CHECK_FALSE(r.closed);
    CHECK_FALSE(r.converged);
    CHECK(r.verdict.rfind("no sphere", 0) == 0);
    CHECK_THROWS_AS(RotationalImmersion(sp, r), PreconditionError);
    CHECK_THROWS_AS(shoot_sphere(sp, -1.0), DomainError);
}

TEST_CASE("sphere immersion is isothermal and satisfies the frame identities") {
    const ProductSpace sp(kCP);
    const RotationalImmersion imm(sp, shoot_sphere(sp, 0.5));
    const Grid g = imm.default_grid(121, 20);
    for (int i = 5; i < g.nu; i += 29) {
        const SurfaceGeometry geo = geometry_at(sp, imm, g.u(i), g.v(3));
        CHECK(std::abs(geo.E - geo.G) < 1e-9 * geo.E);
        CHECK(std::abs(geo.F) < 1e-9 * geo.E);
        CHECK(geo.H_norm == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(pmc_residual_at(geo) < 1e-8);
    }
    const LemmaReport rep = lemma_identity_suite(sp, imm, g);
    CHECK(rep.value("e1_mu") < 1e-8);
    CHECK(rep.value("e1_nu") < 1e-8);
    CHECK(rep.value("e2_mu") < 1e-4);
    CHECK(rep.value("e2_nu") < 1e-4);
    CHECK(rep.value("eq_ah") < 1e-6);
    CHECK(rep.value("mu_nu") < 1e-10);
    CHECK(rep.value("d1") < 1e-2);
    CHECK(rep.evaluated_nodes > 0);
    CHECK_THROWS(rep.value("no-such-identity"));
}

TEST_CASE("profile CSV header") {
    const ProductSpace sp(kC);
    std::ostringstream os;
    write_profile_csv(os, shoot_sphere(sp, 1.0));
    CHECK(os.str().rfind("s,r,h,alpha,H_measured\n", 0) == 0);
}
