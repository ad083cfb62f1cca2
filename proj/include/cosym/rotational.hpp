#pragma once

// Rotational cmc spheres in the totally geodesic real slice M(c) x R, c = rho/4,
// of M^2(rho) x R. The profile is integrated in the isothermal parameter
// w = int ds / sn(r); the turning rate alpha' is obtained at every step by
// solving for the value that makes the measured mean curvature equal H.

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cosym/qforms.hpp"
#include "cosym/surface.hpp"

namespace cosym {

/// Point (r, theta, h) used to move a chart so that it sits at the origin.
struct SliceCenter {
    double r = 0.0, theta = 0.0, h = 0.0;
};

template <class T>
T slice_sn(double c, const T& r) {
    using std::sin;
    using std::sinh;
    if (c > 0.0) return sin(std::sqrt(c) * r) / std::sqrt(c);
    if (c < 0.0) return sinh(std::sqrt(-c) * r) / std::sqrt(-c);
    return r;
}

/// Chart coordinates (x1, 0, x2, 0, ..., t) of the slice point with geodesic
/// polar coordinates (r, theta) and height t. With a center, the chart is first
/// moved by the holomorphic isometry (rotation, boost or translation) taking the
/// center to the origin.
template <class T>
Vec<T> slice_coords(const SpaceFormSpec& spec, const T& r, const T& theta, const T& t,
                    const SliceCenter* center = nullptr) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    const double c = spec.rho / 4.0;
    const int d = spec.dim();
    Vec<T> x(d);
    const double ct = center ? std::cos(center->theta) : 1.0, st = center ? std::sin(center->theta) : 0.0;
    T x1, x2;
    if (c == 0.0) {
        x1 = r * cos(theta);
        x2 = r * sin(theta);
        if (center) {
            x1 = x1 - center->r * ct;
            x2 = x2 - center->r * st;
        }
    } else {
        const double k = std::sqrt(std::abs(c));
        const T a = k * r;
        // model point: (X1, X2) horizontal, X3 the extra axis (sphere) or X0 (hyperboloid)
        T X1, X2, X3;
        if (c > 0.0) {
            X1 = sin(a) * cos(theta);
            X2 = sin(a) * sin(theta);
            X3 = cos(a);
        } else {
            X1 = sinh(a) * cos(theta);
            X2 = sinh(a) * sin(theta);
            X3 = cosh(a);
        }
        if (center) {
            const T Y1 = X1 * ct + X2 * st;
            const T Y2 = X2 * ct - X1 * st;
            const double a0 = k * center->r;
            if (c > 0.0) {
                const double ca = std::cos(a0), sa = std::sin(a0);
                X1 = Y1 * ca - X3 * sa;
                X3 = Y1 * sa + X3 * ca;
            } else {
                const double ca = std::cosh(a0), sa = std::sinh(a0);
                X1 = Y1 * ca - X3 * sa;
                X3 = X3 * ca - Y1 * sa;
            }
            X2 = Y2;
        }
        x1 = X1 / X3;
        x2 = X2 / X3;
    }
    x[0] = x1;
    x[2] = x2;
    x[d - 1] = center ? t - center->h : t;
    return x;
}

/// Standard-chart point of the slice. DomainError outside the chart.
ProductPoint real_slice_embed(const SpaceFormSpec& spec, double r, double theta, double t);

/// Chart radius of the slice point at geodesic distance r from the origin.
double slice_chart_radius(const SpaceFormSpec& spec, double r);

struct ProfileSample {
    double w = 0.0, s = 0.0, r = 0.0, h = 0.0, alpha = 0.0;
    double alpha_s = 0.0;     // turning rate solved at this sample
    double H_measured = 0.0;  // signed mean curvature at the solved rate
};

struct ProfileCurve {
    double dw = 0.0;
    std::vector<ProfileSample> samples;
    int size() const { return static_cast<int>(samples.size()); }
};

struct ShootControls {
    double eps = 1e-4;
    double dw = 0.005;
    int max_iterations = 60;
    double closure_tol = 1e-6;
    double r_max_scale = 12.0;  // r_max = r_max_scale / sqrt(|c|), or this value for c = 0
    double s_max = 200.0;
};

struct ShootResult {
    bool closed = false;     // the profile returned to the rotation axis
    bool converged = false;  // closed with closure defect below tolerance
    std::string verdict;
    double H_target = 0.0;
    double exit_slope = 0.0;
    double closure_defect = 0.0;
    double pole_smoothness_defect = 0.0;
    double total_length = 0.0;  // arclength from pole to pole
    double top_height = 0.0;
    int iterations = 0;
    ProfileCurve profile;
};

/// Signed mean curvature of the profile rotation surface at state (r, h, alpha)
/// with turning rate alpha_s, measured by the surface engine.
double measured_mean_curvature(const ProductSpace& space, double r, double h, double alpha, double alpha_s);
/// alpha_s making the measured mean curvature equal H.
double solve_turning_rate(const ProductSpace& space, double r, double h, double alpha, double H);
/// d(alpha_s)/ds making d|H|/ds vanish.
double solve_turning_acceleration(const ProductSpace& space, double r, double h, double alpha, double alpha_s);

/// One profile run from the pole collar with exit slope k; `closed` is false,
/// with a verdict, when the curve does not return to the axis.
struct ProfileRun {
    bool closed = false;
    std::string verdict;
    ProfileCurve profile;
    double alpha_cross = 0.0;
    double s_cross = 0.0;
    double h_cross = 0.0;
};
ProfileRun integrate_profile(const ProductSpace& space, double H, double k, const ShootControls& ctl);

ShootResult shoot_sphere(const ProductSpace& space, double H_target, const ShootControls& ctl = {});

/// The sphere as an isothermal immersion (w, theta); jets are given in a chart
/// centred at the evaluation point.
class RotationalImmersion : public Immersion {
public:
    RotationalImmersion(ProductSpace space, ShootResult sphere, double mu_min = 0.05);
    std::string name() const override { return "sphere"; }
    ParamRect domain() const override { return rect_; }
    bool is_isothermal_claimed() const override { return true; }
    MapJet jet(double u, double v, int order) const override;

    /// Grid aligned with integration samples over the band where mu >= mu_min.
    Grid default_grid(int nw = 401, int ntheta = 24) const;
    const ShootResult& sphere() const { return sphere_; }
    /// Profile state (r, h, alpha, alpha_s) at any w in the integrated range.
    ProfileSample state_at(double w) const;

private:
    ProductSpace space_;
    ShootResult sphere_;
    ParamRect rect_;
    int band_first_ = 0, band_last_ = 0;
};

struct NamedResidual {
    std::string name;
    double value = 0.0;
    double u = 0.0, v = 0.0;
};

struct LemmaReport {
    std::vector<NamedResidual> residuals;
    int evaluated_nodes = 0;
    int excluded_nodes = 0;  // stencil margin
    double mu_min = 0.0;     // smallest mu over evaluated nodes
    std::string norm_convention = "|A|^2 = sum_ij |sigma(e_i,e_j)|^2";

    double value(const std::string& name) const;
};

/// Frame identities, shape-operator eigenvalues and the two Laplacian identities
/// on the grid, derivatives by fourth-order stencils.
LemmaReport lemma_identity_suite(const ProductSpace& space, const RotationalImmersion& sphere, const Grid& grid,
                                 Exec exec = Exec::Parallel);

/// max |h(S - s) - (h(S) - h(s))| over the profile.
double mirror_defect(const ShootResult& sphere);

/// Columns: s, r, h, alpha, H_measured.
void write_profile_csv(std::ostream& os, const ShootResult& sphere);

}  // namespace cosym
