#pragma once

// Frenet curves of osculating order 2 in M^n(rho), circles with prescribed
// complex torsion, and the vertical cylinders over them.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cosym/qforms.hpp"
#include "cosym/surface.hpp"

namespace cosym {

/// kappa(s) = base + amplitude * sin(frequency * s).
struct CurvatureLaw {
    double base = 1.0;
    double amplitude = 0.0;
    double frequency = 1.0;

    double value(double s) const;
    double derivative(double s) const;
    bool is_constant() const { return amplitude == 0.0; }
    static CurvatureLaw constant(double kappa) { return {kappa, 0.0, 1.0}; }
};

/// Point and frame of a curve in M. Vectors carry 2n+1 components with a zero
/// t-entry so they can be fed directly to ProductSpace.
struct FrenetState {
    Vec<double> p;
    std::vector<Vec<double>> E;
    std::vector<double> kappa;
    int order() const { return static_cast<int>(E.size()); }
};

/// E1 along the first chart axis, E2 = -tau J E1 + sqrt(1 - tau^2) W with W the
/// first chart axis orthogonal to span{E1, J E1}. Then <E1, J E2> = tau.
FrenetState circle_initial_frame(const ProductSpace& space, const Vec<double>& p, double kappa, double tau);

struct CurveSamples {
    double ds = 0.0;
    CurvatureLaw law;
    std::vector<double> s;
    std::vector<Vec<double>> x, E1, E2;
    std::vector<double> kappa, tau;
    bool truncated = false;
    std::string warning;

    double length() const { return s.empty() ? 0.0 : s.back(); }
    int size() const { return static_cast<int>(s.size()); }
};

/// Classical RK4 on the covariant Frenet system with Gram-Schmidt after every
/// step. Refuses fewer than 100 steps per unit length; stops with a warning
/// when the curve would leave the chart domain.
CurveSamples integrate_frenet(const ProductSpace& space, const FrenetState& init, const CurvatureLaw& law,
                              double length, int steps);

struct CurvePoint {
    Vec<double> x, E1, E2;
};

/// Curve data at arbitrary s: one RK4 substep from the nearest stored sample.
CurvePoint curve_at(const ProductSpace& space, const CurveSamples& curve, double s);

/// Columns: s, chart coordinates, kappa, tau12.
void write_curve_csv(std::ostream& os, const CurveSamples& curve);

/// (s, t) -> (gamma(s), t) on [0, L] x [0, height]; jets from the Frenet data.
class CylinderImmersion : public Immersion {
public:
    CylinderImmersion(ProductSpace space, CurveSamples curve, double height);
    std::string name() const override { return "cylinder"; }
    ParamRect domain() const override { return {0.0, curve_.length(), 0.0, height_}; }
    bool is_isothermal_claimed() const override { return true; }
    MapJet jet(double u, double v, int order) const override;
    const CurveSamples& curve() const { return curve_; }

private:
    ProductSpace space_;
    CurveSamples curve_;
    double height_;
};

struct CylinderOptions {
    double length = 0.0;  // 0: 1 for CH, 2 pi otherwise
    int steps_per_unit = 400;
    double height = 1.0;
};

double default_cylinder_length(const SpaceFormSpec& spec);

std::shared_ptr<CylinderImmersion> build_cylinder(const ProductSpace& space, const CurveSamples& curve,
                                                  double height = 1.0);
/// Circle (or sinusoidal-curvature curve) from the origin, then its cylinder.
std::shared_ptr<CylinderImmersion> make_cylinder(const ProductSpace& space, const CurvatureLaw& law, double tau,
                                                 const CylinderOptions& opt = {});

/// kappa = sqrt(-rho (1 + 3 tau^2)) / 2; DomainError for rho >= 0.
double proposition_kappa(double rho, double tau);

struct CylinderClassification {
    double kappa = 0.0, tau = 0.0, rho = 0.0;
    double pmc_residual = 0.0;
    bool pmc = false;
    cplx q{0.0, 0.0};
    cplx qprime{0.0, 0.0};
    double predicate = 0.0;  // 4 kappa^2 + rho (1 + 3 tau^2)
    bool q_vanishes = false;
    bool q_vanishing_possible = true;
    double H_norm = 0.0;
    bool H_bounds_hold = false;  // sqrt(-rho)/4 <= |H| <= sqrt(-rho)/2, only for rho < 0
    std::string note;
};

CylinderClassification classify_cylinder(const ProductSpace& space, double kappa, double tau, int grid_n = 24,
                                         const CylinderOptions& opt = {});

struct KappaScan {
    std::vector<double> kappa;
    std::vector<double> re_q;  // Re Q(Z,Z) at the cylinder midpoint
    std::vector<double> roots;
};

/// Samples Q(Z,Z) for kappa in [lo, hi] and refines each sign change by bisection.
KappaScan kappa_scan(const ProductSpace& space, double tau, double lo, double hi, int samples,
                     Exec exec = Exec::Parallel);

}  // namespace cosym
