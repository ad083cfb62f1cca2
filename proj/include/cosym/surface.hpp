#pragma once

// Geometry of immersed surfaces in M^n(rho) x R: fundamental forms, second
// fundamental form, mean curvature vector, normal connection and the residual
// functionals built on them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cosym/calculus.hpp"
#include "cosym/kernels.hpp"
#include "cosym/spaces.hpp"

namespace cosym {

/// A parametrized surface exposing exact jets.
///
/// jet() may express the point in any chart obtained from the standard one by a
/// holomorphic isometry that preserves t (the isometry may depend on (u, v)).
/// All geometric scalars are invariant under such changes; vectors returned by
/// geometry_at live in the chart jet() used.
class Immersion {
public:
    virtual ~Immersion() = default;
    virtual std::string name() const = 0;
    virtual ParamRect domain() const = 0;
    virtual bool is_isothermal_claimed() const { return false; }
    /// order in {1, 2, 3}.
    virtual MapJet jet(double u, double v, int order) const = 0;
};

/// Surface given by a jet-templated map in the standard chart.
class AnalyticImmersion : public Immersion {
public:
    AnalyticImmersion(std::string name, ParamRect rect, MapFunction f, bool isothermal)
        : name_(std::move(name)), rect_(rect), f_(std::move(f)), isothermal_(isothermal) {}

    std::string name() const override { return name_; }
    ParamRect domain() const override { return rect_; }
    bool is_isothermal_claimed() const override { return isothermal_; }
    MapJet jet(double u, double v, int order) const override { return jet_eval(f_, u, v, order); }
    const MapFunction& map() const { return f_; }

private:
    std::string name_;
    ParamRect rect_;
    MapFunction f_;
    bool isothermal_;
};

/// (u, v) -> f(a u + c, a v + d); a conformal reparametrization of f.
class ReparametrizedImmersion : public Immersion {
public:
    ReparametrizedImmersion(std::shared_ptr<const Immersion> base, double scale, double shift_u = 0.0,
                            double shift_v = 0.0);
    std::string name() const override;
    ParamRect domain() const override;
    bool is_isothermal_claimed() const override { return base_->is_isothermal_claimed(); }
    MapJet jet(double u, double v, int order) const override;

private:
    std::shared_ptr<const Immersion> base_;
    double a_, c_, d_;
};

// Built-in analytic families (n >= 2 needed where two complex coordinates appear).
std::shared_ptr<const Immersion> make_real_plane(const SpaceFormSpec& spec, double half_width = 0.5);
std::shared_ptr<const Immersion> make_complex_line(const SpaceFormSpec& spec, double half_width = 0.5);
std::shared_ptr<const Immersion> make_vertical_plane(const SpaceFormSpec& spec, double half_width = 0.5);
/// A generic non-isothermal graph, used for derivative cross-checks.
std::shared_ptr<const Immersion> make_graph_surface(const SpaceFormSpec& spec, double half_width = 0.4);
/// Look up a family by name: "real-plane", "complex-line", "vertical-plane", "graph".
std::shared_ptr<const Immersion> make_family(const std::string& family, const SpaceFormSpec& spec,
                                             double half_width);

struct SurfaceGeometry {
    double u = 0.0, v = 0.0;
    Vec<double> x;
    Mat<double> g;
    Vec<double> fu, fv;
    double E = 0.0, F = 0.0, G = 0.0;
    double lambda2 = 0.0;  // E; meaningful as the conformal factor on isothermal points
    // e1 = a11 fu, e2 = a21 fu + a22 fv
    double a11 = 0.0, a21 = 0.0, a22 = 0.0;
    Vec<double> e1, e2;
    std::array<Vec<double>, 3> sigma_coord;  // sigma(fu,fu), sigma(fu,fv), sigma(fv,fv)
    std::array<Vec<double>, 3> sigma;        // sigma(e1,e1), sigma(e1,e2), sigma(e2,e2)
    Vec<double> H;
    double H_norm = 0.0;
    std::vector<Vec<double>> normal_basis;

    bool has_derivatives = false;
    Vec<double> nabla_u_H, nabla_v_H;  // ambient covariant derivatives along fu, fv

    // Frame adapted to xi (e2 along the tangent part of xi) and derivatives in it;
    // set when has_derivatives and the tangent part of xi does not vanish.
    bool has_xi_frame = false;
    Vec<double> nabla_e2_e2;          // tangential part of nabla_{e2} e2
    std::array<double, 2> d_mu{};     // e1(mu), e2(mu)
    std::array<double, 2> d_nu{};     // e1(nu), e2(nu)

    double inner(const Vec<double>& a, const Vec<double>& b) const { return bilinear(g, a, b); }
    Vec<double> tangent_part(const Vec<double>& w) const;
    Vec<double> normal_part(const Vec<double>& w) const;
    /// sigma(X, Y) for X = x1 e1 + x2 e2, Y = y1 e1 + y2 e2.
    Vec<double> sigma_frame(double x1, double x2, double y1, double y2) const;
    /// nabla^N_{e_i} H, i in {0, 1}.
    Vec<double> nabla_frame_H(int i) const;
};

/// with_derivatives needs a third-order jet and adds nabla^N H and the xi-frame data.
SurfaceGeometry geometry_from_jet(const ProductSpace& space, const MapJet& f, bool with_derivatives);
SurfaceGeometry geometry_at(const ProductSpace& space, const Immersion& imm, double u, double v,
                            bool with_derivatives = true);

/// <A_V e_i, e_j>; V must be normal.
Mat<double> shape_operator(const SurfaceGeometry& geo, const Vec<double>& V);

double pmc_residual_at(const SurfaceGeometry& geo);
double pseudo_umbilical_residual_at(const SurfaceGeometry& geo);
double anti_invariance_residual_at(const ProductSpace& space, const SurfaceGeometry& geo);
/// Intrinsic curvature from the Gauss equation.
double gauss_curvature(const ProductSpace& space, const SurfaceGeometry& geo);

struct GridResidual {
    double value = 0.0;
    int i = -1, j = -1;
    double u = 0.0, v = 0.0;
};

/// Max of a pointwise functional over a grid; argmax is the lowest node index.
GridResidual grid_max(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                      const std::function<double(const SurfaceGeometry&)>& fn, bool with_derivatives,
                      Exec exec = Exec::Parallel);

GridResidual pmc_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                          Exec exec = Exec::Parallel);
GridResidual pseudo_umbilical_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                                       Exec exec = Exec::Parallel);
GridResidual anti_invariance_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                                      Exec exec = Exec::Parallel);

struct AngleDecomposition {
    bool mu_defined = false;
    double mu = 0.0;
    double nu = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;  // diagonal of A_{H/|H|} in the adapted frame
    double off_diagonal = 0.0;
    Vec<double> e1, e2;
    double H_norm = 0.0;
};

/// Throws DegenerateError at minimal points. When the tangent part of xi is
/// shorter than 1e-7 mu is flagged undefined and the geometry frame is used.
AngleDecomposition angle_decomposition(const SurfaceGeometry& geo);

}  // namespace cosym
