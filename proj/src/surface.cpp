#include "cosym/surface.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

namespace {

template <class T>
struct Core {
    T E, F, G, det;
    std::array<Vec<T>, 3> sig;
    Vec<T> H;
};

template <class T>
Vec<T> apply_gamma(const std::vector<T>& gamma, int d, const Vec<T>& x, const Vec<T>& y) {
    Vec<T> r(d);
    for (int k = 0; k < d; ++k) {
        T acc(0.0);
        for (int i = 0; i < d; ++i) {
            T row(0.0);
            for (int j = 0; j < d; ++j) row += gamma[(k * d + i) * d + j] * y[j];
            acc += x[i] * row;
        }
        r[k] = acc;
    }
    return r;
}

template <class T>
Core<T> run_core(const Mat<T>& g, const std::vector<T>& gamma, const Vec<T>& fu, const Vec<T>& fv,
                 const std::array<Vec<T>, 3>& f2) {
    const int d = g.size();
    Core<T> c;
    c.E = bilinear(g, fu, fu);
    c.F = bilinear(g, fu, fv);
    c.G = bilinear(g, fv, fv);
    c.det = c.E * c.G - c.F * c.F;
    const Vec<T>* dirs[3][2] = {{&fu, &fu}, {&fu, &fv}, {&fv, &fv}};
    for (int k = 0; k < 3; ++k) {
        const Vec<T> w = f2[k] + apply_gamma(gamma, d, *dirs[k][0], *dirs[k][1]);
        const T a = bilinear(g, w, fu), b = bilinear(g, w, fv);
        const T cu = (c.G * a - c.F * b) / c.det;
        const T cv = (c.E * b - c.F * a) / c.det;
        c.sig[k] = w - cu * fu - cv * fv;
    }
    c.H = (c.G * c.sig[0] - T(2.0) * c.F * c.sig[1] + c.E * c.sig[2]) / (T(2.0) * c.det);
    return c;
}

Jet1 jet1(double value, double du, double dv) {
    Jet1 j(value);
    j.coeff(1, 0) = du;
    j.coeff(0, 1) = dv;
    return j;
}

Vec<Jet1> jet1_vec(const Vec<double>& val, const Vec<double>& du, const Vec<double>& dv) {
    Vec<Jet1> r(val.size());
    for (int k = 0; k < val.size(); ++k) r[k] = jet1(val[k], du[k], dv[k]);
    return r;
}

Vec<double> part(const Vec<Jet1>& x, int i, int j) {
    Vec<double> r(x.size());
    for (int k = 0; k < x.size(); ++k) r[k] = x[k].coeff(i, j);
    return r;
}

}  // namespace

ReparametrizedImmersion::ReparametrizedImmersion(std::shared_ptr<const Immersion> base, double scale, double shift_u,
                                                 double shift_v)
    : base_(std::move(base)), a_(scale), c_(shift_u), d_(shift_v) {
    if (!(scale > 0.0)) throw DomainError("reparametrization scale must be positive");
}

std::string ReparametrizedImmersion::name() const { return base_->name() + "-reparametrized"; }

ParamRect ReparametrizedImmersion::domain() const {
    const ParamRect r = base_->domain();
    return {(r.u0 - c_) / a_, (r.u1 - c_) / a_, (r.v0 - d_) / a_, (r.v1 - d_) / a_};
}

MapJet ReparametrizedImmersion::jet(double u, double v, int order) const {
    MapJet m = base_->jet(a_ * u + c_, a_ * v + d_, order);
    for (int k = 0; k < m.dim; ++k)
        for (int d = 1; d <= order; ++d)
            for (int j = 0; j <= d; ++j) m.c[k].coeff(d - j, j) *= std::pow(a_, d);
    return m;
}

namespace {

void require_n2(const SpaceFormSpec& spec, const char* what) {
    if (spec.n < 2) throw DomainError(std::string(what) + " needs complex dimension >= 2");
}

}  // namespace

std::shared_ptr<const Immersion> make_real_plane(const SpaceFormSpec& spec, double w) {
    require_n2(spec, "real-plane");
    const int d = spec.dim();
    return std::make_shared<AnalyticImmersion>(
        "real-plane", ParamRect{-w, w, -w, w},
        [d](const Jet3& u, const Jet3& v) {
            Vec<Jet3> x(d);
            x[0] = u;
            x[2] = v;
            return x;
        },
        spec.family == Family::C);
}

std::shared_ptr<const Immersion> make_complex_line(const SpaceFormSpec& spec, double w) {
    const int d = spec.dim();
    return std::make_shared<AnalyticImmersion>(
        "complex-line", ParamRect{-w, w, -w, w},
        [d](const Jet3& u, const Jet3& v) {
            Vec<Jet3> x(d);
            x[0] = u;
            x[1] = v;
            return x;
        },
        true);
}

std::shared_ptr<const Immersion> make_vertical_plane(const SpaceFormSpec& spec, double w) {
    const int d = spec.dim();
    return std::make_shared<AnalyticImmersion>(
        "vertical-plane", ParamRect{-w, w, -w, w},
        [d](const Jet3& u, const Jet3& v) {
            Vec<Jet3> x(d);
            x[0] = u;
            x[d - 1] = v;
            return x;
        },
        spec.family == Family::C);
}

std::shared_ptr<const Immersion> make_graph_surface(const SpaceFormSpec& spec, double w) {
    require_n2(spec, "graph");
    const int d = spec.dim();
    return std::make_shared<AnalyticImmersion>(
        "graph", ParamRect{-w, w, -w, w},
        [d](const Jet3& u, const Jet3& v) {
            Vec<Jet3> x(d);
            x[0] = u + 0.1 * v * v;
            x[1] = 0.2 * u * v;
            x[2] = v;
            x[3] = 0.15 * sin(u + 0.5 * v);
            x[d - 1] = 0.3 * u * u - 0.2 * exp(0.5 * v);
            return x;
        },
        false);
}

std::shared_ptr<const Immersion> make_family(const std::string& family, const SpaceFormSpec& spec,
                                             double half_width) {
    if (family == "real-plane") return make_real_plane(spec, half_width);
    if (family == "complex-line") return make_complex_line(spec, half_width);
    if (family == "vertical-plane") return make_vertical_plane(spec, half_width);
    if (family == "graph") return make_graph_surface(spec, half_width);
    throw ConfigError("unknown surface family '" + family + "'");
}

Vec<double> SurfaceGeometry::tangent_part(const Vec<double>& w) const {
    return inner(w, e1) * e1 + inner(w, e2) * e2;
}

Vec<double> SurfaceGeometry::normal_part(const Vec<double>& w) const { return w - tangent_part(w); }

Vec<double> SurfaceGeometry::sigma_frame(double x1, double x2, double y1, double y2) const {
    return (x1 * y1) * sigma[0] + (x1 * y2 + x2 * y1) * sigma[1] + (x2 * y2) * sigma[2];
}

Vec<double> SurfaceGeometry::nabla_frame_H(int i) const {
    if (!has_derivatives) throw PreconditionError("geometry was computed without derivatives");
    if (i == 0) return a11 * nabla_u_H;
    return a21 * nabla_u_H + a22 * nabla_v_H;
}

SurfaceGeometry geometry_from_jet(const ProductSpace& space, const MapJet& f, bool with_derivatives) {
    const int d = space.dim();
    if (f.dim != d) throw PreconditionError("immersion jet dimension does not match the space");
    const int need = with_derivatives ? 3 : 2;
    if (f.order < need) throw PreconditionError("immersion jet order too low for the requested geometry");

    SurfaceGeometry geo;
    geo.x = f.value();
    const Connection conn = space.connection_at(geo.x, with_derivatives ? 2 : 1);
    geo.g = conn.g;
    geo.fu = f.du();
    geo.fv = f.dv();
    const std::array<Vec<double>, 3> f2 = {f.partial(2, 0), f.partial(1, 1), f.partial(0, 2)};

    const Core<double> c = run_core(conn.g, conn.gamma, geo.fu, geo.fv, f2);
    geo.E = c.E;
    geo.F = c.F;
    geo.G = c.G;
    const Eigen2 ff = symmetric_eigen2(c.E, c.F, c.G);
    if (!(ff.lo > 1e-8)) throw DegenerateError("immersion is not of rank 2 at this point");
    geo.lambda2 = c.E;
    geo.a11 = 1.0 / std::sqrt(c.E);
    geo.a22 = 1.0 / std::sqrt(c.G - c.F * c.F / c.E);
    geo.a21 = -(c.F / c.E) * geo.a22;
    geo.e1 = geo.a11 * geo.fu;
    geo.e2 = geo.a21 * geo.fu + geo.a22 * geo.fv;
    geo.sigma_coord = c.sig;
    geo.sigma[0] = (geo.a11 * geo.a11) * c.sig[0];
    geo.sigma[1] = geo.a11 * (geo.a21 * c.sig[0] + geo.a22 * c.sig[1]);
    geo.sigma[2] = (geo.a21 * geo.a21) * c.sig[0] + (2.0 * geo.a21 * geo.a22) * c.sig[1] +
                   (geo.a22 * geo.a22) * c.sig[2];
    geo.H = c.H;
    geo.H_norm = norm(geo.g, geo.H);

    // Normal basis: phi e1, phi e2, H, then chart axes.
    std::vector<Vec<double>> cands = {space.phi(geo.e1), space.phi(geo.e2), geo.H};
    for (int a = 0; a < d; ++a) cands.push_back(Vec<double>::unit(d, a));
    for (const auto& cand : cands) {
        if (static_cast<int>(geo.normal_basis.size()) == d - 2) break;
        const double cn = norm(geo.g, cand);
        if (cn == 0.0) continue;
        Vec<double> w = geo.normal_part(cand);
        for (const auto& b : geo.normal_basis) w -= geo.inner(w, b) * b;
        const double wn = norm(geo.g, w);
        if (wn > 1e-6 * cn) geo.normal_basis.push_back(w / wn);
    }

    if (!with_derivatives) return geo;

    // First-order Taylor models along the surface.
    const Vec<double> fuu = f2[0], fuv = f2[1], fvv = f2[2];
    const Vec<Jet1> fu_j = jet1_vec(geo.fu, fuu, fuv);
    const Vec<Jet1> fv_j = jet1_vec(geo.fv, fuv, fvv);
    const std::array<Vec<Jet1>, 3> f2_j = {jet1_vec(fuu, f.partial(3, 0), f.partial(2, 1)),
                                           jet1_vec(fuv, f.partial(2, 1), f.partial(1, 2)),
                                           jet1_vec(fvv, f.partial(1, 2), f.partial(0, 3))};
    Mat<Jet1> g_j(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double su = 0.0, sv = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dg = conn.dg[(a * d + i) * d + j];
                su += dg * geo.fu[a];
                sv += dg * geo.fv[a];
            }
            g_j(i, j) = jet1(conn.g(i, j), su, sv);
        }
    std::vector<Jet1> gamma_j(d * d * d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double su = 0.0, sv = 0.0;
                for (int a = 0; a < d; ++a) {
                    const double dgam = conn.dchristoffel(a, k, i, j);
                    su += dgam * geo.fu[a];
                    sv += dgam * geo.fv[a];
                }
                gamma_j[(k * d + i) * d + j] = jet1(conn.christoffel(k, i, j), su, sv);
            }
    const Core<Jet1> cj = run_core(g_j, gamma_j, fu_j, fv_j, f2_j);
    geo.has_derivatives = true;
    geo.nabla_u_H = part(cj.H, 1, 0) + conn.apply(geo.fu, geo.H);
    geo.nabla_v_H = part(cj.H, 0, 1) + conn.apply(geo.fv, geo.H);

    // Frame adapted to the tangent part of xi.
    const double b1 = geo.e1[d - 1], b2 = geo.e2[d - 1];
    const double m0 = std::hypot(b1, b2);
    if (m0 > 1e-7) {
        const Jet1 eu = fu_j[d - 1], ev = fv_j[d - 1];
        const Jet1 cu = (cj.G * eu - cj.F * ev) / cj.det;
        const Jet1 cv = (cj.E * ev - cj.F * eu) / cj.det;
        const Jet1 m = sqrt(cu * eu + cv * ev);
        const Vec<Jet1> e2p = (cu * fu_j + cv * fv_j) / m;
        // coordinate coefficients of the adapted frame
        const double pu2 = cu.value() / m.value(), pv2 = cv.value() / m.value();
        const double pu1 = (b2 * geo.a11 - b1 * geo.a21) / m0, pv1 = (-b1 * geo.a22) / m0;
        const Vec<double> e2v = part(e2p, 0, 0);
        const Vec<double> de2 = pu2 * part(e2p, 1, 0) + pv2 * part(e2p, 0, 1);
        geo.nabla_e2_e2 = geo.tangent_part(de2 + conn.apply(e2v, e2v));
        Jet1 h2(0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h2 += g_j(i, j) * cj.H[i] * cj.H[j];
        if (h2.value() > 0.0) {
            const Jet1 nu = cj.H[d - 1] / sqrt(h2);
            geo.d_nu = {pu1 * nu.coeff(1, 0) + pv1 * nu.coeff(0, 1), pu2 * nu.coeff(1, 0) + pv2 * nu.coeff(0, 1)};
        }
        geo.d_mu = {pu1 * m.coeff(1, 0) + pv1 * m.coeff(0, 1), pu2 * m.coeff(1, 0) + pv2 * m.coeff(0, 1)};
        geo.has_xi_frame = true;
    }
    return geo;
}

SurfaceGeometry geometry_at(const ProductSpace& space, const Immersion& imm, double u, double v,
                            bool with_derivatives) {
    SurfaceGeometry geo = geometry_from_jet(space, imm.jet(u, v, with_derivatives ? 3 : 2), with_derivatives);
    geo.u = u;
    geo.v = v;
    return geo;
}

Mat<double> shape_operator(const SurfaceGeometry& geo, const Vec<double>& V) {
    const double vn = norm(geo.g, V);
    if (vn > 0.0 && norm(geo.g, geo.tangent_part(V)) > 1e-6 * std::max(vn, 1.0))
        throw PreconditionError("shape operator needs a normal vector");
    Mat<double> a(2);
    a(0, 0) = geo.inner(geo.sigma[0], V);
    a(0, 1) = a(1, 0) = geo.inner(geo.sigma[1], V);
    a(1, 1) = geo.inner(geo.sigma[2], V);
    return a;
}

double pmc_residual_at(const SurfaceGeometry& geo) {
    const Vec<double> n1 = geo.normal_part(geo.nabla_frame_H(0));
    const Vec<double> n2 = geo.normal_part(geo.nabla_frame_H(1));
    const Eigen2 e = symmetric_eigen2(geo.inner(n1, n1), geo.inner(n1, n2), geo.inner(n2, n2));
    return std::sqrt(std::max(0.0, e.hi));
}

double pseudo_umbilical_residual_at(const SurfaceGeometry& geo) {
    const Mat<double> a = shape_operator(geo, geo.H);
    const double h2 = geo.H_norm * geo.H_norm;
    const double d0 = a(0, 0) - h2, d1 = a(1, 1) - h2;
    return std::sqrt(d0 * d0 + d1 * d1 + 2.0 * a(0, 1) * a(0, 1));
}

double anti_invariance_residual_at(const ProductSpace& space, const SurfaceGeometry& geo) {
    return std::abs(geo.inner(space.phi(geo.e1), geo.e2));
}

double gauss_curvature(const ProductSpace& space, const SurfaceGeometry& geo) {
    const Vec<double> r = space.curvature_model(geo.g, geo.e1, geo.e2, geo.e2);
    return geo.inner(r, geo.e1) + geo.inner(geo.sigma[0], geo.sigma[2]) - geo.inner(geo.sigma[1], geo.sigma[1]);
}

GridResidual grid_max(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                      const std::function<double(const SurfaceGeometry&)>& fn, bool with_derivatives, Exec exec) {
    const auto vals = sweep<double>(
        grid.size(),
        [&](int k) {
            const int i = k / grid.nv, j = k % grid.nv;
            return fn(geometry_at(space, imm, grid.u(i), grid.v(j), with_derivatives));
        },
        exec);
    const ArgMax am = arg_max(vals);
    GridResidual r;
    r.value = am.value;
    r.i = am.index / grid.nv;
    r.j = am.index % grid.nv;
    r.u = grid.u(r.i);
    r.v = grid.v(r.j);
    return r;
}

GridResidual pmc_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid, Exec exec) {
    return grid_max(space, imm, grid, pmc_residual_at, true, exec);
}

GridResidual pseudo_umbilical_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                                       Exec exec) {
    return grid_max(space, imm, grid, pseudo_umbilical_residual_at, false, exec);
}

GridResidual anti_invariance_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid,
                                      Exec exec) {
    return grid_max(
        space, imm, grid, [&space](const SurfaceGeometry& g) { return anti_invariance_residual_at(space, g); },
        false, exec);
}

AngleDecomposition angle_decomposition(const SurfaceGeometry& geo) {
    if (!(geo.H_norm > 1e-8)) throw DegenerateError("angle decomposition at a minimal point");
    const int d = geo.x.size();
    AngleDecomposition ad;
    ad.H_norm = geo.H_norm;
    ad.nu = geo.H[d - 1] / geo.H_norm;
    const double b1 = geo.e1[d - 1], b2 = geo.e2[d - 1];
    const double m = std::hypot(b1, b2);
    double x1 = 1.0, x2 = 0.0, y1 = 0.0, y2 = 1.0;
    if (m >= 1e-7) {
        ad.mu_defined = true;
        ad.mu = m;
        x1 = b2 / m;
        x2 = -b1 / m;
        y1 = b1 / m;
        y2 = b2 / m;
    }
    ad.e1 = x1 * geo.e1 + x2 * geo.e2;
    ad.e2 = y1 * geo.e1 + y2 * geo.e2;
    const Vec<double> n = geo.H / geo.H_norm;
    ad.lambda1 = geo.inner(geo.sigma_frame(x1, x2, x1, x2), n);
    ad.lambda2 = geo.inner(geo.sigma_frame(y1, y2, y1, y2), n);
    ad.off_diagonal = geo.inner(geo.sigma_frame(x1, x2, y1, y2), n);
    return ad;
}

}  // namespace cosym
