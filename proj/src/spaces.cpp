#include "cosym/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

std::string to_string(Family f) {
    switch (f) {
        case Family::CP: return "CP";
        case Family::CH: return "CH";
        case Family::C: return "C";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "CP") return Family::CP;
    if (s == "CH") return Family::CH;
    if (s == "C") return Family::C;
    throw ConfigError("unknown space family '" + s + "' (expected CP, CH or C)");
}

void SpaceFormSpec::validate() const {
    if (n < 1 || n > kMaxComplexDim)
        throw DomainError("complex dimension must be in [1, " + std::to_string(kMaxComplexDim) + "]");
    const bool ok = (family == Family::CP && rho > 0.0) || (family == Family::CH && rho < 0.0) ||
                    (family == Family::C && rho == 0.0);
    if (!ok) throw DomainError("rho = " + std::to_string(rho) + " does not match chart family " + to_string(family));
}

std::string SpaceFormSpec::label() const {
    std::ostringstream os;
    os << to_string(family) << n << "(" << rho << ")";
    return os.str();
}

double SpaceFormSpec::sampling_radius() const { return family == Family::CH ? 0.9 : 2.0; }

SpaceFormSpec SpaceFormSpec::make(Family family, int n, double rho) {
    SpaceFormSpec s{family, n, rho};
    s.validate();
    return s;
}

ProductPoint ProductPoint::from_coords(const Vec<double>& x) {
    Vec<double> m(x.size() - 1);
    for (int i = 0; i < m.size(); ++i) m[i] = x[i];
    return {m, x[x.size() - 1]};
}

Vec<double> ProductPoint::coords() const {
    Vec<double> x(m.size() + 1);
    for (int i = 0; i < m.size(); ++i) x[i] = m[i];
    x[m.size()] = t;
    return x;
}

bool operator==(const ProductPoint& a, const ProductPoint& b) {
    if (a.m.size() != b.m.size() || a.t != b.t) return false;
    for (int i = 0; i < a.m.size(); ++i)
        if (a.m[i] != b.m[i]) return false;
    return true;
}

TangentVec::TangentVec(ProductPoint base, Vec<double> components) : base_(std::move(base)), c_(components) {
    if (c_.size() != base_.m.size() + 1) throw PreconditionError("tangent vector needs 2n+1 components");
}

TangentVec TangentVec::zero(const ProductPoint& base) { return {base, Vec<double>(base.m.size() + 1)}; }

TangentVec& TangentVec::operator+=(const TangentVec& o) {
    if (!(o.base_ == base_)) throw PreconditionError("adding tangent vectors at different base points");
    c_ += o.c_;
    return *this;
}

TangentVec& TangentVec::operator-=(const TangentVec& o) {
    if (!(o.base_ == base_)) throw PreconditionError("subtracting tangent vectors at different base points");
    c_ -= o.c_;
    return *this;
}

TangentVec& TangentVec::operator*=(double s) {
    c_ *= s;
    return *this;
}

Vec<double> Connection::apply(const Vec<double>& x, const Vec<double>& y) const {
    Vec<double> r(dim);
    for (int k = 0; k < dim; ++k) {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            if (x[i] == 0.0) continue;
            double row = 0.0;
            for (int j = 0; j < dim; ++j) row += christoffel(k, i, j) * y[j];
            acc += x[i] * row;
        }
        r[k] = acc;
    }
    return r;
}

Vec<double> Connection::apply_derivative(const Vec<double>& z, const Vec<double>& x, const Vec<double>& y) const {
    if (order < 2) throw PreconditionError("connection was built without Christoffel derivatives");
    Vec<double> r(dim);
    for (int a = 0; a < dim; ++a) {
        if (z[a] == 0.0) continue;
        for (int k = 0; k < dim; ++k) {
            double acc = 0.0;
            for (int i = 0; i < dim; ++i) {
                double row = 0.0;
                for (int j = 0; j < dim; ++j) row += dchristoffel(a, k, i, j) * y[j];
                acc += x[i] * row;
            }
            r[k] += z[a] * acc;
        }
    }
    return r;
}

ProductSpace::ProductSpace(SpaceFormSpec spec) : ProductSpace(spec, 0.0) {}

ProductSpace::ProductSpace(SpaceFormSpec spec, double perturbation) : spec_(spec), perturbation_(perturbation) {
    spec_.validate();
}

ProductSpace ProductSpace::with_metric_perturbation(SpaceFormSpec spec, double amplitude) {
    return ProductSpace(spec, amplitude);
}

bool ProductSpace::in_domain(const Vec<double>& x) const {
    if (x.size() != dim()) return false;
    double r2 = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) return false;
        if (i < real_dim()) r2 += x[i] * x[i];
    }
    if (spec_.family == Family::CH) return std::sqrt(r2) <= 0.9;
    return true;
}

void ProductSpace::require_domain(const Vec<double>& x) const {
    if (!in_domain(x)) {
        std::ostringstream os;
        os << "point outside the chart domain of " << spec_.label() << " (|z| = ";
        double r2 = 0.0;
        for (int i = 0; i < std::min(x.size(), real_dim()); ++i) r2 += x[i] * x[i];
        os << std::sqrt(r2) << ")";
        throw DomainError(os.str());
    }
}

Mat<double> ProductSpace::metric_at(const ProductPoint& p) const {
    const Vec<double> x = p.coords();
    require_domain(x);
    return metric(x);
}

Mat<double> ProductSpace::phi_matrix() const {
    Mat<double> f(dim());
    for (int j = 0; j < spec_.n; ++j) {
        f(2 * j + 1, 2 * j) = 1.0;
        f(2 * j, 2 * j + 1) = -1.0;
    }
    return f;
}

Vec<double> ProductSpace::phi(const Vec<double>& u) const {
    Vec<double> r(dim());
    for (int j = 0; j < spec_.n; ++j) {
        r[2 * j] = -u[2 * j + 1];
        r[2 * j + 1] = u[2 * j];
    }
    return r;
}

CosymplecticFrame ProductSpace::cosymplectic_frame_at(const ProductPoint& p) const {
    CosymplecticFrame f;
    f.g = metric_at(p);
    f.phi = phi_matrix();
    f.xi = xi();
    f.eta = xi();  // eta = dt, as a covector
    return f;
}

Connection ProductSpace::connection_at(const Vec<double>& x, int derivative_order) const {
    require_domain(x);
    const int d = dim();
    const int dm = real_dim();
    Connection c;
    c.dim = d;
    c.order = derivative_order;
    c.g = metric(x);
    c.ginv = spd_inverse(c.g);
    c.dg.assign(d * d * d, 0.0);
    std::vector<double> ddg;
    auto dg_at = [&](int a, int i, int j) -> double& { return c.dg[(a * d + i) * d + j]; };

    if (derivative_order <= 1) {
        using J = Jet<double, 1>;
        for (int a = 0; a < dm; a += 2) {
            const int b = a + 1;
            Vec<J> xj(d);
            for (int i = 0; i < d; ++i) xj[i] = J(x[i]);
            xj[a] = J::variable_u(x[a]);
            xj[b] = J::variable_v(x[b]);
            const Mat<J> gj = metric(xj);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    dg_at(a, i, j) = gj(i, j).coeff(1, 0);
                    dg_at(b, i, j) = gj(i, j).coeff(0, 1);
                }
        }
    } else {
        using J = Jet<double, 2>;
        ddg.assign(d * d * d * d, 0.0);
        auto ddg_at = [&](int a, int b, int i, int j) -> double& { return ddg[((a * d + b) * d + i) * d + j]; };
        for (int a = 0; a < dm; ++a)
            for (int b = a + 1; b < dm; ++b) {
                Vec<J> xj(d);
                for (int i = 0; i < d; ++i) xj[i] = J(x[i]);
                xj[a] = J::variable_u(x[a]);
                xj[b] = J::variable_v(x[b]);
                const Mat<J> gj = metric(xj);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        const J& e = gj(i, j);
                        dg_at(a, i, j) = e.coeff(1, 0);
                        dg_at(b, i, j) = e.coeff(0, 1);
                        ddg_at(a, a, i, j) = 2.0 * e.coeff(2, 0);
                        ddg_at(b, b, i, j) = 2.0 * e.coeff(0, 2);
                        ddg_at(a, b, i, j) = e.coeff(1, 1);
                        ddg_at(b, a, i, j) = e.coeff(1, 1);
                    }
            }
    }

    // Christoffel symbols of the first kind, then raise the index.
    std::vector<double> first(d * d * d);
    auto first_at = [&](int l, int i, int j) -> double& { return first[(l * d + i) * d + j]; };
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) first_at(l, i, j) = 0.5 * (dg_at(i, j, l) + dg_at(j, i, l) - dg_at(l, i, j));
    c.gamma.assign(d * d * d, 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int l = 0; l < d; ++l) acc += c.ginv(k, l) * first_at(l, i, j);
                c.gamma[(k * d + i) * d + j] = acc;
            }

    if (derivative_order >= 2) {
        auto ddg_at = [&](int a, int b, int i, int j) { return ddg[((a * d + b) * d + i) * d + j]; };
        c.dgamma.assign(d * d * d * d, 0.0);
        for (int a = 0; a < dm; ++a) {
            // d_a g^{kl} = -g^{kp} d_a g_{pq} g^{ql}
            Mat<double> dginv(d);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double acc = 0.0;
                    for (int p = 0; p < d; ++p)
                        for (int q = 0; q < d; ++q) acc -= c.ginv(k, p) * dg_at(a, p, q) * c.ginv(q, l);
                    dginv(k, l) = acc;
                }
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        double acc = 0.0;
                        for (int l = 0; l < d; ++l) {
                            const double dfirst =
                                0.5 * (ddg_at(a, i, j, l) + ddg_at(a, j, i, l) - ddg_at(a, l, i, j));
                            acc += dginv(k, l) * first_at(l, i, j) + c.ginv(k, l) * dfirst;
                        }
                        c.dgamma[((a * d + k) * d + i) * d + j] = acc;
                    }
        }
    }
    return c;
}

Vec<double> ProductSpace::curvature_numeric(const Connection& c, const Vec<double>& u, const Vec<double>& v,
                                            const Vec<double>& w) const {
    if (c.order < 2) throw PreconditionError("numeric curvature needs Christoffel derivatives");
    // R(U,V)W = (d_U Gamma)(V,W) - (d_V Gamma)(U,W) + Gamma(U, Gamma(V,W)) - Gamma(V, Gamma(U,W))
    Vec<double> r = c.apply_derivative(u, v, w) - c.apply_derivative(v, u, w);
    r += c.apply(u, c.apply(v, w));
    r -= c.apply(v, c.apply(u, w));
    return r;
}

Vec<double> ProductSpace::curvature_numeric(const Vec<double>& x, const Vec<double>& u, const Vec<double>& v,
                                            const Vec<double>& w) const {
    return curvature_numeric(connection_at(x, 2), u, v, w);
}

Vec<double> ProductSpace::curvature_model(const Mat<double>& g, const Vec<double>& u, const Vec<double>& v,
                                          const Vec<double>& w) const {
    const Vec<double> fu = phi(u), fv = phi(v), fw = phi(w);
    const Vec<double> e = xi();
    const double vw = bilinear(g, v, w), uw = bilinear(g, u, w);
    const double u_fw = bilinear(g, u, fw), v_fw = bilinear(g, v, fw), u_fv = bilinear(g, u, fv);
    const double eu = eta(u), ev = eta(v), ew = eta(w);
    Vec<double> r = vw * u - uw * v + u_fw * fv - v_fw * fu + (2.0 * u_fv) * fw + (eu * ew) * v - (ev * ew) * u +
                    (uw * ev) * e - (vw * eu) * e;
    return r * (spec_.rho / 4.0);
}

Vec<double> ProductSpace::curvature_model(const Vec<double>& x, const Vec<double>& u, const Vec<double>& v,
                                          const Vec<double>& w) const {
    require_domain(x);
    return curvature_model(metric(x), u, v, w);
}

TangentVec ProductSpace::curvature_numeric(const ProductPoint& p, const TangentVec& u, const TangentVec& v,
                                           const TangentVec& w) const {
    return {p, curvature_numeric(p.coords(), u.components(), v.components(), w.components())};
}

TangentVec ProductSpace::curvature_model(const ProductPoint& p, const TangentVec& u, const TangentVec& v,
                                         const TangentVec& w) const {
    return {p, curvature_model(p.coords(), u.components(), v.components(), w.components())};
}

double norm(const Mat<double>& g, const Vec<double>& x) { return std::sqrt(std::max(0.0, bilinear(g, x, x))); }

std::vector<Vec<double>> orthonormal_axes(const Mat<double>& g) {
    const int d = g.size();
    std::vector<Vec<double>> frame;
    for (int a = 0; a < d; ++a) {
        Vec<double> e = Vec<double>::unit(d, a);
        for (const auto& f : frame) e -= bilinear(g, e, f) * f;
        e /= norm(g, e);
        frame.push_back(e);
    }
    return frame;
}

ParallelismResiduals parallelism_residuals(const ProductSpace& space, std::span<const Vec<double>> points) {
    ParallelismResiduals res;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const Connection c = space.connection_at(points[idx], 1);
        const auto frame = orthonormal_axes(c.g);
        const Vec<double> xi = space.xi();
        for (const auto& ea : frame) {
            // phi and xi have constant components, so only the connection terms survive.
            const double dxi = norm(c.g, c.apply(ea, xi));
            res.nabla_xi = std::max(res.nabla_xi, dxi);
            for (const auto& eb : frame) {
                const Vec<double> r = c.apply(ea, space.phi(eb)) - space.phi(c.apply(ea, eb));
                const double val = norm(c.g, r);
                if (val > res.nabla_phi) {
                    res.nabla_phi = val;
                    res.argmax_phi = static_cast<int>(idx);
                }
            }
        }
    }
    return res;
}

std::vector<Vec<double>> sample_points(const SpaceFormSpec& spec, int count, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int dm = spec.real_dim();
    const double radius = spec.sampling_radius();
    std::vector<Vec<double>> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vec<double> x(spec.dim());
        double nrm = 0.0;
        for (int i = 0; i < dm; ++i) {
            x[i] = normal(rng);
            nrm += x[i] * x[i];
        }
        nrm = std::sqrt(nrm);
        const double r = radius * std::pow(unif(rng), 1.0 / dm);
        for (int i = 0; i < dm; ++i) x[i] *= r / nrm;
        x[dm] = 2.0 * unif(rng) - 1.0;
        pts.push_back(x);
    }
    return pts;
}

Vec<double> sample_unit_vector(const Mat<double>& g, std::mt19937_64& rng, bool horizontal_only) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec<double> u(g.size());
    for (int i = 0; i < g.size(); ++i) u[i] = normal(rng);
    if (horizontal_only) u[g.size() - 1] = 0.0;
    return u / norm(g, u);
}

}  // namespace cosym
