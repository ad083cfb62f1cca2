#include "cosym/qforms.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace cosym {

namespace {

constexpr double kIsothermalTol = 1e-7;
constexpr int kMinInterior = 16;

}  // namespace

IsothermalFrame isothermal_frame(const SurfaceGeometry& geo) {
    if (!(std::abs(geo.E - geo.G) + std::abs(geo.F) < kIsothermalTol * geo.E))
        throw PreconditionError(
            "parametrization is not isothermal at this point; use a built-in isothermal family "
            "(cylinder, sphere, complex-line)");
    IsothermalFrame fr;
    fr.lambda2 = geo.E;
    const double s = 1.0 / std::sqrt(2.0);
    fr.re = s * geo.fu;
    fr.im = -s * geo.fv;
    fr.zz = cplx(0.5 * (geo.E - geo.G), -geo.F);
    fr.zzbar = cplx(0.5 * (geo.E + geo.G), 0.0);
    return fr;
}

IsothermalFrame isothermal_frame(const ProductSpace& space, const Immersion& imm, double u, double v) {
    return isothermal_frame(geometry_at(space, imm, u, v, false));
}

double q_bilinear(const ProductSpace& space, const SurfaceGeometry& geo, QForm which, double xu, double xv,
                  double yu, double yv) {
    const int d = space.dim();
    const Vec<double> sxy = (xu * yu) * geo.sigma_coord[0] + (xu * yv + xv * yu) * geo.sigma_coord[1] +
                            (xv * yv) * geo.sigma_coord[2];
    const double eta_x = xu * geo.fu[d - 1] + xv * geo.fv[d - 1];
    const double eta_y = yu * geo.fu[d - 1] + yv * geo.fv[d - 1];
    const double rho = space.rho();
    const double sh = geo.inner(sxy, geo.H);
    if (which == QForm::QPrime) return 8.0 * sh - rho * eta_x * eta_y;
    const double h2 = geo.H_norm * geo.H_norm;
    const Vec<double> X = xu * geo.fu + xv * geo.fv, Y = yu * geo.fu + yv * geo.fv;
    const double px = geo.inner(space.phi(X), geo.H), py = geo.inner(space.phi(Y), geo.H);
    return 8.0 * h2 * sh - rho * h2 * eta_x * eta_y + 3.0 * rho * px * py;
}

QValue q_value(const ProductSpace& space, const SurfaceGeometry& geo) {
    (void)isothermal_frame(geo);
    QValue q;
    q.u = geo.u;
    q.v = geo.v;
    q.lambda2 = geo.E;
    q.H_norm = geo.H_norm;
    for (QForm w : {QForm::Q, QForm::QPrime}) {
        const double uu = q_bilinear(space, geo, w, 1, 0, 1, 0);
        const double vv = q_bilinear(space, geo, w, 0, 1, 0, 1);
        const double uv = q_bilinear(space, geo, w, 1, 0, 0, 1);
        const cplx z(0.5 * (uu - vv), -uv);
        (w == QForm::Q ? q.q : q.qprime) = z;
    }
    return q;
}

QValue q_value(const ProductSpace& space, const Immersion& imm, double u, double v) {
    return q_value(space, geometry_at(space, imm, u, v, false));
}

QGrid q_grid(const ProductSpace& space, const Immersion& imm, const Grid& grid, Exec exec) {
    QGrid qg;
    qg.grid = grid;
    qg.values = sweep<QValue>(
        grid.size(),
        [&](int k) {
            const int i = k / grid.nv, j = k % grid.nv;
            return q_value(space, imm, grid.u(i), grid.v(j));
        },
        exec);
    return qg;
}

double stencil_d1(double fm2, double fm1, double fp1, double fp2, double h) {
    return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

double stencil_d2(double fm2, double fm1, double f0, double fp1, double fp2, double h) {
    return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

DbarResult dbar_residual(const QGrid& qg, QForm which) {
    const Grid& gr = qg.grid;
    if (gr.nu - 4 < kMinInterior || gr.nv - 4 < kMinInterior)
        throw PreconditionError("dbar residual needs at least 16 interior grid points per axis");
    auto f = [&](int i, int j) {
        const QValue& q = qg.values[gr.index(i, j)];
        return which == QForm::Q ? q.q : q.qprime;
    };
    DbarResult r;
    r.pointwise.assign(gr.size(), std::numeric_limits<double>::quiet_NaN());
    double qmax = 0.0, hmax = 0.0;
    for (const auto& q : qg.values) {
        qmax = std::max(qmax, std::abs(which == QForm::Q ? q.q : q.qprime));
        hmax = std::max(hmax, std::pow(q.H_norm, 4));
    }
    r.q_scale = qmax + hmax;
    std::vector<double> normalized(gr.size(), 0.0), raw(gr.size(), 0.0);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 2; i < gr.nu - 2; ++i)
        for (int j = 2; j < gr.nv - 2; ++j) {
            const cplx du = (-f(i + 2, j) + 8.0 * f(i + 1, j) - 8.0 * f(i - 1, j) + f(i - 2, j)) / (12.0 * gr.hu());
            const cplx dv = (-f(i, j + 2) + 8.0 * f(i, j + 1) - 8.0 * f(i, j - 1) + f(i, j - 2)) / (12.0 * gr.hv());
            const double val = std::abs(s * (du + cplx(0.0, 1.0) * dv));
            const QValue& q = qg.values[gr.index(i, j)];
            const int k = gr.index(i, j);
            r.pointwise[k] = val;
            raw[k] = val;
            normalized[k] = val / (q.lambda2 * q.lambda2 * std::max(std::pow(q.H_norm, 4), 1.0));
        }
    const ArgMax a = arg_max(raw), b = arg_max(normalized);
    auto locate = [&](const ArgMax& m) {
        GridResidual g;
        g.value = m.value;
        g.i = m.index / gr.nv;
        g.j = m.index % gr.nv;
        g.u = gr.u(g.i);
        g.v = gr.v(g.j);
        return g;
    };
    r.at_raw = locate(a);
    r.at_normalized = locate(b);
    r.raw = a.value;
    r.normalized = b.value;
    return r;
}

DbarResult dbar_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid, QForm which,
                         Exec exec) {
    return dbar_residual(q_grid(space, imm, grid, exec), which);
}

void write_q_csv(std::ostream& os, const QGrid& qg) {
    const Grid& gr = qg.grid;
    std::vector<double> dq(gr.size(), std::numeric_limits<double>::quiet_NaN()), dqp = dq;
    if (gr.nu - 4 >= kMinInterior && gr.nv - 4 >= kMinInterior) {
        dq = dbar_residual(qg, QForm::Q).pointwise;
        dqp = dbar_residual(qg, QForm::QPrime).pointwise;
    }
    os << "u,v,re_q,im_q,re_qprime,im_qprime,dbar_q,dbar_qprime\n";
    os << std::setprecision(17);
    for (int i = 0; i < gr.nu; ++i)
        for (int j = 0; j < gr.nv; ++j) {
            const int k = gr.index(i, j);
            const QValue& q = qg.values[k];
            os << gr.u(i) << ',' << gr.v(j) << ',' << q.q.real() << ',' << q.q.imag() << ',' << q.qprime.real()
               << ',' << q.qprime.imag() << ',' << dq[k] << ',' << dqp[k] << '\n';
        }
}

}  // namespace cosym
