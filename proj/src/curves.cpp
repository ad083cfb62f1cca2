#include "cosym/curves.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace cosym {

double CurvatureLaw::value(double s) const { return base + amplitude * std::sin(frequency * s); }

double CurvatureLaw::derivative(double s) const { return amplitude * frequency * std::cos(frequency * s); }

FrenetState circle_initial_frame(const ProductSpace& space, const Vec<double>& p, double kappa, double tau) {
    if (std::abs(tau) > 1.0) throw DomainError("complex torsion must satisfy |tau| <= 1");
    if (std::abs(tau) < 1.0 && space.spec().n < 2)
        throw DomainError("a circle with |tau| < 1 needs complex dimension >= 2");
    if (!(kappa > 0.0)) throw DomainError("circle curvature must be positive");
    const int d = space.dim();
    Vec<double> x = p;
    if (x.size() == d - 1) {
        x = Vec<double>(d);
        for (int i = 0; i < d - 1; ++i) x[i] = p[i];
    }
    x[d - 1] = 0.0;
    space.require_domain(x);
    const Mat<double> g = space.metric(x);

    Vec<double> e1 = Vec<double>::unit(d, 0);
    e1 /= norm(g, e1);
    const Vec<double> je1 = space.phi(e1);
    Vec<double> w;
    for (int a = 0; a < space.real_dim(); ++a) {
        Vec<double> c = Vec<double>::unit(d, a);
        const double cn = norm(g, c);
        c -= bilinear(g, c, e1) * e1;
        c -= bilinear(g, c, je1) * je1;
        const double wn = norm(g, c);
        if (wn > 1e-6 * cn) {
            w = c / wn;
            break;
        }
    }
    Vec<double> e2 = -tau * je1;
    if (std::abs(tau) < 1.0) e2 += std::sqrt(1.0 - tau * tau) * w;
    FrenetState st;
    st.p = x;
    st.E = {e1, e2};
    st.kappa = {kappa};
    return st;
}

namespace {

struct FrenetDeriv {
    Vec<double> dx, d1, d2;
};

FrenetDeriv frenet_rhs(const ProductSpace& space, const Vec<double>& x, const Vec<double>& e1,
                       const Vec<double>& e2, double kappa) {
    const Connection c = space.connection_at(x, 1);
    return {e1, kappa * e2 - c.apply(e1, e1), -kappa * e1 - c.apply(e1, e2)};
}

bool rk4_step(const ProductSpace& space, const CurvatureLaw& law, double s, double h, Vec<double>& x,
              Vec<double>& e1, Vec<double>& e2) {
    auto eval = [&](const Vec<double>& xx, const Vec<double>& a, const Vec<double>& b, double ss,
                    FrenetDeriv& out) {
        if (!space.in_domain(xx)) return false;
        out = frenet_rhs(space, xx, a, b, law.value(ss));
        return true;
    };
    FrenetDeriv k1, k2, k3, k4;
    if (!eval(x, e1, e2, s, k1)) return false;
    if (!eval(x + (0.5 * h) * k1.dx, e1 + (0.5 * h) * k1.d1, e2 + (0.5 * h) * k1.d2, s + 0.5 * h, k2)) return false;
    if (!eval(x + (0.5 * h) * k2.dx, e1 + (0.5 * h) * k2.d1, e2 + (0.5 * h) * k2.d2, s + 0.5 * h, k3)) return false;
    if (!eval(x + h * k3.dx, e1 + h * k3.d1, e2 + h * k3.d2, s + h, k4)) return false;
    const double w = h / 6.0;
    const Vec<double> nx = x + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    if (!space.in_domain(nx)) return false;
    Vec<double> n1 = e1 + w * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
    Vec<double> n2 = e2 + w * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
    const Mat<double> g = space.metric(nx);
    n1 /= norm(g, n1);
    n2 -= bilinear(g, n2, n1) * n1;
    n2 /= norm(g, n2);
    x = nx;
    e1 = n1;
    e2 = n2;
    return true;
}

}  // namespace

CurveSamples integrate_frenet(const ProductSpace& space, const FrenetState& init, const CurvatureLaw& law,
                              double length, int steps) {
    if (init.order() != 2) throw PreconditionError("only osculating order 2 is supported");
    if (!(length > 0.0)) throw DomainError("curve length must be positive");
    if (steps < 100.0 * length) throw PreconditionError("at least 100 integration steps per unit length required");
    CurveSamples c;
    c.law = law;
    c.ds = length / steps;
    Vec<double> x = init.p, e1 = init.E[0], e2 = init.E[1];
    auto record = [&](double s) {
        const Mat<double> g = space.metric(x);
        c.s.push_back(s);
        c.x.push_back(x);
        c.E1.push_back(e1);
        c.E2.push_back(e2);
        c.kappa.push_back(law.value(s));
        c.tau.push_back(bilinear(g, e1, space.phi(e2)));
    };
    record(0.0);
    for (int k = 0; k < steps; ++k) {
        const double s = k * c.ds;
        if (!rk4_step(space, law, s, c.ds, x, e1, e2)) {
            c.truncated = true;
            std::ostringstream os;
            os << "curve left the chart domain of " << space.spec().label() << "; truncated at s = " << s;
            c.warning = os.str();
            break;
        }
        record((k + 1) * c.ds);
    }
    return c;
}

CurvePoint curve_at(const ProductSpace& space, const CurveSamples& curve, double s) {
    if (curve.size() == 0) throw PreconditionError("empty curve");
    if (s < -1e-12 || s > curve.length() + 1e-12) throw DomainError("arclength outside the integrated curve");
    const int k = std::clamp(static_cast<int>(std::lround(s / curve.ds)), 0, curve.size() - 1);
    CurvePoint p{curve.x[k], curve.E1[k], curve.E2[k]};
    const double h = s - curve.s[k];
    if (h != 0.0 && !rk4_step(space, curve.law, curve.s[k], h, p.x, p.E1, p.E2))
        throw DomainError("curve substep left the chart domain");
    return p;
}

void write_curve_csv(std::ostream& os, const CurveSamples& curve) {
    const int dm = curve.size() ? curve.x[0].size() - 1 : 0;
    os << "s";
    for (int i = 0; i < dm / 2; ++i) os << ",x" << i + 1 << ",y" << i + 1;
    os << ",kappa,tau12\n" << std::setprecision(17);
    for (int k = 0; k < curve.size(); ++k) {
        os << curve.s[k];
        for (int i = 0; i < dm; ++i) os << ',' << curve.x[k][i];
        os << ',' << curve.kappa[k] << ',' << curve.tau[k] << '\n';
    }
}

CylinderImmersion::CylinderImmersion(ProductSpace space, CurveSamples curve, double height)
    : space_(std::move(space)), curve_(std::move(curve)), height_(height) {
    if (curve_.size() < 2) throw PreconditionError("cylinder needs an integrated curve");
}

MapJet CylinderImmersion::jet(double u, double v, int order) const {
    const CurvePoint p = curve_at(space_, curve_, u);
    const int d = space_.dim();
    const Connection c = space_.connection_at(p.x, 2);
    const double k = curve_.law.value(u), kp = curve_.law.derivative(u);
    const Vec<double> g1 = p.E1;
    const Vec<double> g2 = k * p.E2 - c.apply(p.E1, p.E1);
    const Vec<double> dE2 = -k * p.E1 - c.apply(p.E1, p.E2);
    const Vec<double> g3 = kp * p.E2 + k * dE2 - c.apply_derivative(p.E1, p.E1, p.E1) - 2.0 * c.apply(g2, p.E1);
    MapJet m;
    m.dim = d;
    m.order = order;
    for (int i = 0; i < d - 1; ++i) {
        Jet3 j(p.x[i]);
        j.coeff(1, 0) = g1[i];
        if (order >= 2) j.coeff(2, 0) = g2[i] / 2.0;
        if (order >= 3) j.coeff(3, 0) = g3[i] / 6.0;
        m.c[i] = j;
    }
    m.c[d - 1] = Jet3::variable_v(v);
    return m;
}

double default_cylinder_length(const SpaceFormSpec& spec) {
    return spec.family == Family::CH ? 1.0 : 2.0 * std::numbers::pi;
}

std::shared_ptr<CylinderImmersion> build_cylinder(const ProductSpace& space, const CurveSamples& curve,
                                                  double height) {
    return std::make_shared<CylinderImmersion>(space, curve, height);
}

std::shared_ptr<CylinderImmersion> make_cylinder(const ProductSpace& space, const CurvatureLaw& law, double tau,
                                                 const CylinderOptions& opt) {
    const double length = opt.length > 0.0 ? opt.length : default_cylinder_length(space.spec());
    const FrenetState init = circle_initial_frame(space, Vec<double>(space.dim()), law.value(0.0), tau);
    const int steps = std::max(1, static_cast<int>(std::ceil(opt.steps_per_unit * length)));
    return build_cylinder(space, integrate_frenet(space, init, law, length, steps), opt.height);
}

double proposition_kappa(double rho, double tau) {
    if (rho >= 0.0) throw DomainError("a cylinder with vanishing Q needs rho < 0");
    return 0.5 * std::sqrt(-rho * (1.0 + 3.0 * tau * tau));
}

CylinderClassification classify_cylinder(const ProductSpace& space, double kappa, double tau, int grid_n,
                                         const CylinderOptions& opt) {
    CylinderClassification r;
    r.kappa = kappa;
    r.tau = tau;
    r.rho = space.rho();
    const auto cyl = make_cylinder(space, CurvatureLaw::constant(kappa), tau, opt);
    const ParamRect rect = cyl->domain();
    const Grid grid{rect, grid_n, grid_n};
    r.pmc_residual = pmc_residual(space, *cyl, grid).value;
    r.pmc = r.pmc_residual < 1e-6;
    const QValue q = q_value(space, *cyl, 0.5 * (rect.u0 + rect.u1), 0.5 * (rect.v0 + rect.v1));
    r.q = q.q;
    r.qprime = q.qprime;
    r.H_norm = q.H_norm;
    r.predicate = 4.0 * kappa * kappa + r.rho * (1.0 + 3.0 * tau * tau);
    r.q_vanishes = std::abs(r.q) < 1e-8;
    if (r.rho >= 0.0) {
        r.q_vanishing_possible = false;
        r.note = "Q(Z,Z) cannot vanish on a non-minimal cylinder unless rho < 0";
    } else {
        const double lo = std::sqrt(-r.rho) / 4.0, hi = std::sqrt(-r.rho) / 2.0;
        r.H_bounds_hold = r.H_norm >= lo - 1e-12 && r.H_norm <= hi + 1e-12;
    }
    return r;
}

KappaScan kappa_scan(const ProductSpace& space, double tau, double lo, double hi, int samples, Exec exec) {
    if (!(hi > lo) || samples < 2 || samples > 10000) throw ConfigError("kappa scan needs lo < hi and 2..10000 samples");
    CylinderOptions opt;
    opt.length = 0.2;
    opt.height = 0.2;
    auto re_q = [&](double k) {
        const auto cyl = make_cylinder(space, CurvatureLaw::constant(k), tau, opt);
        return q_value(space, *cyl, 0.1, 0.1).q.real();
    };
    KappaScan scan;
    scan.kappa.resize(samples);
    for (int i = 0; i < samples; ++i) scan.kappa[i] = lo + (hi - lo) * i / (samples - 1);
    scan.re_q = sweep<double>(samples, [&](int i) { return re_q(scan.kappa[i]); }, exec);
    for (int i = 0; i + 1 < samples; ++i) {
        double a = scan.kappa[i], b = scan.kappa[i + 1];
        double fa = scan.re_q[i], fb = scan.re_q[i + 1];
        if (fa == 0.0) {
            scan.roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
        for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = re_q(m);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        scan.roots.push_back(0.5 * (a + b));
    }
    if (samples > 0 && scan.re_q.back() == 0.0) scan.roots.push_back(scan.kappa.back());
    return scan;
}

}  // namespace cosym
