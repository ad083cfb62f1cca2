#include "cosym/calculus.hpp"

namespace cosym {

Vec<double> MapJet::partial(int i, int j) const {
    if (i + j > order) throw PreconditionError("requested a derivative above the jet order");
    Vec<double> r(dim);
    for (int k = 0; k < dim; ++k) r[k] = c[k].derivative(i, j);
    return r;
}

MapJet MapJet::from_components(const Vec<Jet3>& x, int order) {
    if (order < 0 || order > 3) throw PreconditionError("jet order must be in [0, 3]");
    MapJet m;
    m.dim = x.size();
    m.order = order;
    for (int k = 0; k < m.dim; ++k) {
        m.c[k] = Jet3();
        for (int d = 0; d <= order; ++d)
            for (int j = 0; j <= d; ++j) m.c[k].coeff(d - j, j) = x[k].coeff(d - j, j);
    }
    return m;
}

MapJet jet_eval(const MapFunction& f, double u, double v, int order) {
    if (order < 1 || order > 3) throw PreconditionError("jet_eval order must be 1, 2 or 3");
    const Vec<Jet3> x = f(Jet3::variable_u(u), Jet3::variable_v(v));
    return MapJet::from_components(x, order);
}

Vec<double> map_value(const MapFunction& f, double u, double v) {
    const Vec<Jet3> x = f(Jet3(u), Jet3(v));
    Vec<double> r(x.size());
    for (int k = 0; k < x.size(); ++k) r[k] = x[k].value();
    return r;
}

Vec<double> fd_partial(const std::function<MapJet(double, double)>& lower, double u, double v, int i, int j,
                       double h) {
    if (i + j < 1) throw PreconditionError("fd_partial needs a derivative of order >= 1");
    if (i > 0) {
        const Vec<double> p = lower(u + h, v).partial(i - 1, j);
        const Vec<double> m = lower(u - h, v).partial(i - 1, j);
        return (p - m) / (2.0 * h);
    }
    const Vec<double> p = lower(u, v + h).partial(i, j - 1);
    const Vec<double> m = lower(u, v - h).partial(i, j - 1);
    return (p - m) / (2.0 * h);
}

Vec<double> fd_partial_values(const PointFunction& f, double u, double v, int i, int j, double h) {
    if (i + j == 1) {
        const double du = i ? h : 0.0, dv = j ? h : 0.0;
        return (f(u + du, v + dv) - f(u - du, v - dv)) / (2.0 * h);
    }
    if (i == 2) return (f(u + h, v) - 2.0 * f(u, v) + f(u - h, v)) / (h * h);
    if (j == 2) return (f(u, v + h) - 2.0 * f(u, v) + f(u, v - h)) / (h * h);
    if (i == 1 && j == 1)
        return (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4.0 * h * h);
    throw PreconditionError("fd_partial_values supports orders 1 and 2 only");
}

Vec<double> covariant_derivative_along(const ProductSpace& space, const MapJet& f, const MapJet& field, double a,
                                       double b) {
    if (f.order < 1 || field.order < 1) throw PreconditionError("covariant derivative needs first-order jets");
    const Connection c = space.connection_at(f.value(), 1);
    const Vec<double> x = a * f.du() + b * f.dv();
    const Vec<double> dV = a * field.du() + b * field.dv();
    return dV + c.apply(x, field.value());
}

}  // namespace cosym
