#pragma once

// Jets of chart-valued maps from a one- or two-parameter domain, a central
// finite-difference oracle, and covariant derivatives along maps.

#include <functional>

#include "cosym/jet.hpp"
#include "cosym/linalg.hpp"
#include "cosym/spaces.hpp"

namespace cosym {

using Jet3 = Jet<double, 3>;
using Jet1 = Jet<double, 1>;

/// Per-coordinate Taylor data of a map (u, v) -> chart coordinates.
/// Curves use the u slot only.
struct MapJet {
    int dim = 0;
    int order = 0;
    std::array<Jet3, kMaxDim> c{};

    Vec<double> value() const { return partial(0, 0); }
    /// d^i_u d^j_v of every coordinate; zero above the stored order is an error.
    Vec<double> partial(int i, int j) const;
    Vec<double> du() const { return partial(1, 0); }
    Vec<double> dv() const { return partial(0, 1); }

    static MapJet from_components(const Vec<Jet3>& x, int order);
};

using MapFunction = std::function<Vec<Jet3>(const Jet3& u, const Jet3& v)>;
using PointFunction = std::function<Vec<double>(double u, double v)>;

/// Exact jets of f at (u, v). order must be 1, 2 or 3.
MapJet jet_eval(const MapFunction& f, double u, double v, int order);

/// Plain evaluation of a jet-templated map.
Vec<double> map_value(const MapFunction& f, double u, double v);

/// Central difference (step h) of the (i-1, j) or (i, j-1) partial supplied by
/// `lower`, which must return exact lower-order partials. Used as an oracle.
Vec<double> fd_partial(const std::function<MapJet(double, double)>& lower, double u, double v, int i, int j,
                       double h = 1e-5);

/// Central differences of plain point evaluations for partials of order 1 and 2.
Vec<double> fd_partial_values(const PointFunction& f, double u, double v, int i, int j, double h = 1e-5);

/// nabla^N_X V = dV(X) + Gamma(df(X), V) along the map f, with X = a d_u + b d_v.
/// Both jets need order >= 1.
Vec<double> covariant_derivative_along(const ProductSpace& space, const MapJet& f, const MapJet& field, double a,
                                       double b);

}  // namespace cosym
