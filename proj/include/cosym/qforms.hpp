#pragma once

// The quadratic forms
//   Q(X,Y)  = 8|H|^2 <sigma(X,Y),H> - rho |H|^2 eta(X) eta(Y) + 3 rho <phi X,H><phi Y,H>
//   Q'(X,Y) = 8 <sigma(X,Y),H> - rho eta(X) eta(Y)
// evaluated on Z = (d_u - i d_v)/sqrt(2) in isothermal coordinates, and the
// dbar residual Zbar(Q(Z,Z)) by fourth-order grid stencils.

#include <complex>
#include <ostream>

#include "cosym/surface.hpp"

namespace cosym {

using cplx = std::complex<double>;

struct IsothermalFrame {
    double lambda2 = 0.0;
    // Z = re + i im, Zbar = re - i im
    Vec<double> re, im;
    cplx zz;     // <Z, Z>, complex bilinear
    cplx zzbar;  // <Z, Zbar>
};

/// Throws PreconditionError unless |E - G| + |F| < 1e-7 E at the point.
IsothermalFrame isothermal_frame(const SurfaceGeometry& geo);
IsothermalFrame isothermal_frame(const ProductSpace& space, const Immersion& imm, double u, double v);

struct QValue {
    cplx q{0.0, 0.0};
    cplx qprime{0.0, 0.0};
    double u = 0.0, v = 0.0;
    double lambda2 = 0.0;
    double H_norm = 0.0;
};

enum class QForm { Q, QPrime };

/// Real bilinear Q or Q' on tangent vectors X = x_u f_u + x_v f_v.
double q_bilinear(const ProductSpace& space, const SurfaceGeometry& geo, QForm which, double xu, double xv,
                  double yu, double yv);

QValue q_value(const ProductSpace& space, const SurfaceGeometry& geo);
QValue q_value(const ProductSpace& space, const Immersion& imm, double u, double v);

struct QGrid {
    Grid grid;
    std::vector<QValue> values;  // grid.index(i, j)
};

QGrid q_grid(const ProductSpace& space, const Immersion& imm, const Grid& grid, Exec exec = Exec::Parallel);

struct DbarResult {
    double raw = 0.0;         // max |Zbar Q(Z,Z)| over interior nodes
    double normalized = 0.0;  // max |Zbar Q(Z,Z)| / (lambda^4 max(|H|^4, 1))
    GridResidual at_raw, at_normalized;
    double q_scale = 0.0;     // max |Q(Z,Z)| + max |H|^4 over the grid
    std::vector<double> pointwise;  // |Zbar Q| per node, NaN on the stencil margin
};

/// Needs at least 16 interior nodes per axis (nu, nv >= 20).
DbarResult dbar_residual(const QGrid& qg, QForm which);
DbarResult dbar_residual(const ProductSpace& space, const Immersion& imm, const Grid& grid, QForm which,
                         Exec exec = Exec::Parallel);

/// Fourth-order central first derivative along a grid line.
double stencil_d1(double fm2, double fm1, double fp1, double fp2, double h);
/// Fourth-order central second derivative.
double stencil_d2(double fm2, double fm1, double f0, double fp1, double fp2, double h);

/// Columns: u, v, re_q, im_q, re_qprime, im_qprime, dbar_q, dbar_qprime.
void write_q_csv(std::ostream& os, const QGrid& qg);

}  // namespace cosym
