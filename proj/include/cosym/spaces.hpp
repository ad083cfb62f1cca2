#pragma once

// Model complex space forms M^n(rho) (Fubini-Study, Bergman-ball, flat) and the
// product cosymplectic structure on M^n(rho) x R.
//
// Real chart coordinates are ordered (x1, y1, ..., xn, yn, t) and the complex
// structure is the constant J(d/dx_k) = d/dy_k. The metric is scaled by 4/|rho|
// so that the holomorphic sectional curvature equals rho.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cosym/error.hpp"
#include "cosym/jet.hpp"
#include "cosym/linalg.hpp"

namespace cosym {

enum class Family { CP, CH, C };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct SpaceFormSpec {
    Family family = Family::C;
    int n = 2;
    double rho = 0.0;

    /// Throws DomainError unless sign(rho) matches the chart family and 1 <= n <= 4.
    void validate() const;

    int real_dim() const { return 2 * n; }
    int dim() const { return 2 * n + 1; }
    /// E.g. "CH2(-4)".
    std::string label() const;

    /// Largest |z| used when sampling test points.
    double sampling_radius() const;

    static SpaceFormSpec make(Family family, int n, double rho);
    friend bool operator==(const SpaceFormSpec&, const SpaceFormSpec&) = default;
};

struct ProductPoint {
    Vec<double> m;  // 2n chart coordinates of M
    double t = 0.0;

    ProductPoint() = default;
    ProductPoint(Vec<double> m_coords, double height) : m(m_coords), t(height) {}
    static ProductPoint from_coords(const Vec<double>& x);
    Vec<double> coords() const;
    friend bool operator==(const ProductPoint& a, const ProductPoint& b);
};

/// A tangent vector of N = M x R at a base point; the last component is the xi-coefficient.
class TangentVec {
public:
    TangentVec(ProductPoint base, Vec<double> components);
    static TangentVec zero(const ProductPoint& base);

    const ProductPoint& base() const { return base_; }
    const Vec<double>& components() const { return c_; }
    double operator[](int i) const { return c_[i]; }
    int size() const { return c_.size(); }

    TangentVec& operator+=(const TangentVec& o);
    TangentVec& operator-=(const TangentVec& o);
    TangentVec& operator*=(double s);
    friend TangentVec operator+(TangentVec a, const TangentVec& b) { return a += b; }
    friend TangentVec operator-(TangentVec a, const TangentVec& b) { return a -= b; }
    friend TangentVec operator*(TangentVec a, double s) { return a *= s; }
    friend TangentVec operator*(double s, TangentVec a) { return a *= s; }

private:
    ProductPoint base_;
    Vec<double> c_;
};

struct CosymplecticFrame {
    Mat<double> g;
    Mat<double> phi;
    Vec<double> xi;
    Vec<double> eta;
};

/// Levi-Civita data at one point. Index layout: gamma[(k*d + i)*d + j] = Gamma^k_ij,
/// dgamma[((a*d + k)*d + i)*d + j] = d_a Gamma^k_ij.
struct Connection {
    int dim = 0;
    int order = 0;  // 1: Gamma only, 2: also dGamma
    Mat<double> g, ginv;
    std::vector<double> dg;
    std::vector<double> gamma;
    std::vector<double> dgamma;

    double christoffel(int k, int i, int j) const { return gamma[(k * dim + i) * dim + j]; }
    double dchristoffel(int a, int k, int i, int j) const { return dgamma[((a * dim + k) * dim + i) * dim + j]; }
    /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
    Vec<double> apply(const Vec<double>& x, const Vec<double>& y) const;
    /// (d_Z Gamma)(X, Y)^k = Z^a d_a Gamma^k_ij X^i Y^j.
    Vec<double> apply_derivative(const Vec<double>& z, const Vec<double>& x, const Vec<double>& y) const;
};

class ProductSpace {
public:
    explicit ProductSpace(SpaceFormSpec spec);

    /// Adds amplitude * y1 to g(x1, x1). The result is no longer Kaehler; used
    /// only as a negative control for the parallelism residuals.
    static ProductSpace with_metric_perturbation(SpaceFormSpec spec, double amplitude);

    const SpaceFormSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim(); }
    int real_dim() const { return spec_.real_dim(); }
    double rho() const { return spec_.rho; }

    bool in_domain(const Vec<double>& x) const;
    void require_domain(const Vec<double>& x) const;

    /// Metric components at chart coordinates x (2n+1 entries), any scalar type.
    template <class S>
    Mat<S> metric(const Vec<S>& x) const;

    Mat<double> metric_at(const ProductPoint& p) const;
    CosymplecticFrame cosymplectic_frame_at(const ProductPoint& p) const;
    Connection connection_at(const Vec<double>& x, int derivative_order) const;
    Connection christoffel_at(const ProductPoint& p) const { return connection_at(p.coords(), 1); }

    Vec<double> phi(const Vec<double>& u) const;
    double eta(const Vec<double>& u) const { return u[dim() - 1]; }
    Vec<double> xi() const { return Vec<double>::unit(dim(), dim() - 1); }
    Mat<double> phi_matrix() const;

    /// R(U,V)W from Christoffel symbols and their exact derivatives.
    Vec<double> curvature_numeric(const Vec<double>& x, const Vec<double>& u, const Vec<double>& v,
                                  const Vec<double>& w) const;
    Vec<double> curvature_numeric(const Connection& c, const Vec<double>& u, const Vec<double>& v,
                                  const Vec<double>& w) const;
    /// R(U,V)W from the closed-form cosymplectic space form curvature tensor.
    Vec<double> curvature_model(const Mat<double>& g, const Vec<double>& u, const Vec<double>& v,
                                const Vec<double>& w) const;
    Vec<double> curvature_model(const Vec<double>& x, const Vec<double>& u, const Vec<double>& v,
                                const Vec<double>& w) const;

    TangentVec curvature_numeric(const ProductPoint& p, const TangentVec& u, const TangentVec& v,
                                 const TangentVec& w) const;
    TangentVec curvature_model(const ProductPoint& p, const TangentVec& u, const TangentVec& v,
                               const TangentVec& w) const;

private:
    ProductSpace(SpaceFormSpec spec, double perturbation);

    SpaceFormSpec spec_;
    double perturbation_ = 0.0;
};

struct ParallelismResiduals {
    double nabla_phi = 0.0;
    double nabla_xi = 0.0;
    int argmax_phi = -1;  // index into the point list
};

/// max over points and orthonormal frame pairs of |(nabla_{e_a} phi) e_b| and |nabla_{e_a} xi|.
ParallelismResiduals parallelism_residuals(const ProductSpace& space, std::span<const Vec<double>> points);

/// Orthonormal frame (rows) from Gram-Schmidt of the chart axes.
std::vector<Vec<double>> orthonormal_axes(const Mat<double>& g);

double norm(const Mat<double>& g, const Vec<double>& x);

/// Seeded random test points inside the sampling radius; t uniform in [-1, 1].
std::vector<Vec<double>> sample_points(const SpaceFormSpec& spec, int count, std::mt19937_64& rng);
/// Random g-unit vector; horizontal_only forces eta(U) = 0.
Vec<double> sample_unit_vector(const Mat<double>& g, std::mt19937_64& rng, bool horizontal_only = false);

// ---------------------------------------------------------------------------

template <class S>
Mat<S> ProductSpace::metric(const Vec<S>& x) const {
    const int n = spec_.n;
    const int d = dim();
    Mat<S> g(d);
    if (spec_.family == Family::C) {
        for (int i = 0; i < 2 * n; ++i) g(i, i) = S(1.0);
    } else {
        const double sign = spec_.family == Family::CP ? 1.0 : -1.0;
        const double scale = 4.0 / std::abs(spec_.rho);
        S r2(0.0);
        for (int i = 0; i < 2 * n; ++i) r2 += x[i] * x[i];
        const S w = S(1.0) + r2 * sign;
        const S inv_w2 = S(scale) / (w * w);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const S re = x[2 * j] * x[2 * k] + x[2 * j + 1] * x[2 * k + 1];
                const S im = x[2 * j] * x[2 * k + 1] - x[2 * j + 1] * x[2 * k];
                S a = re * (-sign);
                if (j == k) a += w;
                a = a * inv_w2;
                const S b = im * inv_w2 * (-sign);
                g(2 * j, 2 * k) = a;
                g(2 * j + 1, 2 * k + 1) = a;
                g(2 * j, 2 * k + 1) = b;
                g(2 * j + 1, 2 * k) = -b;
            }
    }
    if (perturbation_ != 0.0) g(0, 0) += x[1] * perturbation_;
    g(d - 1, d - 1) = S(1.0);
    return g;
}

}  // namespace cosym
