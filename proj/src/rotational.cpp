#include "cosym/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

namespace cosym {

namespace {

constexpr double kPi = std::numbers::pi;

double curvature_of_slice(const ProductSpace& space) { return space.rho() / 4.0; }

double slice_cs(double c, double r) {
    if (c > 0.0) return std::cos(std::sqrt(c) * r);
    if (c < 0.0) return std::cosh(std::sqrt(-c) * r);
    return 1.0;
}

/// Jet of the rotation surface in (s, theta * sn(r)) around a profile point, in a
/// chart centred there. alpha_ss only matters for order 3.
MapJet local_profile_jet(const ProductSpace& space, double r, double h, double alpha, double a_s, double a_ss,
                         int order) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const Jet3 s = Jet3::variable_u(0.0), th = Jet3::variable_v(0.0);
    const double r3 = -ca * a_s * a_s - sa * a_ss;
    const double h3 = -sa * a_s * a_s + ca * a_ss;
    const Jet3 s2 = s * s, s3 = s2 * s;
    const Jet3 rr = r + ca * s - (0.5 * sa * a_s) * s2 + (r3 / 6.0) * s3;
    const Jet3 hh = h + sa * s + (0.5 * ca * a_s) * s2 + (h3 / 6.0) * s3;
    const double sn0 = slice_sn(curvature_of_slice(space), r);
    const SliceCenter ctr{r, 0.0, h};
    return MapJet::from_components(slice_coords(space.spec(), rr, th / sn0, hh, &ctr), order);
}

/// Unit normal of the profile inside the slice at a centred chart origin.
Vec<double> profile_normal(const SurfaceGeometry& geo, double alpha) {
    const int d = geo.x.size();
    Vec<double> radial = Vec<double>::unit(d, 0);
    radial /= norm(geo.g, radial);
    return -std::sin(alpha) * radial + std::cos(alpha) * Vec<double>::unit(d, d - 1);
}

struct State {
    double r, h, alpha, s;
};

State axpy(const State& y, double a, const State& k) {
    return {y.r + a * k.r, y.h + a * k.h, y.alpha + a * k.alpha, y.s + a * k.s};
}

struct Profiler {
    const ProductSpace& space;
    double H;
    double c;

    State rhs(const State& y, double* a_s_out = nullptr) const {
        const double a_s = solve_turning_rate(space, y.r, y.h, y.alpha, H);
        if (a_s_out) *a_s_out = a_s;
        const double sn = slice_sn(c, y.r);
        return {sn * std::cos(y.alpha), sn * std::sin(y.alpha), sn * a_s, sn};
    }

    State step(const State& y, double dw, const State& k1) const {
        const State k2 = rhs(axpy(y, 0.5 * dw, k1));
        const State k3 = rhs(axpy(y, 0.5 * dw, k2));
        const State k4 = rhs(axpy(y, dw, k3));
        const double w = dw / 6.0;
        return {y.r + w * (k1.r + 2 * k2.r + 2 * k3.r + k4.r), y.h + w * (k1.h + 2 * k2.h + 2 * k3.h + k4.h),
                y.alpha + w * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha),
                y.s + w * (k1.s + 2 * k2.s + 2 * k3.s + k4.s)};
    }
};

double hermite(double p0, double m0, double p1, double m1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * h * m1;
}

}  // namespace

double slice_chart_radius(const SpaceFormSpec& spec, double r) {
    const double c = spec.rho / 4.0;
    if (c > 0.0) {
        if (std::sqrt(c) * r >= kPi / 2.0) throw DomainError("slice radius beyond the affine chart");
        return std::tan(std::sqrt(c) * r);
    }
    if (c < 0.0) return std::tanh(std::sqrt(-c) * r);
    return r;
}

ProductPoint real_slice_embed(const SpaceFormSpec& spec, double r, double theta, double t) {
    if (r < 0.0) throw DomainError("geodesic radius must be non-negative");
    if (spec.n < 2) throw DomainError("the real slice surface needs complex dimension >= 2");
    const double x = slice_chart_radius(spec, r);
    Vec<double> m(spec.real_dim());
    m[0] = x * std::cos(theta);
    m[2] = x * std::sin(theta);
    ProductPoint p(m, t);
    ProductSpace(spec).require_domain(p.coords());
    return p;
}

double measured_mean_curvature(const ProductSpace& space, double r, double h, double alpha, double alpha_s) {
    const SurfaceGeometry geo = geometry_from_jet(space, local_profile_jet(space, r, h, alpha, alpha_s, 0.0, 2), false);
    return geo.inner(geo.H, profile_normal(geo, alpha));
}

double solve_turning_rate(const ProductSpace& space, double r, double h, double alpha, double H) {
    // The measured curvature is affine in alpha_s; a secant step is exact up to rounding.
    const double h0 = measured_mean_curvature(space, r, h, alpha, 0.0);
    const double h1 = measured_mean_curvature(space, r, h, alpha, 1.0);
    const double slope = h1 - h0;
    if (!(std::abs(slope) > 0.0)) throw DegenerateError("mean curvature does not depend on the turning rate");
    double a = (H - h0) / slope;
    a += (H - measured_mean_curvature(space, r, h, alpha, a)) / slope;
    return a;
}

double solve_turning_acceleration(const ProductSpace& space, double r, double h, double alpha, double alpha_s) {
    auto f = [&](double b) {
        const SurfaceGeometry geo =
            geometry_from_jet(space, local_profile_jet(space, r, h, alpha, alpha_s, b, 3), true);
        return geo.inner(geo.nabla_u_H, geo.H);
    };
    const double f0 = f(0.0), f1 = f(1.0);
    const double slope = f1 - f0;
    if (!(std::abs(slope) > 0.0)) throw DegenerateError("mean curvature derivative is insensitive to alpha''");
    double b = -f0 / slope;
    b -= f(b) / slope;
    return b;
}

namespace {

ProfileRun integrate_profile_unchecked(const ProductSpace& space, double H, double k, const ShootControls& ctl) {
    const double c = curvature_of_slice(space);
    const Profiler pr{space, H, c};
    const double r_max = c > 0.0 ? kPi / std::sqrt(c) - ctl.eps
                                 : (c < 0.0 ? ctl.r_max_scale / std::sqrt(-c) : ctl.r_max_scale);
    ProfileRun run;
    run.profile.dw = ctl.dw;
    State y{ctl.eps, 0.0, k * ctl.eps, ctl.eps};
    double w = 0.0;
    const long max_steps = static_cast<long>(ctl.s_max / (ctl.eps * ctl.dw)) + 1;
    bool past_equator = false;
    for (long n = 0; n < max_steps; ++n) {
        double a_s = 0.0;
        const State k1 = pr.rhs(y, &a_s);
        run.profile.samples.push_back(
            {w, y.s, y.r, y.h, y.alpha, a_s, measured_mean_curvature(space, y.r, y.h, y.alpha, a_s)});
        past_equator = past_equator || y.alpha > kPi / 2.0;
        const State next = pr.step(y, ctl.dw, k1);
        if (!std::isfinite(next.r) || !std::isfinite(next.alpha)) {
            run.verdict = "no sphere: profile integration produced non-finite values";
            return run;
        }
        if (past_equator && next.r < ctl.eps) {
            double a_next = 0.0;
            const State k2 = pr.rhs(next, &a_next);
            double lo = 0.0, hi = 1.0;
            auto r_at = [&](double t) { return hermite(y.r, k1.r, next.r, k2.r, ctl.dw, t); };
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (r_at(mid) > ctl.eps ? lo : hi) = mid;
            }
            const double t = 0.5 * (lo + hi);
            run.alpha_cross = hermite(y.alpha, k1.alpha, next.alpha, k2.alpha, ctl.dw, t);
            run.s_cross = hermite(y.s, k1.s, next.s, k2.s, ctl.dw, t);
            run.h_cross = hermite(y.h, k1.h, next.h, k2.h, ctl.dw, t);
            run.profile.samples.push_back({w + ctl.dw, next.s, next.r, next.h, next.alpha, a_next,
                                           measured_mean_curvature(space, next.r, next.h, next.alpha, a_next)});
            run.closed = true;
            return run;
        }
        if (next.r > r_max || next.s > ctl.s_max || next.r <= 0.0) {
            run.verdict = "no sphere: profile did not return to the rotation axis";
            return run;
        }
        y = next;
        w += ctl.dw;
    }
    run.verdict = "no sphere: step limit reached";
    return run;
}

}  // namespace

ProfileRun integrate_profile(const ProductSpace& space, double H, double k, const ShootControls& ctl) {
    try {
        return integrate_profile_unchecked(space, H, k, ctl);
    } catch (const DomainError& e) {
        ProfileRun run;
        (void)e;
        run.verdict = "no sphere: profile left the chart domain";
        return run;
    } catch (const DegenerateError& e) {
        ProfileRun run;
        run.verdict = std::string("no sphere: degenerate profile (") + e.what() + ")";
        return run;
    }
}

ShootResult shoot_sphere(const ProductSpace& space, double H_target, const ShootControls& ctl) {
    if (space.spec().n != 2) throw DomainError("rotational spheres are built in complex dimension 2");
    if (!(H_target > 0.0)) throw DomainError("H_target must be positive");
    ShootResult res;
    res.H_target = H_target;
    auto defect = [&](const ProfileRun& run, double k) { return run.alpha_cross - (kPi - k * ctl.eps); };

    // The exit slope is fixed by smoothness at the pole: the solved turning rate
    // at the seed must equal the slope used to build the seed.
    double kb = H_target;
    for (res.iterations = 0; res.iterations < ctl.max_iterations; ++res.iterations) {
        const double next = solve_turning_rate(space, ctl.eps, 0.0, kb * ctl.eps, H_target);
        const bool done = std::abs(next - kb) <= 1e-8 * std::max(1.0, std::abs(kb));
        kb = next;
        if (done) break;
    }
    // re-run at the best slope so the stored profile matches it exactly
    ProfileRun fin = integrate_profile(space, H_target, kb, ctl);
    res.exit_slope = kb;
    res.closed = fin.closed;
    if (!fin.closed) {
        res.verdict = fin.verdict;
        res.profile = std::move(fin.profile);
        return res;
    }
    res.closure_defect = defect(fin, kb);
    res.total_length = fin.s_cross + ctl.eps;
    res.top_height = fin.h_cross;
    res.pole_smoothness_defect = fin.profile.samples.empty() ? 0.0 : std::abs(fin.profile.samples[0].alpha_s - kb);
    res.converged = std::abs(res.closure_defect) < ctl.closure_tol;
    res.verdict = res.converged ? "converged" : "closure defect above tolerance";
    res.profile = std::move(fin.profile);
    return res;
}

RotationalImmersion::RotationalImmersion(ProductSpace space, ShootResult sphere, double mu_min)
    : space_(std::move(space)), sphere_(std::move(sphere)) {
    if (!sphere_.converged) throw PreconditionError("sphere immersion needs a converged shooting result");
    const auto& smp = sphere_.profile.samples;
    band_first_ = -1;
    for (int k = 0; k < static_cast<int>(smp.size()); ++k)
        if (std::sin(smp[k].alpha) >= mu_min) {
            if (band_first_ < 0) band_first_ = k;
            band_last_ = k;
        }
    if (band_first_ < 0 || band_last_ - band_first_ < 20) throw DegenerateError("profile band too short");
    rect_ = {smp[band_first_].w, smp[band_last_].w, 0.0, 2.0 * kPi};
}

Grid RotationalImmersion::default_grid(int nw, int ntheta) const {
    const int span = band_last_ - band_first_;
    const int stride = std::max(1, span / (nw - 1));
    const int nodes = std::min(nw, span / stride + 1);
    const double w0 = sphere_.profile.samples[band_first_].w;
    Grid g;
    g.rect = {w0, w0 + (nodes - 1) * stride * sphere_.profile.dw, 0.0, 2.0 * kPi};
    g.nu = nodes;
    g.nv = ntheta;
    return g;
}

ProfileSample RotationalImmersion::state_at(double w) const {
    const auto& smp = sphere_.profile.samples;
    const double dw = sphere_.profile.dw;
    const int k = std::clamp(static_cast<int>(std::lround((w - smp[0].w) / dw)), 0, static_cast<int>(smp.size()) - 1);
    const double h = w - smp[k].w;
    if (std::abs(h) < 1e-12 * dw) return smp[k];
    const Profiler pr{space_, sphere_.H_target, curvature_of_slice(space_)};
    const State y{smp[k].r, smp[k].h, smp[k].alpha, smp[k].s};
    const State n = pr.step(y, h, pr.rhs(y));
    ProfileSample out{w, n.s, n.r, n.h, n.alpha, 0.0, sphere_.H_target};
    out.alpha_s = solve_turning_rate(space_, n.r, n.h, n.alpha, sphere_.H_target);
    return out;
}

MapJet RotationalImmersion::jet(double u, double v, int order) const {
    const ProfileSample st = state_at(u);
    const double c = curvature_of_slice(space_);
    const double sn0 = slice_sn(c, st.r), cs0 = slice_cs(c, st.r);
    const double a_w = sn0 * st.alpha_s;
    double a_ww = 0.0;
    if (order >= 3) {
        const double b = solve_turning_acceleration(space_, st.r, st.h, st.alpha, st.alpha_s);
        a_ww = sn0 * (b * sn0 + st.alpha_s * cs0 * std::cos(st.alpha));
    }
    const Jet3 dw = Jet3::variable_u(0.0);
    const Jet3 alpha = st.alpha + a_w * dw + (0.5 * a_ww) * (dw * dw);
    Jet3 r(st.r), h(st.h);
    for (int it = 0; it < 4; ++it) {
        const Jet3 sn = slice_sn(c, r);
        const Jet3 rn = st.r + (sn * cos(alpha)).integrate_u();
        const Jet3 hn = st.h + (sn * sin(alpha)).integrate_u();
        r = rn;
        h = hn;
    }
    const SliceCenter ctr{st.r, v, st.h};
    return MapJet::from_components(slice_coords(space_.spec(), r, Jet3::variable_v(v), h, &ctr), order);
}

double LemmaReport::value(const std::string& name) const {
    for (const auto& r : residuals)
        if (r.name == name) return r.value;
    throw ConfigError("no lemma residual named '" + name + "'");
}

namespace {

struct NodeData {
    bool ok = false;
    double mu = 0.0, nu = 0.0, lam1 = 0.0, lam2 = 0.0, off = 0.0, Hn = 0.0, A2 = 0.0, E = 0.0;
    std::array<double, 2> c1{}, c2{};  // coordinate coefficients of the adapted frame
    double sigma_diag = 0.0, e2e2 = 0.0, a_phi = 0.0, mu_nu = 0.0;
    double jet_e2_nu = 0.0, jet_e1_nu = 0.0;
};

std::array<double, 2> coordinate_coeffs(const SurfaceGeometry& geo, const Vec<double>& e) {
    const double a = geo.inner(e, geo.fu), b = geo.inner(e, geo.fv);
    const double det = geo.E * geo.G - geo.F * geo.F;
    return {(geo.G * a - geo.F * b) / det, (geo.E * b - geo.F * a) / det};
}

double frob(const Mat<double>& m) {
    return std::sqrt(m(0, 0) * m(0, 0) + 2.0 * m(0, 1) * m(0, 1) + m(1, 1) * m(1, 1));
}

}  // namespace

LemmaReport lemma_identity_suite(const ProductSpace& space, const RotationalImmersion& sphere, const Grid& grid,
                                 Exec exec) {
    const double rho = space.rho();
    const auto nodes = sweep<NodeData>(
        grid.size(),
        [&](int k) {
            const int i = k / grid.nv, j = k % grid.nv;
            const SurfaceGeometry geo = geometry_at(space, sphere, grid.u(i), grid.v(j), true);
            const AngleDecomposition ad = angle_decomposition(geo);
            NodeData n;
            n.ok = ad.mu_defined;
            n.mu = ad.mu;
            n.nu = ad.nu;
            n.lam1 = ad.lambda1;
            n.lam2 = ad.lambda2;
            n.off = ad.off_diagonal;
            n.Hn = ad.H_norm;
            n.E = geo.E;
            n.A2 = geo.inner(geo.sigma[0], geo.sigma[0]) + 2.0 * geo.inner(geo.sigma[1], geo.sigma[1]) +
                   geo.inner(geo.sigma[2], geo.sigma[2]);
            n.c1 = coordinate_coeffs(geo, ad.e1);
            n.c2 = coordinate_coeffs(geo, ad.e2);
            const double x1 = geo.inner(ad.e1, geo.e1), x2 = geo.inner(ad.e1, geo.e2);
            const double y1 = geo.inner(ad.e2, geo.e1), y2 = geo.inner(ad.e2, geo.e2);
            const Vec<double> unitH = geo.H / geo.H_norm;
            n.sigma_diag = std::max(norm(geo.g, geo.sigma_frame(x1, x2, x1, x2) - ad.lambda1 * unitH),
                                    norm(geo.g, geo.sigma_frame(y1, y2, y1, y2) - ad.lambda2 * unitH));
            n.e2e2 = geo.has_xi_frame ? norm(geo.g, geo.nabla_e2_e2) : 0.0;
            n.a_phi = std::max(frob(shape_operator(geo, space.phi(ad.e1))), frob(shape_operator(geo, space.phi(ad.e2))));
            n.mu_nu = std::abs(ad.mu * ad.mu + ad.nu * ad.nu - 1.0);
            n.jet_e1_nu = geo.d_nu[0];
            n.jet_e2_nu = geo.d_nu[1];
            return n;
        },
        exec);

    std::vector<std::string> names = {"e1_mu", "e1_nu",       "e2_mu", "e2_nu",  "eq_ah",
                                      "d1",    "d2",          "sigma_diag", "nabla_e2_e2", "a_phi",
                                      "mu_nu", "e2_nu_jet_vs_stencil"};
    LemmaReport rep;
    rep.mu_min = 1.0;
    for (const auto& n : names) rep.residuals.push_back({n, 0.0, 0.0, 0.0});
    std::vector<bool> seen(names.size(), false);
    auto bump = [&](int idx, double val, int i, int j) {
        auto& r = rep.residuals[idx];
        if (!seen[idx] || val > r.value || std::isnan(val)) {
            seen[idx] = true;
            r.value = val;
            r.u = grid.u(i);
            r.v = grid.v(j);
        }
    };
    const double hu = grid.hu(), hv = grid.hv();
    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            if (i < 2 || j < 2 || i >= grid.nu - 2 || j >= grid.nv - 2) {
                ++rep.excluded_nodes;
                continue;
            }
            const NodeData& n = nodes[grid.index(i, j)];
            if (!n.ok) {
                ++rep.excluded_nodes;
                continue;
            }
            ++rep.evaluated_nodes;
            rep.mu_min = std::min(rep.mu_min, n.mu);
            auto at = [&](int di, int dj) -> const NodeData& { return nodes[grid.index(i + di, j + dj)]; };
            auto dwv = [&](auto field) {
                const double fw = stencil_d1(field(at(-2, 0)), field(at(-1, 0)), field(at(1, 0)), field(at(2, 0)), hu);
                const double fv = stencil_d1(field(at(0, -2)), field(at(0, -1)), field(at(0, 1)), field(at(0, 2)), hv);
                return std::array<double, 2>{fw, fv};
            };
            auto lap = [&](auto field) {
                const double fww = stencil_d2(field(at(-2, 0)), field(at(-1, 0)), field(at(0, 0)), field(at(1, 0)),
                                              field(at(2, 0)), hu);
                const double fvv = stencil_d2(field(at(0, -2)), field(at(0, -1)), field(at(0, 0)), field(at(0, 1)),
                                              field(at(0, 2)), hv);
                return (fww + fvv) / n.E;
            };
            const auto dmu = dwv([](const NodeData& m) { return m.mu; });
            const auto dnu = dwv([](const NodeData& m) { return m.nu; });
            const double e1mu = n.c1[0] * dmu[0] + n.c1[1] * dmu[1];
            const double e2mu = n.c2[0] * dmu[0] + n.c2[1] * dmu[1];
            const double e1nu = n.c1[0] * dnu[0] + n.c1[1] * dnu[1];
            const double e2nu = n.c2[0] * dnu[0] + n.c2[1] * dnu[1];
            bump(0, std::abs(e1mu), i, j);
            bump(1, std::abs(e1nu), i, j);
            bump(2, std::abs(e2mu - n.lam2 * n.nu), i, j);
            bump(3, std::abs(e2nu + n.lam2 * n.mu), i, j);
            const double q = rho * n.mu * n.mu / (16.0 * n.Hn * n.Hn);
            bump(4, std::max({std::abs(n.lam1 - n.Hn * (1.0 - q)), std::abs(n.lam2 - n.Hn * (1.0 + q)), std::abs(n.off)}),
                 i, j);
            const double lap_nu2 = lap([](const NodeData& m) { return m.nu * m.nu; });
            bump(5, std::abs(lap_nu2 - 2.0 * n.lam2 * n.lam2 * (1.0 - 3.0 * n.nu * n.nu)), i, j);
            const double lap_a2 = lap([](const NodeData& m) { return m.A2; });
            const double d2 = rho * rho / (32.0 * n.Hn * n.Hn) * n.lam2 * n.lam2 * n.mu * n.mu * (5.0 * n.nu * n.nu - 1.0);
            bump(6, std::abs(lap_a2 - d2), i, j);
            bump(7, n.sigma_diag, i, j);
            bump(8, n.e2e2, i, j);
            bump(9, n.a_phi, i, j);
            bump(10, n.mu_nu, i, j);
            bump(11, std::abs(n.jet_e2_nu - e2nu), i, j);
        }
    return rep;
}

double mirror_defect(const ShootResult& sphere) {
    const auto& smp = sphere.profile.samples;
    if (smp.size() < 4) return 0.0;
    const int last = static_cast<int>(smp.size()) - 2;  // the final sample lies past the axis crossing
    const double s_lo = smp.front().s, s_hi = smp[last].s;
    const double S = sphere.total_length;
    auto h_at = [&](double s) {
        auto it = std::lower_bound(smp.begin(), smp.begin() + last + 1, s,
                                   [](const ProfileSample& p, double x) { return p.s < x; });
        const int k = std::clamp(static_cast<int>(it - smp.begin()), 1, last);
        const ProfileSample &a = smp[k - 1], &b = smp[k];
        const double span = b.s - a.s;
        return hermite(a.h, std::sin(a.alpha), b.h, std::sin(b.alpha), span, (s - a.s) / span);
    };
    double m = 0.0;
    for (int k = 0; k <= last; ++k) {
        const double sm = S - smp[k].s;
        if (sm < s_lo || sm > s_hi) continue;
        m = std::max(m, std::abs(h_at(sm) - (sphere.top_height - smp[k].h)));
    }
    return m;
}

void write_profile_csv(std::ostream& os, const ShootResult& sphere) {
    os << "s,r,h,alpha,H_measured\n" << std::setprecision(17);
    for (const auto& p : sphere.profile.samples)
        os << p.s << ',' << p.r << ',' << p.h << ',' << p.alpha << ',' << p.H_measured << '\n';
}

}  // namespace cosym
