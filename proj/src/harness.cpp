#include "cosym/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <set>

#include "cosym/qforms.hpp"

namespace cosym {

namespace {

struct Context;
struct CheckDef;
using Runner = std::function<void(Context&, const CheckDef&, std::vector<CheckResult>&)>;

struct CheckDef {
    std::string name;
    double tolerance;
    Runner run;
};

ordered_json require(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError("missing key '" + where + key + "'");
    return j.at(key);
}

double number(const ordered_json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("key '" + key + "' must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ConfigError("key '" + key + "' must be finite");
    return x;
}

void reject_unknown(const ordered_json& j, const std::set<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown key '" + where + it.key() + "'");
}

Comparison comparison_from_string(const std::string& s, const std::string& key) {
    if (s == "below" || s == "<") return Comparison::Below;
    if (s == "above" || s == ">") return Comparison::Above;
    throw ConfigError("unknown comparison '" + s + "' in '" + key + "'");
}

const char* comparison_name(Comparison c) { return c == Comparison::Below ? "below" : "above"; }

Grid make_grid(const ParamRect& rect, int nu, int nv) {
    Grid g;
    g.rect = rect;
    g.nu = nu;
    g.nv = nv;
    return g;
}

// ---------------------------------------------------------------------------
// lazily built subjects shared by the checks of one scenario

struct Context {
    const Scenario& sc;
    const RunOptions& opt;
    ProductSpace space;
    ordered_json details = ordered_json::object();

    std::shared_ptr<const Immersion> surface;
    std::optional<ShootResult> shot;
    std::shared_ptr<RotationalImmersion> sphere;
    std::optional<Grid> grid_cache;
    std::optional<QGrid> qgrid;
    std::optional<LemmaReport> lemma;

    struct Sample {
        Vec<double> x, u, v, w, h;  // h: horizontal unit vector
    };
    std::vector<Sample> samples;

    Context(const Scenario& s, const RunOptions& o) : sc(s), opt(o), space(s.space) {}

    double cylinder_kappa() const {
        return sc.kappa_from_torsion ? proposition_kappa(sc.space.rho, sc.tau) : sc.kappa;
    }

    const Immersion& immersion() {
        if (sc.subject == "sphere") return sphere_immersion();
        if (!surface) {
            if (sc.subject == "cylinder") {
                CylinderOptions co;
                co.length = sc.length;
                co.height = sc.height;
                const CurvatureLaw law{cylinder_kappa(), sc.kappa_amp, sc.kappa_freq};
                auto cyl = make_cylinder(space, law, sc.tau, co);
                if (cyl->curve().truncated) details["curve_warning"] = cyl->curve().warning;
                details["kappa"] = law.base;
                details["curve_length"] = cyl->curve().length();
                surface = cyl;
            } else {
                surface = make_family(sc.family, sc.space, sc.half_width);
            }
        }
        return *surface;
    }

    const ShootResult& shoot() {
        if (!shot) {
            shot = shoot_sphere(space, sc.H);
            details["shooting_verdict"] = shot->verdict;
            details["exit_slope"] = shot->exit_slope;
            details["profile_length"] = shot->total_length;
        }
        return *shot;
    }

    RotationalImmersion& sphere_immersion() {
        if (!sphere) {
            const ShootResult& s = shoot();
            if (!s.converged) throw DomainError(s.verdict);
            sphere = std::make_shared<RotationalImmersion>(space, s);
        }
        return *sphere;
    }

    const Grid& grid() {
        if (!grid_cache) {
            if (sc.subject == "sphere") {
                grid_cache = sphere_immersion().default_grid(sc.grid_nu > 0 ? sc.grid_nu : 401,
                                                             sc.grid_nv > 0 ? sc.grid_nv : 24);
            } else {
                const Immersion& imm = immersion();
                grid_cache = make_grid(imm.domain(), sc.grid_nu > 0 ? sc.grid_nu : 64, sc.grid_nv > 0 ? sc.grid_nv : 64);
            }
        }
        return *grid_cache;
    }

    const QGrid& q() {
        if (!qgrid) {
            const Immersion& imm = immersion();
            qgrid = q_grid(space, imm, grid(), opt.exec);
        }
        return *qgrid;
    }

    const LemmaReport& lemma_report() {
        if (!lemma) {
            RotationalImmersion& imm = sphere_immersion();
            lemma = lemma_identity_suite(space, imm, grid(), opt.exec);
            details["lemma_evaluated_nodes"] = lemma->evaluated_nodes;
            details["lemma_excluded_nodes"] = lemma->excluded_nodes;
            details["lemma_mu_min"] = lemma->mu_min;
            details["norm_convention"] = lemma->norm_convention;
        }
        return *lemma;
    }

    const std::vector<Sample>& sample() {
        if (samples.empty()) {
            std::mt19937_64 rng(sc.seed);
            for (const auto& x : sample_points(sc.space, sc.samples, rng)) {
                const Mat<double> g = space.metric(x);
                Sample s;
                s.x = x;
                s.u = sample_unit_vector(g, rng);
                s.v = sample_unit_vector(g, rng);
                s.w = sample_unit_vector(g, rng);
                s.h = sample_unit_vector(g, rng, true);
                samples.push_back(std::move(s));
            }
        }
        return samples;
    }
};

CheckResult make_result(const CheckDef& def, const Scenario& sc, double value) {
    CheckResult r;
    r.name = def.name;
    r.value = value;
    r.tolerance = def.tolerance;
    r.comparison = Comparison::Below;
    for (const auto& c : sc.checks)
        if (c.name == def.name) {
            if (c.tolerance) r.tolerance = *c.tolerance;
            if (c.comparison) r.comparison = *c.comparison;
        }
    if (auto it = sc.tolerances.find(def.name); it != sc.tolerances.end()) r.tolerance = it->second;
    r.pass = std::isfinite(value) &&
             (r.comparison == Comparison::Below ? value < r.tolerance : value > r.tolerance);
    return r;
}

CheckResult grid_result(const CheckDef& def, const Scenario& sc, const GridResidual& g) {
    CheckResult r = make_result(def, sc, g.value);
    if (g.i >= 0) r.argmax = std::make_pair(g.u, g.v);
    return r;
}

/// Max over the random sample of a per-sample functional, evaluated in parallel.
CheckResult sample_max(Context& ctx, const CheckDef& def, const std::function<double(const Context::Sample&)>& fn) {
    const auto& smp = ctx.sample();
    const std::vector<double> vals =
        sweep<double>(static_cast<int>(smp.size()), [&](int k) { return fn(smp[k]); }, ctx.opt.exec);
    const ArgMax a = arg_max(vals);
    CheckResult r = make_result(def, ctx.sc, a.value);
    if (a.index >= 0) r.argmax_sample = a.index;
    return r;
}

Vec<double> sub(const Vec<double>& a, const Vec<double>& b) { return a - b; }

// ---------------------------------------------------------------------------
// registry

CheckDef def(std::string name, double tol, Runner run) { return {std::move(name), tol, std::move(run)}; }

std::vector<CheckDef> space_checks() {
    std::vector<CheckDef> v;
    v.push_back(def("curvature", 1e-6, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        out.push_back(sample_max(c, d, [&](const Context::Sample& s) {
            const Connection con = c.space.connection_at(s.x, 2);
            const Mat<double> g = c.space.metric(s.x);
            return norm(g, sub(c.space.curvature_numeric(con, s.u, s.v, s.w), c.space.curvature_model(g, s.u, s.v, s.w)));
        }));
    }));
    v.push_back(def("phi-sectional", 1e-6, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        out.push_back(sample_max(c, d, [&](const Context::Sample& s) {
            const Connection con = c.space.connection_at(s.x, 2);
            const Mat<double> g = c.space.metric(s.x);
            const Vec<double> ph = c.space.phi(s.h);
            return std::abs(bilinear(g, c.space.curvature_numeric(con, s.h, ph, ph), s.h) - c.space.rho());
        }));
    }));
    v.push_back(def("r-xi-xi", 1e-9, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        out.push_back(sample_max(c, d, [&](const Context::Sample& s) {
            const Connection con = c.space.connection_at(s.x, 2);
            const Vec<double> xi = c.space.xi();
            return norm(c.space.metric(s.x), c.space.curvature_numeric(con, s.u, xi, xi));
        }));
    }));
    v.push_back(def("phi-squared", 1e-9, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        out.push_back(sample_max(c, d, [&](const Context::Sample& s) {
            const Vec<double> lhs = c.space.phi(c.space.phi(s.u));
            const Vec<double> rhs = -1.0 * s.u + c.space.eta(s.u) * c.space.xi();
            return norm(c.space.metric(s.x), lhs - rhs);
        }));
    }));
    v.push_back(def("phi-metric", 1e-9, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        out.push_back(sample_max(c, d, [&](const Context::Sample& s) {
            const Mat<double> g = c.space.metric(s.x);
            const double lhs = bilinear(g, c.space.phi(s.u), c.space.phi(s.v));
            const double rhs = bilinear(g, s.u, s.v) - c.space.eta(s.u) * c.space.eta(s.v);
            return std::abs(lhs - rhs);
        }));
    }));
    auto parallel = [](bool phi) {
        return [phi](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
            std::vector<Vec<double>> pts;
            for (const auto& s : c.sample()) pts.push_back(s.x);
            const ParallelismResiduals pr = parallelism_residuals(c.space, pts);
            CheckResult r = make_result(d, c.sc, phi ? pr.nabla_phi : pr.nabla_xi);
            if (phi && pr.argmax_phi >= 0) r.argmax_sample = pr.argmax_phi;
            out.push_back(r);
        };
    };
    v.push_back(def("nabla-phi", 1e-9, parallel(true)));
    v.push_back(def("nabla-xi", 1e-9, parallel(false)));
    return v;
}

Runner grid_check(std::function<GridResidual(Context&)> fn) {
    return [fn](Context& c, const CheckDef& d, std::vector<CheckResult>& out) { out.push_back(grid_result(d, c.sc, fn(c))); };
}

Runner dbar_check(QForm which) {
    return [which](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const DbarResult r = dbar_residual(c.q(), which);
        CheckResult cr = grid_result(d, c.sc, r.at_normalized);
        c.details[d.name + "_raw"] = r.raw;
        out.push_back(cr);
    };
}

/// max over the grid of |Q(Z,Z)| / (lambda^2 max(|H|^4, 1)).
Runner q_zero_check(QForm which, bool normalized) {
    return [which, normalized](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const QGrid& qg = c.q();
        std::vector<double> vals;
        vals.reserve(qg.values.size());
        for (const auto& q : qg.values) {
            const double a = std::abs(which == QForm::Q ? q.q : q.qprime);
            vals.push_back(normalized ? a / (q.lambda2 * std::max(std::pow(q.H_norm, 4), 1.0)) : a);
        }
        const ArgMax m = arg_max(vals);
        GridResidual g;
        g.value = m.value;
        g.i = m.index / qg.grid.nv;
        g.j = m.index % qg.grid.nv;
        g.u = qg.grid.u(g.i);
        g.v = qg.grid.v(g.j);
        out.push_back(grid_result(d, c.sc, g));
    };
}

std::vector<CheckDef> surface_checks(bool cylinder) {
    std::vector<CheckDef> v;
    v.push_back(def("pmc", 1e-6, grid_check([](Context& c) {
                        return pmc_residual(c.space, c.immersion(), c.grid(), c.opt.exec);
                    })));
    v.push_back(def("qzero", 1e-8, q_zero_check(QForm::Q, false)));
    v.push_back(def("dbar-q", 1e-6, dbar_check(QForm::Q)));
    v.push_back(def("dbar-qprime", 1e-6, dbar_check(QForm::QPrime)));
    if (cylinder) {
        v.push_back(def("h-bounds", 1e-9, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
            const double rho = c.space.rho();
            if (rho >= 0.0) throw DomainError("|H| bounds are stated for rho < 0");
            const GridResidual h = grid_max(
                c.space, c.immersion(), c.grid(), [](const SurfaceGeometry& g) { return g.H_norm; }, false, c.opt.exec);
            const double lo = std::sqrt(-rho) / 4.0, hi = std::sqrt(-rho) / 2.0;
            const double viol = std::max({0.0, lo - h.value, h.value - hi});
            c.details["H_norm_max"] = h.value;
            out.push_back(make_result(d, c.sc, viol));
        }));
    }
    v.push_back(def("pseudo-umbilical", 1e-6, grid_check([](Context& c) {
                        return pseudo_umbilical_residual(c.space, c.immersion(), c.grid(), c.opt.exec);
                    })));
    v.push_back(def("anti-invariance", 1e-8, grid_check([](Context& c) {
                        return anti_invariance_residual(c.space, c.immersion(), c.grid(), c.opt.exec);
                    })));
    return v;
}

struct LemmaTolerance {
    const char* name;
    double tol;
};
constexpr LemmaTolerance kLemmaTolerances[] = {
    {"e1_mu", 1e-5},      {"e1_nu", 1e-5},       {"e2_mu", 1e-4},       {"e2_nu", 1e-4},
    {"eq_ah", 1e-4},      {"d1", 1e-3},          {"d2", 1e-3},          {"sigma_diag", 1e-6},
    {"nabla_e2_e2", 1e-6}, {"a_phi", 1e-5},      {"mu_nu", 1e-6},       {"e2_nu_jet_vs_stencil", 1e-4},
};

std::vector<CheckDef> sphere_checks() {
    std::vector<CheckDef> v;
    v.push_back(def("closure", 1e-6, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const ShootResult& s = c.shoot();
        if (!s.closed) throw DomainError(s.verdict);
        out.push_back(make_result(d, c.sc, std::abs(s.closure_defect)));
    }));
    v.push_back(def("pole-smoothness", 1e-6, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const ShootResult& s = c.shoot();
        if (!s.closed) throw DomainError(s.verdict);
        out.push_back(make_result(d, c.sc, s.pole_smoothness_defect));
    }));
    v.push_back(def("h-target", 1e-5, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const ShootResult& s = c.shoot();
        double m = 0.0;
        for (const auto& p : s.profile.samples) m = std::max(m, std::abs(p.H_measured - s.H_target));
        const double H = s.H_target;
        const GridResidual g = grid_max(
            c.space, c.sphere_immersion(), c.grid(), [H](const SurfaceGeometry& geo) { return std::abs(geo.H_norm - H); },
            false, c.opt.exec);
        c.details["h_target_profile"] = m;
        CheckResult r = grid_result(d, c.sc, g);
        if (m > g.value) {
            r = make_result(d, c.sc, m);
        }
        out.push_back(r);
    }));
    v.push_back(def("mirror", 1e-6, [](Context& c, const CheckDef& d, std::vector<CheckResult>& out) {
        const ShootResult& s = c.shoot();
        if (!s.closed) throw DomainError(s.verdict);
        out.push_back(make_result(d, c.sc, mirror_defect(s)));
    }));
    v.push_back(def("anti-invariance", 1e-8, grid_check([](Context& c) {
                        return anti_invariance_residual(c.space, c.immersion(), c.grid(), c.opt.exec);
                    })));
    v.push_back(def("pmc", 1e-6, grid_check([](Context& c) {
                        return pmc_residual(c.space, c.immersion(), c.grid(), c.opt.exec);
                    })));
    v.push_back(def("qzero", 1e-5, q_zero_check(QForm::Q, true)));
    v.push_back(def("qprime-zero", 1e-5, q_zero_check(QForm::QPrime, true)));
    v.push_back(def("dbar-q", 1e-5, dbar_check(QForm::Q)));
    v.push_back(def("dbar-qprime", 1e-5, dbar_check(QForm::QPrime)));
    v.push_back(def("lemma-suite", 0.0, [](Context& c, const CheckDef&, std::vector<CheckResult>& out) {
        const LemmaReport& rep = c.lemma_report();
        for (const auto& lt : kLemmaTolerances) {
            const CheckDef sub{std::string("lemma.") + lt.name, lt.tol, nullptr};
            for (const auto& nr : rep.residuals)
                if (nr.name == lt.name) {
                    CheckResult r = make_result(sub, c.sc, nr.value);
                    r.argmax = std::make_pair(nr.u, nr.v);
                    out.push_back(r);
                }
        }
    }));
    return v;
}

std::vector<CheckDef> checks_for(const std::string& subject) {
    if (subject == "space-checks") return space_checks();
    if (subject == "cylinder") return surface_checks(true);
    if (subject == "custom-surface") return surface_checks(false);
    if (subject == "sphere") return sphere_checks();
    throw ConfigError("unknown subject type '" + subject + "'");
}

std::vector<std::string> default_checks(const std::string& subject) {
    if (subject == "space-checks") return registered_checks(subject);
    if (subject == "cylinder") return {"pmc", "qzero", "dbar-q", "dbar-qprime"};
    if (subject == "custom-surface") return {"pmc", "anti-invariance"};
    return {"closure", "pole-smoothness", "h-target", "mirror", "anti-invariance", "qzero", "qprime-zero",
            "dbar-q",  "dbar-qprime",     "lemma-suite"};
}

bool lemma_name(const std::string& name) {
    if (name.rfind("lemma.", 0) != 0) return false;
    for (const auto& lt : kLemmaTolerances)
        if (name == std::string("lemma.") + lt.name) return true;
    return false;
}

ordered_json value_json(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

ordered_json check_json(const CheckResult& c) {
    ordered_json j;
    j["name"] = c.name;
    j["value"] = value_json(c.value);
    j["tolerance"] = c.tolerance;
    j["comparison"] = comparison_name(c.comparison);
    j["pass"] = c.pass;
    if (c.argmax)
        j["argmax"] = {{"u", c.argmax->first}, {"v", c.argmax->second}};
    else if (c.argmax_sample)
        j["argmax"] = {{"sample", *c.argmax_sample}};
    else
        j["argmax"] = nullptr;
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

std::string shortest(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void write_text(const std::filesystem::path& p, const std::function<void(std::ostream&)>& fn) {
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write '" + p.string() + "'");
    fn(os);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> registered_checks(const std::string& subject) {
    std::vector<std::string> names;
    for (const auto& d : checks_for(subject)) names.push_back(d.name);
    return names;
}

Scenario parse_scenario(const ordered_json& j) {
    if (!j.is_object()) throw ConfigError("scenario must be an object");
    reject_unknown(j, {"space", "subject", "checks", "grid", "tolerances", "seed", "samples", "scan"}, "");
    Scenario sc;
    const ordered_json sp = require(j, "space", "");
    reject_unknown(sp, {"family", "n", "rho"}, "space.");
    sc.space.family = family_from_string(require(sp, "family", "space.").get<std::string>());
    sc.space.n = require(sp, "n", "space.").get<int>();
    sc.space.rho = number(require(sp, "rho", "space."), "space.rho");
    try {
        sc.space.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid key 'space': ") + e.what());
    }

    const ordered_json subj = require(j, "subject", "");
    sc.subject = require(subj, "type", "subject.").get<std::string>();
    if (sc.subject == "space-checks") {
        reject_unknown(subj, {"type"}, "subject.");
    } else if (sc.subject == "cylinder") {
        reject_unknown(subj, {"type", "kappa", "tau", "length", "kappa_amp", "kappa_freq", "height"}, "subject.");
        if (subj.contains("kappa")) {
            if (subj["kappa"].is_string()) {
                if (subj["kappa"].get<std::string>() != "matched")
                    throw ConfigError("subject.kappa must be a number or \"matched\"");
                sc.kappa_from_torsion = true;
            } else {
                sc.kappa = number(subj["kappa"], "subject.kappa");
            }
        }
        if (subj.contains("tau")) sc.tau = number(subj["tau"], "subject.tau");
        if (subj.contains("length")) sc.length = number(subj["length"], "subject.length");
        if (subj.contains("kappa_amp")) sc.kappa_amp = number(subj["kappa_amp"], "subject.kappa_amp");
        if (subj.contains("kappa_freq")) sc.kappa_freq = number(subj["kappa_freq"], "subject.kappa_freq");
        if (subj.contains("height")) sc.height = number(subj["height"], "subject.height");
    } else if (sc.subject == "sphere") {
        reject_unknown(subj, {"type", "H"}, "subject.");
        sc.H = number(require(subj, "H", "subject."), "subject.H");
    } else if (sc.subject == "custom-surface") {
        reject_unknown(subj, {"type", "family", "params"}, "subject.");
        sc.family = require(subj, "family", "subject.").get<std::string>();
        if (subj.contains("params")) {
            reject_unknown(subj["params"], {"half_width"}, "subject.params.");
            if (subj["params"].contains("half_width"))
                sc.half_width = number(subj["params"]["half_width"], "subject.params.half_width");
        }
        (void)make_family(sc.family, sc.space, sc.half_width);
    } else {
        throw ConfigError("unknown key 'subject.type': '" + sc.subject + "'");
    }

    const std::vector<std::string> known = registered_checks(sc.subject);
    auto known_check = [&](const std::string& n) {
        return std::find(known.begin(), known.end(), n) != known.end() || (sc.subject == "sphere" && lemma_name(n));
    };
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw ConfigError("key 'checks' must be a list");
        for (const auto& c : j["checks"]) {
            CheckSpec cs;
            if (c.is_string()) {
                cs.name = c.get<std::string>();
            } else if (c.is_object()) {
                reject_unknown(c, {"name", "tolerance", "comparison"}, "checks[].");
                cs.name = require(c, "name", "checks[].").get<std::string>();
                if (c.contains("tolerance")) cs.tolerance = number(c["tolerance"], "checks[].tolerance");
                if (c.contains("comparison"))
                    cs.comparison = comparison_from_string(c["comparison"].get<std::string>(), "checks[].comparison");
            } else {
                throw ConfigError("entries of 'checks' must be names or objects");
            }
            if (!known_check(cs.name)) throw ConfigError("unknown check 'checks." + cs.name + "' for subject " + sc.subject);
            sc.checks.push_back(cs);
        }
    }
    if (sc.checks.empty())
        for (const auto& n : default_checks(sc.subject)) sc.checks.push_back({n, std::nullopt, std::nullopt});

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.is_number_integer()) {
            sc.grid_nu = g.get<int>();
            if (sc.subject != "sphere") sc.grid_nv = sc.grid_nu;
        } else if (g.is_array() && g.size() == 2) {
            sc.grid_nu = g[0].get<int>();
            sc.grid_nv = g[1].get<int>();
        } else {
            throw ConfigError("key 'grid' must be an integer or a pair of integers");
        }
        if (sc.grid_nu < 5 || (sc.grid_nv != 0 && sc.grid_nv < 5) || sc.grid_nu > 4096 || sc.grid_nv > 4096)
            throw ConfigError("key 'grid' out of range [5, 4096]");
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw ConfigError("key 'tolerances' must be an object");
        for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
            if (!known_check(it.key())) throw ConfigError("unknown check 'tolerances." + it.key() + "'");
            sc.tolerances[it.key()] = number(it.value(), "tolerances." + it.key());
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            throw ConfigError("key 'seed' must be a non-negative integer");
        sc.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("samples")) {
        sc.samples = j["samples"].get<int>();
        if (sc.samples < 1 || sc.samples > 100000) throw ConfigError("key 'samples' out of range [1, 100000]");
    }
    if (j.contains("scan")) {
        const auto& s = j["scan"];
        reject_unknown(s, {"parameter", "lo", "hi", "samples"}, "scan.");
        ScanSpec ss;
        ss.parameter = require(s, "parameter", "scan.").get<std::string>();
        ss.lo = number(require(s, "lo", "scan."), "scan.lo");
        ss.hi = number(require(s, "hi", "scan."), "scan.hi");
        ss.samples = require(s, "samples", "scan.").get<int>();
        static const std::map<std::string, std::string> owner = {
            {"kappa", "cylinder"}, {"tau", "cylinder"}, {"kappa_amp", "cylinder"}, {"H", "sphere"}};
        auto it = owner.find(ss.parameter);
        if (it == owner.end() || it->second != sc.subject)
            throw ConfigError("unknown key 'scan.parameter': '" + ss.parameter + "' for subject " + sc.subject);
        if (!(ss.hi > ss.lo)) throw ConfigError("key 'scan' needs lo < hi");
        if (ss.samples < 2 || ss.samples > 10000) throw ConfigError("key 'scan.samples' out of range [2, 10000]");
        sc.scan = ss;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open scenario '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("scenario '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Report run_scenario(const Scenario& sc, const RunOptions& opt) {
    Context ctx(sc, opt);
    Report rep;
    rep.seed = sc.seed;
    rep.space = sc.space.label();
    rep.subject = sc.subject;
    const std::vector<CheckDef> defs = checks_for(sc.subject);
    std::vector<CheckSpec> plan;
    bool lemma_done = false;
    for (const auto& c : sc.checks) {
        if (lemma_name(c.name)) {
            if (!lemma_done) plan.push_back({"lemma-suite", std::nullopt, std::nullopt});
            lemma_done = true;
            continue;
        }
        if (c.name == "lemma-suite") {
            if (lemma_done) continue;
            lemma_done = true;
        }
        plan.push_back(c);
    }
    for (const auto& c : plan) {
        const auto it = std::find_if(defs.begin(), defs.end(), [&](const CheckDef& d) { return d.name == c.name; });
        if (it == defs.end()) throw ConfigError("unknown check 'checks." + c.name + "'");
        std::vector<CheckResult> out;
        std::string error;
        try {
            it->run(ctx, *it, out);
        } catch (const DomainError& e) {
            error = std::string("domain: ") + e.what();
        } catch (const DegenerateError& e) {
            error = std::string("degenerate: ") + e.what();
        } catch (const PreconditionError& e) {
            error = std::string("precondition: ") + e.what();
        }
        if (!error.empty()) {
            out.clear();
            CheckResult r;
            r.name = c.name;
            r.tolerance = c.tolerance.value_or(it->tolerance);
            r.comparison = c.comparison.value_or(Comparison::Below);
            r.pass = false;
            r.error = error;
            out.push_back(r);
        }
        for (auto& r : out) rep.checks.push_back(std::move(r));
    }
    rep.details = ctx.details;

    if (!opt.out_dir.empty()) {
        const std::filesystem::path dir(opt.out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "report.json", [&](std::ostream& os) { os << to_json(rep).dump(2) << '\n'; });
        if (ctx.qgrid) write_text(dir / "q_grid.csv", [&](std::ostream& os) { write_q_csv(os, *ctx.qgrid); });
        if (auto cyl = std::dynamic_pointer_cast<const CylinderImmersion>(ctx.surface))
            write_text(dir / "curve.csv", [&](std::ostream& os) { write_curve_csv(os, cyl->curve()); });
        if (ctx.shot) write_text(dir / "profile.csv", [&](std::ostream& os) { write_profile_csv(os, *ctx.shot); });
    }
    return rep;
}

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["version"] = r.version;
    j["seed"] = r.seed;
    j["space"] = r.space;
    j["subject"] = r.subject;
    j["passed"] = r.passed();
    j["checks"] = ordered_json::array();
    for (const auto& c : r.checks) j["checks"].push_back(check_json(c));
    j["details"] = r.details;
    return j;
}

void write_report_csv(std::ostream& os, const Report& r) {
    os << "name,value,tolerance,comparison,pass,argmax_u,argmax_v,error\n";
    for (const auto& c : r.checks) {
        os << c.name << ',';
        if (c.value) os << shortest(*c.value);
        os << ',' << shortest(c.tolerance) << ',' << comparison_name(c.comparison) << ',' << (c.pass ? "true" : "false")
           << ',';
        if (c.argmax) os << shortest(c.argmax->first) << ',' << shortest(c.argmax->second);
        else os << ',';
        std::string e = c.error;
        std::replace(e.begin(), e.end(), ',', ';');
        os << ',' << e << '\n';
    }
}

ScanReport run_scan(const Scenario& sc, const RunOptions& opt) {
    if (!sc.scan) throw ConfigError("missing key 'scan'");
    const ScanSpec& ss = *sc.scan;
    ScanReport rep;
    rep.seed = sc.seed;
    rep.space = sc.space.label();
    rep.subject = sc.subject;
    rep.spec = ss;
    RunOptions inner = opt;
    inner.out_dir.clear();
    for (int k = 0; k < ss.samples; ++k) {
        const double p = ss.lo + (ss.hi - ss.lo) * k / (ss.samples - 1);
        Scenario s = sc;
        s.scan.reset();
        if (ss.parameter == "kappa") {
            s.kappa = p;
            s.kappa_from_torsion = false;
        } else if (ss.parameter == "tau") {
            s.tau = p;
        } else if (ss.parameter == "kappa_amp") {
            s.kappa_amp = p;
        } else {
            s.H = p;
        }
        rep.rows.push_back({p, run_scenario(s, inner).checks});
    }
    auto all_pass = [](const ScanRow& r) {
        return std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; });
    };
    for (size_t k = 1; k < rep.rows.size(); ++k)
        if (all_pass(rep.rows[k]) != all_pass(rep.rows[k - 1]))
            rep.flips.push_back(0.5 * (rep.rows[k].parameter + rep.rows[k - 1].parameter));
    if (sc.subject == "cylinder" && ss.parameter == "kappa") {
        const ProductSpace space(sc.space);
        rep.roots = kappa_scan(space, sc.tau, ss.lo, ss.hi, ss.samples, opt.exec).roots;
    }
    if (!opt.out_dir.empty()) {
        const std::filesystem::path dir(opt.out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "scan.json", [&](std::ostream& os) { os << to_json(rep).dump(2) << '\n'; });
        write_text(dir / "scan.csv", [&](std::ostream& os) { write_scan_csv(os, rep); });
    }
    return rep;
}

ordered_json to_json(const ScanReport& r) {
    ordered_json j;
    j["version"] = r.version;
    j["seed"] = r.seed;
    j["space"] = r.space;
    j["subject"] = r.subject;
    j["scan"] = {{"parameter", r.spec.parameter}, {"lo", r.spec.lo}, {"hi", r.spec.hi}, {"samples", r.spec.samples}};
    j["flips"] = r.flips;
    j["roots"] = r.roots;
    j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json rj;
        rj["parameter"] = row.parameter;
        rj["checks"] = ordered_json::array();
        for (const auto& c : row.checks) rj["checks"].push_back(check_json(c));
        j["rows"].push_back(rj);
    }
    return j;
}

void write_scan_csv(std::ostream& os, const ScanReport& r) {
    os << r.spec.parameter;
    if (!r.rows.empty())
        for (const auto& c : r.rows.front().checks) os << ',' << c.name << ',' << c.name << "_pass";
    os << '\n';
    for (const auto& row : r.rows) {
        os << shortest(row.parameter);
        for (const auto& c : row.checks) {
            os << ',';
            if (c.value && std::isfinite(*c.value)) os << shortest(*c.value);
            os << ',' << (c.pass ? 1 : 0);
        }
        os << '\n';
    }
}

}  // namespace cosym
