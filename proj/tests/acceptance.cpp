// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cosym/harness.hpp"

using namespace cosym;

namespace {

constexpr double kCurvatureTol = 1e-6;
constexpr double kPhiSectionalTol = 1e-6;
constexpr double kXiFlatTol = 1e-9;
constexpr double kAxiomTol = 1e-9;
constexpr int kSamples = 100;
constexpr std::uint64_t kSeed = 20240607;

constexpr double kCylPmcTol = 1e-6;
constexpr double kCylQTol = 1e-8;
constexpr double kCylDbarTol = 1e-6;
constexpr double kKappaRootTol = 1e-4;
constexpr int kCylGrid = 48;

constexpr double kNegPmcMin = 1e-2;
constexpr double kNegDbarMin = 1e-3;

constexpr double kSphereDbarTol = 1e-5;
constexpr double kClosureTol = 1e-6;
constexpr double kHTargetTol = 1e-5;
constexpr double kAntiInvTol = 1e-8;
constexpr double kSphereQTol = 1e-5;
constexpr double kE1Tol = 1e-5;
constexpr double kE2Tol = 1e-4;
constexpr double kEqAhTol = 1e-4;
constexpr double kLaplaceTol = 1e-3;
constexpr double kThresholdLo = 0.45, kThresholdHi = 0.55;

struct Line {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

void print(int n, const char* title, Line& l) {
    std::printf("criterion %d: %s  %s%s\n", n, l.pass ? "PASS" : "FAIL", title, l.note.str().c_str());
    std::fflush(stdout);
}

ordered_json space_json(const char* fam, int n, double rho) { return {{"family", fam}, {"n", n}, {"rho", rho}}; }

ordered_json space_of(double rho) {
    if (rho < 0) return space_json("CH", 2, rho);
    if (rho > 0) return space_json("CP", 2, rho);
    return space_json("C", 2, rho);
}

const CheckResult* find(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

double value(const Report& r, const std::string& name) {
    const CheckResult* c = find(r, name);
    return c && c->value ? *c->value : std::nan("");
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

Report run_json(const ordered_json& j) { return run_scenario(parse_scenario(j)); }

ordered_json space_scenario(const ordered_json& space) {
    ordered_json j;
    j["space"] = space;
    j["subject"] = {{"type", "space-checks"}};
    j["tolerances"] = {{"curvature", kCurvatureTol},  {"phi-sectional", kPhiSectionalTol},
                       {"r-xi-xi", kXiFlatTol},       {"phi-squared", kAxiomTol},
                       {"phi-metric", kAxiomTol},     {"nabla-phi", kAxiomTol},
                       {"nabla-xi", kAxiomTol}};
    j["seed"] = kSeed;
    j["samples"] = kSamples;
    return j;
}

const std::vector<ordered_json>& spaces() {
    static const std::vector<ordered_json> s = {space_json("CP", 2, 4.0), space_json("CH", 2, -4.0),
                                                space_json("CP", 3, 2.0), space_json("C", 2, 0.0)};
    return s;
}

ordered_json cylinder_scenario(const ordered_json& space, ordered_json kappa, double tau, ordered_json checks) {
    ordered_json j;
    j["space"] = space;
    j["subject"] = {{"type", "cylinder"}, {"kappa", kappa}, {"tau", tau}};
    j["checks"] = checks;
    j["grid"] = kCylGrid;
    j["tolerances"] = {{"pmc", kCylPmcTol}, {"qzero", kCylQTol}, {"dbar-q", kCylDbarTol}, {"dbar-qprime", kCylDbarTol}};
    j["seed"] = kSeed;
    return j;
}

ordered_json sphere_scenario(double rho, double H) {
    ordered_json j;
    j["space"] = space_of(rho);
    j["subject"] = {{"type", "sphere"}, {"H", H}};
    j["checks"] = {"closure", "h-target", "anti-invariance", "qzero", "qprime-zero", "dbar-q", "dbar-qprime",
                   "mirror",  "lemma-suite"};
    j["tolerances"] = {{"closure", kClosureTol},
                       {"h-target", kHTargetTol},
                       {"anti-invariance", kAntiInvTol},
                       {"qzero", kSphereQTol},
                       {"qprime-zero", kSphereQTol},
                       {"dbar-q", kSphereDbarTol},
                       {"dbar-qprime", kSphereDbarTol},
                       {"lemma.e1_mu", kE1Tol},
                       {"lemma.e1_nu", kE1Tol},
                       {"lemma.e2_mu", kE2Tol},
                       {"lemma.e2_nu", kE2Tol},
                       {"lemma.eq_ah", kEqAhTol},
                       {"lemma.d1", kLaplaceTol},
                       {"lemma.d2", kLaplaceTol}};
    j["seed"] = kSeed;
    return j;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    bool all = true;

    // 1 and 2 share the seeded sample
    std::vector<Report> space_reports;
    for (const auto& s : spaces()) space_reports.push_back(run_json(space_scenario(s)));
    {
        Line l;
        double worst_r = 0, worst_phi = 0, worst_xi = 0;
        for (const auto& r : space_reports) {
            for (const char* name : {"curvature", "phi-sectional", "r-xi-xi"}) {
                const CheckResult* c = find(r, name);
                l.require(c && c->pass, r.space + " " + name);
            }
            worst_r = std::max(worst_r, value(r, "curvature"));
            worst_phi = std::max(worst_phi, value(r, "phi-sectional"));
            worst_xi = std::max(worst_xi, value(r, "r-xi-xi"));
        }
        l.note << " (max |R_num - R_model| " << sci(worst_r) << ", |K_phi - rho| " << sci(worst_phi) << ", |R(U,xi)xi| "
               << sci(worst_xi) << ")";
        print(1, "curvature model on CP2(4), CH2(-4), CP3(2), C2(0)", l);
        all = all && l.pass;
    }
    {
        Line l;
        double worst = 0;
        for (const auto& r : space_reports)
            for (const char* name : {"phi-squared", "phi-metric", "nabla-phi", "nabla-xi"}) {
                const CheckResult* c = find(r, name);
                l.require(c && c->pass, r.space + " " + name);
                worst = std::max(worst, value(r, name));
            }
        l.note << " (max residual " << sci(worst) << ")";
        print(2, "cosymplectic axioms and parallel structure", l);
        all = all && l.pass;
    }

    // 3: cylinders at the Q-vanishing curvature
    struct Case {
        double rho, tau;
    };
    const Case cases[] = {{-4.0, 0.0}, {-4.0, 1.0}, {-2.0, 0.5}};
    std::vector<Report> cylinder_reports;
    {
        Line l;
        double worst_pmc = 0, worst_q = 0, worst_dbar = 0, worst_root = 0;
        for (const auto& c : cases) {
            const Report r = run_json(cylinder_scenario(space_of(c.rho), "matched", c.tau,
                                                        {"pmc", "qzero", "dbar-q", "dbar-qprime"}));
            for (const auto& ch : r.checks) l.require(ch.pass, r.space + " tau=" + sci(c.tau) + " " + ch.name);
            worst_pmc = std::max(worst_pmc, value(r, "pmc"));
            worst_q = std::max(worst_q, value(r, "qzero"));
            worst_dbar = std::max({worst_dbar, value(r, "dbar-q"), value(r, "dbar-qprime")});
            cylinder_reports.push_back(r);

            const double k = proposition_kappa(c.rho, c.tau);
            auto scan = cylinder_scenario(space_of(c.rho), k, c.tau, {"qzero"});
            scan["grid"] = 20;
            scan["scan"] = {{"parameter", "kappa"}, {"lo", k - 0.5}, {"hi", k + 0.5}, {"samples", 21}};
            const ScanReport sr = run_scan(parse_scenario(scan));
            l.require(sr.roots.size() == 1, "unique kappa root for rho=" + sci(c.rho));
            if (!sr.roots.empty()) {
                worst_root = std::max(worst_root, std::abs(sr.roots[0] - k));
                l.require(std::abs(sr.roots[0] - k) < kKappaRootTol, "kappa root location");
            }
        }
        // |H| bounds and Q = 0 along the matched curve for a torsion sweep
        int sweep_points = 0;
        for (double rho : {-4.0, -2.0}) {
            auto j = cylinder_scenario(space_of(rho), "matched", 0.0, {"qzero", "h-bounds"});
            j["grid"] = 20;
            j["scan"] = {{"parameter", "tau"}, {"lo", 0.0}, {"hi", 1.0}, {"samples", 11}};
            const ScanReport sr = run_scan(parse_scenario(j));
            for (const auto& row : sr.rows)
                for (const auto& ch : row.checks) {
                    l.require(ch.pass, ch.name + " at tau=" + sci(row.parameter));
                    ++sweep_points;
                }
        }
        l.note << " (pmc " << sci(worst_pmc) << ", |Q| " << sci(worst_q) << ", dbar " << sci(worst_dbar)
               << ", kappa root error " << sci(worst_root) << ", tau sweep points " << sweep_points / 2 << ")";
        print(3, "vertical cylinder classification", l);
        all = all && l.pass;
    }

    // 4: negative control
    {
        Line l;
        auto j = cylinder_scenario(space_of(-4.0), 1.0, 0.0,
                                   ordered_json::array({{{"name", "pmc"}, {"tolerance", kNegPmcMin}, {"comparison", "above"}},
                                                        {{"name", "dbar-q"}, {"tolerance", kNegDbarMin}, {"comparison", "above"}}}));
        j["subject"]["kappa_amp"] = 0.1;
        j["subject"]["kappa_freq"] = 1.0;
        j.erase("tolerances");
        const Report r = run_json(j);
        for (const auto& ch : r.checks) l.require(ch.pass, ch.name);
        l.note << " (pmc " << sci(value(r, "pmc")) << ", dbar Q " << sci(value(r, "dbar-q")) << ")";
        print(4, "sinusoidal-curvature cylinder is flagged", l);
        all = all && l.pass;
    }

    // 6 runs the spheres; 5 reuses them
    const Report sphere_cp = run_json(sphere_scenario(4.0, 0.5));
    const Report sphere_ch = run_json(sphere_scenario(-4.0, 0.6));

    {
        Line l;
        std::vector<Report> extra = cylinder_reports;
        const struct {
            ordered_json space;
            double kappa, tau;
        } more[] = {{space_json("CP", 2, 4.0), 1.0, 0.3},
                    {space_json("C", 2, 0.0), 1.5, 0.5},
                    {space_json("CH", 2, -4.0), 1.7, 0.2},
                    {space_json("CP", 3, 2.0), 0.8, 1.0}};
        for (const auto& m : more) extra.push_back(run_json(cylinder_scenario(m.space, m.kappa, m.tau, {"pmc", "dbar-q", "dbar-qprime"})));
        double worst_cyl = 0, worst_qp = 0;
        for (const auto& r : extra) {
            const CheckResult* p = find(r, "pmc");
            const CheckResult* d = find(r, "dbar-q");
            l.require(p && p->pass, r.space + " cylinder pmc");
            l.require(d && d->pass, r.space + " cylinder dbar Q");
            worst_cyl = std::max(worst_cyl, value(r, "dbar-q"));
            worst_qp = std::max(worst_qp, value(r, "dbar-qprime"));
        }
        double worst_sph = 0;
        for (const Report* r : {&sphere_cp, &sphere_ch}) {
            const CheckResult* d = find(*r, "dbar-q");
            l.require(d && d->pass, r->space + " sphere dbar Q");
            worst_sph = std::max(worst_sph, value(*r, "dbar-q"));
        }
        l.note << " (" << extra.size() << " cylinders: " << sci(worst_cyl) << ", 2 spheres: " << sci(worst_sph)
               << "; dbar Q' on cylinders " << sci(worst_qp) << ")";
        print(5, "holomorphicity of Q(Z,Z) on pmc surfaces", l);
        all = all && l.pass;
    }

    {
        Line l;
        for (const Report* r : {&sphere_cp, &sphere_ch})
            for (const auto& ch : r->checks) l.require(ch.pass, r->space + " " + ch.name + (ch.error.empty() ? "" : ": " + ch.error));
        ordered_json scan = sphere_scenario(-4.0, 0.6);
        scan["checks"] = {"closure"};
        scan["scan"] = {{"parameter", "H"}, {"lo", 0.3}, {"hi", 0.8}, {"samples", 11}};
        const ScanReport sr = run_scan(parse_scenario(scan));
        bool at04 = true, at06 = false;
        for (const auto& row : sr.rows) {
            if (std::abs(row.parameter - 0.4) < 1e-12) at04 = row.checks[0].pass;
            if (std::abs(row.parameter - 0.6) < 1e-12) at06 = row.checks[0].pass;
        }
        l.require(!at04, "H=0.4 must not converge");
        l.require(at06, "H=0.6 must converge");
        l.require(sr.flips.size() == 1 && sr.flips[0] >= kThresholdLo && sr.flips[0] <= kThresholdHi,
                  "single convergence flip in [0.45, 0.55]");
        double worst_lemma = 0;
        for (const Report* r : {&sphere_cp, &sphere_ch})
            for (const char* n : {"lemma.d1", "lemma.d2"}) worst_lemma = std::max(worst_lemma, value(*r, n));
        l.note << " (closure " << sci(std::max(value(sphere_cp, "closure"), value(sphere_ch, "closure"))) << ", D1/D2 "
               << sci(worst_lemma) << ", flip at H=" << (sr.flips.empty() ? std::nan("") : sr.flips[0]) << ")";
        print(6, "rotational spheres and the lemma identities", l);
        all = all && l.pass;
    }

    // 7: byte-identical reports on re-run, serial or parallel
    {
        Line l;
        const std::vector<ordered_json> scenarios = {
            space_scenario(spaces()[1]),
            cylinder_scenario(space_of(-2.0), "matched", 0.5, {"pmc", "qzero", "dbar-q"}),
        };
        RunOptions serial;
        serial.exec = Exec::Serial;
        for (const auto& j : scenarios) {
            const Scenario sc = parse_scenario(j);
            const std::string a = to_json(run_scenario(sc)).dump(2), b = to_json(run_scenario(sc)).dump(2),
                              c = to_json(run_scenario(sc, serial)).dump(2);
            l.require(a == b && a == c, "report differs for " + sc.space.label() + " " + sc.subject);
        }
        const std::string s1 = to_json(sphere_cp).dump(2), s2 = to_json(run_json(sphere_scenario(4.0, 0.5))).dump(2);
        l.require(s1 == s2, "sphere report differs");
        l.note << " (" << scenarios.size() + 1 << " scenarios re-run)";
        print(7, "deterministic reports", l);
        all = all && l.pass;
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "acceptance finished in %.1f s\n", secs);
    return all ? 0 : 1;
}
