// cosymcheck: command-line front end of the verification harness.
// Exit status: 0 all checks pass, 1 some check fails, 2 configuration error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cosym/harness.hpp"

using namespace cosym;

namespace {

struct Common {
    int grid = 0;
    long long seed = -1;
    std::string out;
    std::string format = "json";
};

struct SpaceFlags {
    std::string family = "CP";
    int n = 2;
    double rho = 4.0;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--grid", c.grid, "grid resolution N (spheres: profile nodes)")->check(CLI::Range(5, 4096));
    app->add_option("--seed", c.seed, "seed for random point sampling")->check(CLI::NonNegativeNumber);
    app->add_option("--out", c.out, "directory for report.json and CSV artifacts");
    app->add_option("--format", c.format, "report format on stdout")->check(CLI::IsMember({"json", "csv"}));
}

void add_space(CLI::App* app, SpaceFlags& s) {
    app->add_option("--space", s.family, "CP, CH or C")->required();
    app->add_option("--n", s.n, "complex dimension");
    app->add_option("--rho", s.rho, "holomorphic sectional curvature")->required();
}

ordered_json space_json(const SpaceFlags& s) { return {{"family", s.family}, {"n", s.n}, {"rho", s.rho}}; }

void apply_common(ordered_json& j, const Common& c) {
    if (c.grid > 0) j["grid"] = c.grid;
    if (c.seed >= 0) j["seed"] = c.seed;
}

int emit(const Report& rep, const Common& c) {
    if (c.format == "csv")
        write_report_csv(std::cout, rep);
    else
        std::cout << to_json(rep).dump(2) << '\n';
    return rep.passed() ? 0 : 1;
}

int emit(const ScanReport& rep, const Common& c) {
    if (c.format == "csv")
        write_scan_csv(std::cout, rep);
    else
        std::cout << to_json(rep).dump(2) << '\n';
    return 0;
}

ordered_json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open scenario '" + path + "'");
    try {
        return ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("scenario '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cosymcheck: verification harness for product cosymplectic space forms"};
    app.require_subcommand(1);
    Common common;
    SpaceFlags space;

    auto* check_space = app.add_subcommand("check-space", "curvature model and structure axioms");
    add_space(check_space, space);
    int samples = 100;
    check_space->add_option("--samples", samples, "number of random sample points");
    add_common(check_space, common);

    auto* cylinder = app.add_subcommand("cylinder", "vertical cylinder over a Frenet curve");
    add_space(cylinder, space);
    std::string kappa = "matched";
    double tau = 0.0, length = 0.0, kappa_amp = 0.0, kappa_freq = 1.0;
    std::vector<std::string> checks;
    cylinder->add_option("--kappa", kappa, "curvature, or 'matched' for the Q-vanishing value");
    cylinder->add_option("--tau", tau, "complex torsion");
    cylinder->add_option("--length", length, "curve length (0: default)");
    cylinder->add_option("--kappa-amp", kappa_amp, "amplitude of a sinusoidal curvature perturbation");
    cylinder->add_option("--kappa-freq", kappa_freq, "frequency of the perturbation");
    cylinder->add_option("--checks", checks, "check names");
    add_common(cylinder, common);

    auto* sphere = app.add_subcommand("sphere", "rotational cmc sphere in the real slice");
    add_space(sphere, space);
    double H = 0.5;
    sphere->add_option("--H", H, "target mean curvature")->required();
    sphere->add_option("--checks", checks, "check names");
    add_common(sphere, common);

    std::string config;
    auto* scan = app.add_subcommand("scan", "parameter scan of a scenario with a 'scan' record");
    scan->add_option("config", config, "scenario file")->required()->check(CLI::ExistingFile);
    add_common(scan, common);

    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("config", config, "scenario file")->required()->check(CLI::ExistingFile);
    add_common(run, common);

    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    try {
        ordered_json j;
        if (*check_space) {
            j["space"] = space_json(space);
            j["subject"] = {{"type", "space-checks"}};
            j["samples"] = samples;
        } else if (*cylinder) {
            j["space"] = space_json(space);
            ordered_json s = {{"type", "cylinder"}, {"tau", tau}};
            if (kappa == "matched")
                s["kappa"] = "matched";
            else
                s["kappa"] = std::stod(kappa);
            if (length > 0.0) s["length"] = length;
            if (kappa_amp != 0.0) s["kappa_amp"] = kappa_amp;
            s["kappa_freq"] = kappa_freq;
            j["subject"] = s;
        } else if (*sphere) {
            j["space"] = space_json(space);
            j["subject"] = {{"type", "sphere"}, {"H", H}};
        } else {
            j = read_json(config);
        }
        if (!checks.empty()) j["checks"] = checks;
        apply_common(j, common);
        const Scenario sc = parse_scenario(j);
        RunOptions opt;
        opt.out_dir = common.out;
        if (*scan) {
            status = emit(run_scan(sc, opt), common);
        } else {
            status = emit(run_scenario(sc, opt), common);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "elapsed " << secs << " s\n";
    return status;
}
