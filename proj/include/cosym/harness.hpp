#pragma once

// Scenario runner: loads a structured config, executes the named check suites
// and assembles a report with a stable field order.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cosym/curves.hpp"
#include "cosym/kernels.hpp"
#include "cosym/rotational.hpp"
#include "cosym/spaces.hpp"

namespace cosym {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum class Comparison { Below, Above };

struct CheckSpec {
    std::string name;
    std::optional<double> tolerance;
    std::optional<Comparison> comparison;
};

struct ScanSpec {
    std::string parameter;  // kappa, tau, H or kappa_amp
    double lo = 0.0, hi = 0.0;
    int samples = 0;
};

struct Scenario {
    SpaceFormSpec space;
    std::string subject = "space-checks";  // space-checks, cylinder, sphere, custom-surface

    double kappa = 1.0;
    bool kappa_from_torsion = false;  // kappa = sqrt(-rho (1 + 3 tau^2)) / 2
    double tau = 0.0;
    double length = 0.0;
    double kappa_amp = 0.0, kappa_freq = 1.0;
    double height = 1.0;

    double H = 0.5;

    std::string family;
    double half_width = 0.0;  // 0: family default

    std::vector<CheckSpec> checks;
    int grid_nu = 0, grid_nv = 0;  // 0: subject default
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 1;
    int samples = 100;
    std::optional<ScanSpec> scan;
};

Scenario parse_scenario(const ordered_json& j);
Scenario load_scenario(const std::string& path);

/// Registered check names for a subject, in default execution order.
std::vector<std::string> registered_checks(const std::string& subject);

struct CheckResult {
    std::string name;
    std::optional<double> value;
    double tolerance = 0.0;
    Comparison comparison = Comparison::Below;
    bool pass = false;
    std::string error;
    std::optional<std::pair<double, double>> argmax;  // (u, v) on a grid
    std::optional<int> argmax_sample;                 // index into the random sample
};

struct Report {
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::string space;
    std::string subject;
    std::vector<CheckResult> checks;
    ordered_json details = ordered_json::object();

    bool passed() const;
};

struct RunOptions {
    std::string out_dir;  // empty: no artifacts
    Exec exec = Exec::Parallel;
};

Report run_scenario(const Scenario& sc, const RunOptions& opt = {});

ordered_json to_json(const Report& r);
void write_report_csv(std::ostream& os, const Report& r);

struct ScanRow {
    double parameter = 0.0;
    std::vector<CheckResult> checks;
};

struct ScanReport {
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::string space;
    std::string subject;
    ScanSpec spec;
    std::vector<ScanRow> rows;
    std::vector<double> flips;  // midpoints where the all-pass flag changes
    std::vector<double> roots;  // refined zeros of Re Q for kappa scans of cylinders
};

ScanReport run_scan(const Scenario& sc, const RunOptions& opt = {});

ordered_json to_json(const ScanReport& r);
void write_scan_csv(std::ostream& os, const ScanReport& r);

}  // namespace cosym
