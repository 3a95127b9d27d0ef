#pragma once

#include <map>
#include <string>
#include <vector>

#include "maxlab/numerics.hpp"

namespace maxlab {

struct ScenarioConfig {
    std::string scenario;
    double a = 1.0, b = 2.0;
    int m = 2;
    double tau = 8.0, nu = 0.25, delta = 0.05, c_m = 1.05;  // psi_tau example
    double omega = 1.5;                                     // endpoint variant
    std::vector<double> t_grid;
    double mesh_res = 0.1;
    double tol = 0.15;
    uint64_t seed = 1;

    std::map<std::string, std::string> to_kv() const;
};

// Long-format series rows (t, quantity, value) for series.csv.
struct Series {
    struct Row {
        double t;
        std::string quantity;
        double value;
    };
    std::vector<Row> rows;
    void add(double t, const std::string& q, double v) { rows.push_back({t, q, v}); }
};

struct ScenarioResult {
    bool pass = false;
    std::vector<std::pair<std::string, bool>> checks;
    std::map<std::string, double> stats;
    Series series;

    void check(const std::string& name, bool ok) { checks.push_back({name, ok}); }
    bool all_checks() const {
        for (const auto& [n, ok] : checks)
            if (!ok) return false;
        return true;
    }
};

ScenarioResult run_stromberg_lower_bound(const ScenarioConfig& cfg);
ScenarioResult run_stromberg_supercritical(const ScenarioConfig& cfg);
ScenarioResult run_connected_sum_uncentred(const ScenarioConfig& cfg);
ScenarioResult run_connected_sum_centred(const ScenarioConfig& cfg);
ScenarioResult run_conformal_sandwich(const ScenarioConfig& cfg);
ScenarioResult run_curvature_pinching_example(const ScenarioConfig& cfg);
ScenarioResult run_endpoint_majorant(const ScenarioConfig& cfg);

// Dispatch by cfg.scenario; fills scenario defaults (grids, parameter
// constraints) and throws domain_error on constraint violations.
ScenarioResult run_scenario(const ScenarioConfig& cfg);
ScenarioConfig scenario_defaults(const std::string& name);
void validate_config(const ScenarioConfig& cfg);

}  // namespace maxlab
