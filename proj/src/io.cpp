#include "maxlab/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace maxlab {

std::string fmt17(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string k = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (!k.empty()) kv[k] = v;
    }
    return kv;
}

void write_series_csv(const Series& s, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write " + path);
    std::fprintf(fp, "t,quantity,value\n");
    for (const auto& r : s.rows)
        std::fprintf(fp, "%.17g,%s,%.17g\n", r.t, r.quantity.c_str(), r.value);
    std::fclose(fp);
}

void write_manifest(const std::map<std::string, std::string>& kv,
                    const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write " + path);
    for (const auto& [k, v] : kv)
        std::fprintf(fp, "%s=%s\n", k.c_str(), v.c_str());
    std::fclose(fp);
}

void write_report_json(const ScenarioResult& r, const ScenarioConfig& cfg,
                       const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["scenario"] = cfg.scenario;
    j["verdict"] = r.pass ? "PASS" : "FAIL";
    for (const auto& [name, ok] : r.checks) j["checks"][name] = ok;
    for (const auto& [name, v] : r.stats) j["stats"][name] = v;
    for (const auto& [k, v] : cfg.to_kv()) j["config"][k] = v;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace maxlab
