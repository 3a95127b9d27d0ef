#pragma once

#include <map>
#include <string>

#include "maxlab/experiments.hpp"

namespace maxlab {

std::string fmt17(double v);

// key=value configuration files: one pair per line, '#' comments.
std::map<std::string, std::string> read_kv_file(const std::string& path);

void write_series_csv(const Series& s, const std::string& path);
void write_manifest(const std::map<std::string, std::string>& kv,
                    const std::string& path);
void write_report_json(const ScenarioResult& r, const ScenarioConfig& cfg,
                       const std::string& path);

}  // namespace maxlab
