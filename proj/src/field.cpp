#include "maxlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace maxlab {

SampledField SampledField::scaled(double c) const {
    SampledField g = *this;
    for (double& v : g.value) v *= c;
    return g;
}

double level_set_measure(const SampledField& f, double alpha) {
    if (!(alpha > 0.0)) throw domain_error("level_set_measure: alpha > 0");
    std::vector<double> hits;
    hits.reserve(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.value[i]) > alpha) hits.push_back(f.weight[i]);
    return pairwise_sum(hits);
}

LorentzNorm lorentz_norm(const SampledField& f, double p, double r) {
    if (!(p >= 1.0)) throw domain_error("lorentz_norm: p >= 1 required");
    if (!(r >= 1.0)) throw domain_error("lorentz_norm: r >= 1 required");
    LorentzNorm out;
    out.p = p;
    out.r = r;

    // distinct |value| levels u_1 > u_2 > ... with cumulative weights
    // C_j = mu{ |f| >= u_j }; E_f(alpha) = C_j for alpha in [u_{j+1}, u_j)
    std::vector<size_t> order(f.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return std::abs(f.value[i]) > std::abs(f.value[j]);
    });

    double cum = 0.0;
    double norm_r = 0.0;   // sum C_j^{r/p} (u_j^r - u_{j+1}^r)
    double norm_inf = 0.0; // max u_j C_j^{1/p}
    size_t i = 0;
    while (i < order.size()) {
        const double u = std::abs(f.value[order[i]]);
        if (u == 0.0) break;
        while (i < order.size() && std::abs(f.value[order[i]]) == u)
            cum += f.weight[order[i++]];
        double u_next = 0.0;
        if (i < order.size()) u_next = std::abs(f.value[order[i]]);
        if (std::isinf(r)) {
            norm_inf = std::max(norm_inf, u * std::pow(cum, 1.0 / p));
        } else {
            norm_r += std::pow(cum, r / p) *
                      (std::pow(u, r) - std::pow(u_next, r));
        }
    }
    out.value = std::isinf(r) ? norm_inf : std::pow(norm_r, 1.0 / r);
    return out;
}

void field_to_csv(const SampledField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write " + path);
    std::fprintf(fp, "point_id,value,weight\n");
    for (size_t i = 0; i < f.size(); ++i)
        std::fprintf(fp, "%lld,%.17g,%.17g\n", (long long)f.id[i], f.value[i],
                     f.weight[i]);
    std::fclose(fp);
}

SampledField field_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    SampledField f;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long long pid;
        double v, w;
        if (sscanf(line.c_str(), "%lld,%lf,%lf", &pid, &v, &w) != 3)
            throw std::runtime_error("bad field row: " + line);
        f.push(pid, v, w);
    }
    return f;
}

}  // namespace maxlab
