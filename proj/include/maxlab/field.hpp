#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxlab/numerics.hpp"

namespace maxlab {

// Scalar function tabulated on a sample set, with the measure weight of
// each sample. Carrier for f, f_t, indicators 1_E.
struct SampledField {
    std::vector<int64_t> id;
    std::vector<double> value;
    std::vector<double> weight;

    size_t size() const { return value.size(); }
    void push(int64_t i, double v, double w) {
        id.push_back(i);
        value.push_back(v);
        weight.push_back(w);
    }
    double total_weight() const { return pairwise_sum(weight); }
    SampledField scaled(double c) const;
};

// mu{ |f| > alpha }
double level_set_measure(const SampledField& f, double alpha);

struct LorentzNorm {
    double p = 1.0;
    double r = 1.0;  // infinity encoded as INFINITY
    double value = 0.0;
};

// Exact Lorentz (quasi-)norm from the empirical step distribution function;
// r = INFINITY gives sup_alpha alpha E_f(alpha)^{1/p}.
LorentzNorm lorentz_norm(const SampledField& f, double p, double r);

// CSV round trip: columns point_id,value,weight.
void field_to_csv(const SampledField& f, const std::string& path);
SampledField field_from_csv(const std::string& path);

}  // namespace maxlab
