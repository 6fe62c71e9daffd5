#pragma once

#include <map>
#include <string>
#include <vector>

#include "latticewave/errors.hpp"

namespace lw {

struct DecaySamples {
    std::vector<double> t;          // increasing, positive
    std::vector<double> magnitude;  // nonnegative
    std::string tag;
};

struct FitOptions {
    std::vector<int> p_candidates{0, 1, 2};
    double t_min = 8.0;
    int envelope_window = 0;  // 0: raw; k>0: centered running max over k samples
};

struct ModelFit {
    double beta = 0.0;
    double logC = 0.0;
    double rms = 0.0;
};

// Fit of log m = logC + beta log t + p log log t per candidate p. A log power
// p >= 1 is only claimed when its residual beats the p = 0 model by 2x.
struct DecayFit {
    double beta = 0.0;
    int p = 0;
    double logC = 0.0;
    std::map<int, ModelFit> models;
    bool p_resolved = true;
    std::string note;
};

DecayFit fit_decay(const DecaySamples& samples, const FitOptions& opts = {});

// Centered running maximum, the envelope used for oscillating |G| samples.
std::vector<double> running_envelope(const std::vector<double>& m, int window);

}  // namespace lw
