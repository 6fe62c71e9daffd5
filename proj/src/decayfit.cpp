#include "latticewave/decayfit.hpp"

#include <algorithm>
#include <cmath>

namespace lw {

std::vector<double> running_envelope(const std::vector<double>& m, int window) {
    if (window <= 1) return m;
    int half = window / 2;
    std::vector<double> out(m.size());
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
        double mx = 0;
        for (int j = std::max(0, i - half); j <= std::min<int>(m.size() - 1, i + half); ++j)
            mx = std::max(mx, m[j]);
        out[i] = mx;
    }
    return out;
}

DecayFit fit_decay(const DecaySamples& samples, const FitOptions& opts) {
    if (samples.t.size() != samples.magnitude.size())
        throw DimensionMismatch("decay sample lengths");

    std::vector<double> mag = running_envelope(samples.magnitude, opts.envelope_window);

    std::vector<double> lt, llt, lm;
    for (std::size_t i = 0; i < samples.t.size(); ++i) {
        if (samples.t[i] < opts.t_min || mag[i] <= 0) continue;
        lt.push_back(std::log(samples.t[i]));
        llt.push_back(std::log(std::log(samples.t[i])));
        lm.push_back(std::log(mag[i]));
    }
    if (lt.size() < 8) throw InsufficientRange("fewer than 8 usable samples");
    double span = std::exp(lt.back() - lt.front());
    if (span < 4.0 - 1e-9) throw InsufficientRange("t range spans a factor " + std::to_string(span));

    DecayFit fit;
    for (int p : opts.p_candidates) {
        // least squares of (lm - p llt) = logC + beta lt
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(lt.size());
        for (std::size_t i = 0; i < lt.size(); ++i) {
            double y = lm[i] - p * llt[i];
            sx += lt[i];
            sy += y;
            sxx += lt[i] * lt[i];
            sxy += lt[i] * y;
        }
        ModelFit mf;
        mf.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        mf.logC = (sy - mf.beta * sx) / n;
        double ss = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) {
            double r = lm[i] - p * llt[i] - mf.logC - mf.beta * lt[i];
            ss += r * r;
        }
        mf.rms = std::sqrt(ss / n);
        fit.models[p] = mf;
    }

    int best = opts.p_candidates.front();
    for (int p : opts.p_candidates)
        if (fit.models[p].rms < fit.models[best].rms) best = p;

    int selected = best;
    fit.p_resolved = true;
    if (best != 0 && fit.models.count(0)) {
        if (!(fit.models[best].rms <= 0.5 * fit.models[0].rms)) {
            selected = 0;
            fit.p_resolved = false;
            fit.note = "log power not resolved (no 2x residual dominance)";
        }
    }
    fit.p = selected;
    fit.beta = fit.models[selected].beta;
    fit.logC = fit.models[selected].logC;
    return fit;
}

}  // namespace lw
