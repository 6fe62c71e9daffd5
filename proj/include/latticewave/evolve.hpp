#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "latticewave/dispersion.hpp"
#include "latticewave/errors.hpp"

namespace lw {

// Periodic box sample of a field on (Z/L)^d, real or complex storage.
class LatticeField {
  public:
    LatticeField() = default;
    LatticeField(int d, int L, bool complex_samples = false, double mass = 0.0);

    static LatticeField delta(int d, int L, double mass = 0.0);

    int d() const { return d_; }
    int L() const { return L_; }
    double mass() const { return mass_; }
    bool is_complex() const { return complex_; }
    std::size_t sites() const { return sites_; }

    std::vector<double>& real_data() { return re_; }
    const std::vector<double>& real_data() const { return re_; }
    std::vector<std::complex<double>>& cplx_data() { return cx_; }
    const std::vector<std::complex<double>>& cplx_data() const { return cx_; }

    std::complex<double> at(std::size_t i) const { return complex_ ? cx_[i] : std::complex<double>(re_[i], 0.0); }
    // periodic site lookup
    std::size_t index(const std::vector<long>& x) const;
    std::complex<double> value(const std::vector<long>& x) const { return at(index(x)); }

    double lp_norm(double p) const;  // p in [1, inf]; p = inf gives the sup norm
    double l2_norm() const { return lp_norm(2.0); }

  private:
    int d_ = 0, L_ = 0;
    bool complex_ = false;
    double mass_ = 0.0;
    std::size_t sites_ = 0;
    std::vector<double> re_;
    std::vector<std::complex<double>> cx_;
};

struct EvolutionState {
    LatticeField u;
    LatticeField ut;
    double t = 0.0;
};

// Discrete energy |u_t|_2^2 + sum_edges |u(x) - u(y)|^2.
double field_energy(const EvolutionState& s);

// Exact-in-time evolution: u-hat = cos(t w) g-hat + sin(t w)/w f-hat, with the
// zero mode of the second multiplier continued by t. check_box enforces the
// periodic-image guard L >= 2(|t| + 8) used for pointwise lattice comparisons.
EvolutionState linear_propagate(const LatticeField& g, const LatticeField& f, double t,
                                bool check_box = false);

// e^{i sign t D} on a complex field.
LatticeField half_wave(const LatticeField& f, double t, int sign);

// Fourier multiplier omega (the operator D).
LatticeField apply_D(const LatticeField& f);

struct InvDResult {
    LatticeField field;
    bool mean_warning = false;  // zero mode of the input was not negligible
};
InvDResult inv_D(const LatticeField& f);

struct NonlinearOptions {
    int k = 4;          // F(u) = |u|^{k-1} u; k = 0 switches the source off
    double dt = 0.1;
    double blowup_cap = 1e6;
    int snapshot_stride = 1;  // steps between snapshot callbacks
};

// Strang splitting with the exact linear flow; snapshots are delivered
// through the callback (the t=0 state included).
void nonlinear_solve(const LatticeField& g, const LatticeField& f, double T,
                     const NonlinearOptions& opts,
                     const std::function<void(const EvolutionState&)>& on_snapshot);

// Convenience wrapper collecting all snapshots (small boxes only).
std::vector<EvolutionState> nonlinear_solve_collect(const LatticeField& g, const LatticeField& f,
                                                    double T, const NonlinearOptions& opts);

// Lean observer variant for large boxes: the kick is applied in place and the
// observer reads the raw real-space samples of u at snapshot times.
void nonlinear_solve_observe(const LatticeField& g, const LatticeField& f, double T,
                             const NonlinearOptions& opts,
                             const std::function<void(double, const double*, std::size_t)>& observe);

// sin(tD)/D applied to f for each time in `times` (forward transform done
// once); the visitor reads the raw real-space samples.
void sine_propagator_sweep(const LatticeField& f, const std::vector<double>& times,
                           const std::function<void(double, const double*, std::size_t)>& visit);

struct MixedNormReport {
    double q = 2, r = 2;
    std::vector<double> times;
    std::vector<double> lr_norms;
    double value = 0.0;  // L^q_t l^r over the sampled window
};

MixedNormReport mixed_norm(const std::vector<double>& times, const std::vector<double>& lr_norms,
                           double q, double r);
MixedNormReport mixed_norm(const std::vector<EvolutionState>& traj, double q, double r);

struct LplqRow {
    double t = 0;
    double norm = 0;        // |u(t)|_q
    double normalized = 0;  // |u(t)|_q (1+t)^target / log-correction
};

struct LplqTable {
    double p = 1, q = 2;
    double target_exponent = 0;
    bool log_corrected = false;
    std::vector<LplqRow> rows;
    double envelope_slope = 0.0;  // log-log slope of the normalized envelope
    bool bounded = false;
};

// Decay targets: q = 2 conserves; otherwise zeta_q = sigma_d (1 - 2/q) with
// sigma = 3/4, 7/6, 3/2 for d = 2, 3, 4; the d = 4 sup norm carries a log.
double lplq_target_exponent(int d, double p, double q, bool& log_corrected);

LplqTable lplq_experiment(int d, int L, double p, double q, double T, double dt_sample,
                          const LatticeField* f0 = nullptr);

// Flat binary field format: int32 d, int32 L, int32 complex flag, float64
// mass, then row-major samples (re or re/im pairs).
void write_field(const LatticeField& f, const std::string& path);
LatticeField read_field(const std::string& path);

}  // namespace lw
