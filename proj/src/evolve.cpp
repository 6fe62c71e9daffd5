#include "latticewave/evolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

namespace lw {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Apply body(flat_index, omega) over the half-complex r2c mode set.
template <class F>
void for_each_mode_half(int d, int L, double mass, F&& body) {
    const int last = L / 2 + 1;
    std::vector<double> s4(L);
    for (int k = 0; k < L; ++k) {
        double s = std::sin(kPi * k / L);
        s4[k] = 4.0 * s * s;
    }
    std::vector<int> idx(d, 0);
    std::size_t flat = 0;
    const double m2 = mass * mass;
    while (true) {
        double acc = m2;
        for (int j = 0; j < d; ++j) acc += s4[idx[j]];
        body(flat, std::sqrt(acc));
        ++flat;
        int j = d - 1;
        for (; j >= 0; --j) {
            int lim = (j == d - 1) ? last : L;
            if (++idx[j] < lim) break;
            idx[j] = 0;
        }
        if (j < 0) break;
    }
}

template <class F>
void for_each_mode_full(int d, int L, double mass, F&& body) {
    std::vector<double> s4(L);
    for (int k = 0; k < L; ++k) {
        double s = std::sin(kPi * k / L);
        s4[k] = 4.0 * s * s;
    }
    std::vector<int> idx(d, 0);
    std::size_t flat = 0;
    const double m2 = mass * mass;
    while (true) {
        double acc = m2;
        for (int j = 0; j < d; ++j) acc += s4[idx[j]];
        body(flat, std::sqrt(acc));
        ++flat;
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++idx[j] < L) break;
            idx[j] = 0;
        }
        if (j < 0) break;
    }
}

std::size_t half_modes(int d, int L) { return ipow(L, d - 1) * (L / 2 + 1); }

// RAII plan pair for repeated r2c/c2r transforms on shared buffers.
struct RealFft {
    int d, L;
    std::size_t n_real, n_half;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    RealFft(int d_, int L_) : d(d_), L(L_) {
        n_real = ipow(L, d);
        n_half = half_modes(d, L);
        real_buf = fftw_alloc_real(n_real);
        cplx_buf = fftw_alloc_complex(n_half);
        std::vector<int> dims(d, L);
        fwd = fftw_plan_dft_r2c(d, dims.data(), real_buf, cplx_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(d, dims.data(), cplx_buf, real_buf, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw TooLarge("FFTW plan creation failed");
    }
    ~RealFft() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }

    void forward(const double* in, std::complex<double>* out) {
        std::memcpy(real_buf, in, n_real * sizeof(double));
        fftw_execute(fwd);
        std::memcpy(static_cast<void*>(out), cplx_buf, n_half * sizeof(fftw_complex));
    }
    // destroys nothing; c2r scrambles its input so we copy in first
    void backward(const std::complex<double>* in, double* out) {
        std::memcpy(cplx_buf, static_cast<const void*>(in), n_half * sizeof(fftw_complex));
        fftw_execute(bwd);
        double scale = 1.0 / static_cast<double>(n_real);
        for (std::size_t i = 0; i < n_real; ++i) out[i] = real_buf[i] * scale;
    }
};

struct CplxFft {
    int d, L;
    std::size_t n;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    CplxFft(int d_, int L_) : d(d_), L(L_) {
        n = ipow(L, d);
        buf = fftw_alloc_complex(n);
        std::vector<int> dims(d, L);
        fwd = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw TooLarge("FFTW plan creation failed");
    }
    ~CplxFft() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }

    void forward(const std::complex<double>* in, std::complex<double>* out) {
        std::memcpy(buf, static_cast<const void*>(in), n * sizeof(fftw_complex));
        fftw_execute(fwd);
        std::memcpy(static_cast<void*>(out), buf, n * sizeof(fftw_complex));
    }
    void backward(const std::complex<double>* in, std::complex<double>* out) {
        std::memcpy(buf, static_cast<const void*>(in), n * sizeof(fftw_complex));
        fftw_execute(bwd);
        double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::complex<double>(buf[i][0], buf[i][1]) * scale;
    }
};

}  // namespace

LatticeField::LatticeField(int d, int L, bool complex_samples, double mass)
    : d_(d), L_(L), complex_(complex_samples), mass_(mass), sites_(ipow(L, d)) {
    if (complex_)
        cx_.assign(sites_, {0.0, 0.0});
    else
        re_.assign(sites_, 0.0);
}

LatticeField LatticeField::delta(int d, int L, double mass) {
    LatticeField f(d, L, false, mass);
    f.re_[0] = 1.0;
    return f;
}

std::size_t LatticeField::index(const std::vector<long>& x) const {
    if (static_cast<int>(x.size()) != d_) throw DimensionMismatch("field index arity");
    std::size_t flat = 0;
    for (int j = 0; j < d_; ++j) {
        long w = x[j] % L_;
        if (w < 0) w += L_;
        flat = flat * L_ + static_cast<std::size_t>(w);
    }
    return flat;
}

double LatticeField::lp_norm(double p) const {
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0;
        for (std::size_t i = 0; i < sites_; ++i) m = std::max(m, std::abs(at(i)));
        return m;
    }
    if (p < 1) throw NotApplicable("lp norm needs p >= 1");
    long double acc = 0;
    for (std::size_t i = 0; i < sites_; ++i) acc += std::pow(std::abs(at(i)), static_cast<long double>(p));
    return static_cast<double>(std::pow(acc, 1.0L / p));
}

double field_energy(const EvolutionState& s) {
    const LatticeField& u = s.u;
    const int d = u.d(), L = u.L();
    long double e = 0;
    for (std::size_t i = 0; i < u.sites(); ++i) e += std::norm(s.ut.at(i));
    std::vector<long> x(d, 0);
    std::vector<long> y(d, 0);
    std::vector<int> idx(d, 0);
    while (true) {
        for (int j = 0; j < d; ++j) x[j] = idx[j];
        auto ux = u.value(x);
        for (int j = 0; j < d; ++j) {
            y = x;
            y[j] = (x[j] + 1) % L;
            e += std::norm(u.value(y) - ux);
        }
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++idx[j] < L) break;
            idx[j] = 0;
        }
        if (j < 0) break;
    }
    return static_cast<double>(e);
}

EvolutionState linear_propagate(const LatticeField& g, const LatticeField& f, double t,
                                bool check_box) {
    if (g.d() != f.d() || g.L() != f.L()) throw DimensionMismatch("field shape mismatch");
    const int d = f.d(), L = f.L();
    const double mass = f.mass();
    if (check_box && L < 2.0 * (std::abs(t) + 8.0))
        throw BoxTooSmall("pointwise comparison needs L >= 2(|t|+8)");

    EvolutionState out;
    out.t = t;

    if (!g.is_complex() && !f.is_complex()) {
        RealFft fft(d, L);
        std::vector<std::complex<double>> gh(fft.n_half), fh(fft.n_half), uh(fft.n_half),
            vh(fft.n_half);
        fft.forward(g.real_data().data(), gh.data());
        fft.forward(f.real_data().data(), fh.data());
        for_each_mode_half(d, L, mass, [&](std::size_t i, double w) {
            double c = std::cos(t * w);
            double s = w < 1e-14 ? t : std::sin(t * w) / w;
            double ws = w < 1e-14 ? 0.0 : w * std::sin(t * w);
            uh[i] = c * gh[i] + s * fh[i];
            vh[i] = -ws * gh[i] + c * fh[i];
        });
        out.u = LatticeField(d, L, false, mass);
        out.ut = LatticeField(d, L, false, mass);
        fft.backward(uh.data(), out.u.real_data().data());
        fft.backward(vh.data(), out.ut.real_data().data());
        return out;
    }

    // complex path: promote as needed
    CplxFft fft(d, L);
    std::vector<std::complex<double>> gh(fft.n), fh(fft.n), uh(fft.n), vh(fft.n);
    {
        std::vector<std::complex<double>> tmp(fft.n);
        for (std::size_t i = 0; i < fft.n; ++i) tmp[i] = g.at(i);
        fft.forward(tmp.data(), gh.data());
        for (std::size_t i = 0; i < fft.n; ++i) tmp[i] = f.at(i);
        fft.forward(tmp.data(), fh.data());
    }
    for_each_mode_full(d, L, mass, [&](std::size_t i, double w) {
        double c = std::cos(t * w);
        double s = w < 1e-14 ? t : std::sin(t * w) / w;
        double ws = w < 1e-14 ? 0.0 : w * std::sin(t * w);
        uh[i] = c * gh[i] + s * fh[i];
        vh[i] = -ws * gh[i] + c * fh[i];
    });
    out.u = LatticeField(d, L, true, mass);
    out.ut = LatticeField(d, L, true, mass);
    fft.backward(uh.data(), out.u.cplx_data().data());
    fft.backward(vh.data(), out.ut.cplx_data().data());
    return out;
}

LatticeField half_wave(const LatticeField& f, double t, int sign) {
    const int d = f.d(), L = f.L();
    CplxFft fft(d, L);
    std::vector<std::complex<double>> fh(fft.n);
    {
        std::vector<std::complex<double>> tmp(fft.n);
        for (std::size_t i = 0; i < fft.n; ++i) tmp[i] = f.at(i);
        fft.forward(tmp.data(), fh.data());
    }
    for_each_mode_full(d, L, f.mass(), [&](std::size_t i, double w) {
        double ph = sign >= 0 ? t * w : -t * w;
        fh[i] *= std::complex<double>(std::cos(ph), std::sin(ph));
    });
    LatticeField out(d, L, true, f.mass());
    fft.backward(fh.data(), out.cplx_data().data());
    return out;
}

LatticeField apply_D(const LatticeField& f) {
    const int d = f.d(), L = f.L();
    if (!f.is_complex()) {
        RealFft fft(d, L);
        std::vector<std::complex<double>> fh(fft.n_half);
        fft.forward(f.real_data().data(), fh.data());
        for_each_mode_half(d, L, f.mass(), [&](std::size_t i, double w) { fh[i] *= w; });
        LatticeField out(d, L, false, f.mass());
        fft.backward(fh.data(), out.real_data().data());
        return out;
    }
    CplxFft fft(d, L);
    std::vector<std::complex<double>> fh(fft.n);
    {
        std::vector<std::complex<double>> tmp(fft.n);
        for (std::size_t i = 0; i < fft.n; ++i) tmp[i] = f.at(i);
        fft.forward(tmp.data(), fh.data());
    }
    for_each_mode_full(d, L, f.mass(), [&](std::size_t i, double w) { fh[i] *= w; });
    LatticeField out(d, L, true, f.mass());
    fft.backward(fh.data(), out.cplx_data().data());
    return out;
}

InvDResult inv_D(const LatticeField& f) {
    const int d = f.d(), L = f.L();
    InvDResult res;
    double l1 = f.lp_norm(1.0);
    if (!f.is_complex()) {
        RealFft fft(d, L);
        std::vector<std::complex<double>> fh(fft.n_half);
        fft.forward(f.real_data().data(), fh.data());
        res.mean_warning = std::abs(fh[0]) > 1e-12 * std::max(l1, 1e-300);
        for_each_mode_half(d, L, f.mass(), [&](std::size_t i, double w) {
            fh[i] = (i == 0 && f.mass() == 0.0) ? std::complex<double>(0, 0) : fh[i] / w;
        });
        res.field = LatticeField(d, L, false, f.mass());
        fft.backward(fh.data(), res.field.real_data().data());
        return res;
    }
    CplxFft fft(d, L);
    std::vector<std::complex<double>> fh(fft.n);
    {
        std::vector<std::complex<double>> tmp(fft.n);
        for (std::size_t i = 0; i < fft.n; ++i) tmp[i] = f.at(i);
        fft.forward(tmp.data(), fh.data());
    }
    res.mean_warning = std::abs(fh[0]) > 1e-12 * std::max(l1, 1e-300);
    for_each_mode_full(d, L, f.mass(), [&](std::size_t i, double w) {
        fh[i] = (i == 0 && f.mass() == 0.0) ? std::complex<double>(0, 0) : fh[i] / w;
    });
    res.field = LatticeField(d, L, true, f.mass());
    fft.backward(fh.data(), res.field.cplx_data().data());
    return res;
}

void nonlinear_solve(const LatticeField& g, const LatticeField& f, double T,
                     const NonlinearOptions& opts,
                     const std::function<void(const EvolutionState&)>& on_snapshot) {
    if (g.is_complex() || f.is_complex()) throw NotApplicable("nonlinear_solve uses real data");
    if (g.d() != f.d() || g.L() != f.L()) throw DimensionMismatch("field shape mismatch");
    if (opts.dt <= 0 || T < 0) throw NotApplicable("need dt > 0, T >= 0");
    if (opts.k != 0 && opts.k < 3) throw NotApplicable("power nonlinearity needs k >= 3");
    const int d = f.d(), L = f.L();
    const double mass = f.mass();

    RealFft fft(d, L);
    const std::size_t nh = fft.n_half, nr = fft.n_real;

    // cached half-step multipliers
    std::vector<double> cos_h(nh), sinc_h(nh), wsin_h(nh);
    const double a = opts.dt / 2.0;
    for_each_mode_half(d, L, mass, [&](std::size_t i, double w) {
        cos_h[i] = std::cos(a * w);
        sinc_h[i] = w < 1e-14 ? a : std::sin(a * w) / w;
        wsin_h[i] = w < 1e-14 ? 0.0 : w * std::sin(a * w);
    });

    std::vector<std::complex<double>> uh(nh), vh(nh);
    fft.forward(g.real_data().data(), uh.data());
    fft.forward(f.real_data().data(), vh.data());

    std::vector<double> u_real(nr), kick(nr);
    std::vector<std::complex<double>> kick_h(nh);

    auto half_step = [&]() {
        for (std::size_t i = 0; i < nh; ++i) {
            auto un = cos_h[i] * uh[i] + sinc_h[i] * vh[i];
            auto vn = -wsin_h[i] * uh[i] + cos_h[i] * vh[i];
            uh[i] = un;
            vh[i] = vn;
        }
    };

    auto emit = [&](double t) {
        EvolutionState s;
        s.t = t;
        s.u = LatticeField(d, L, false, mass);
        s.ut = LatticeField(d, L, false, mass);
        fft.backward(uh.data(), s.u.real_data().data());
        fft.backward(vh.data(), s.ut.real_data().data());
        on_snapshot(s);
    };

    emit(0.0);
    const long steps = static_cast<long>(std::llround(T / opts.dt));
    for (long step = 0; step < steps; ++step) {
        half_step();
        if (opts.k != 0) {
            fft.backward(uh.data(), u_real.data());
            double sup = 0;
            for (std::size_t i = 0; i < nr; ++i) {
                double v = u_real[i];
                sup = std::max(sup, std::abs(v));
                kick[i] = std::pow(std::abs(v), opts.k - 1) * v;
            }
            if (sup > opts.blowup_cap)
                throw Blowup("nonlinear_solve: |u|_inf = " + std::to_string(sup));
            fft.forward(kick.data(), kick_h.data());
            for (std::size_t i = 0; i < nh; ++i) vh[i] += opts.dt * kick_h[i];
        }
        half_step();
        if ((step + 1) % opts.snapshot_stride == 0 || step + 1 == steps)
            emit((step + 1) * opts.dt);
    }
}

std::vector<EvolutionState> nonlinear_solve_collect(const LatticeField& g, const LatticeField& f,
                                                    double T, const NonlinearOptions& opts) {
    std::vector<EvolutionState> traj;
    nonlinear_solve(g, f, T, opts, [&](const EvolutionState& s) { traj.push_back(s); });
    return traj;
}

void nonlinear_solve_observe(const LatticeField& g, const LatticeField& f, double T,
                             const NonlinearOptions& opts,
                             const std::function<void(double, const double*, std::size_t)>& observe) {
    if (g.is_complex() || f.is_complex()) throw NotApplicable("nonlinear_solve uses real data");
    if (g.d() != f.d() || g.L() != f.L()) throw DimensionMismatch("field shape mismatch");
    const int d = f.d(), L = f.L();
    const double mass = f.mass();

    RealFft fft(d, L);
    const std::size_t nh = fft.n_half, nr = fft.n_real;

    std::vector<double> cos_h(nh), sinc_h(nh), wsin_h(nh);
    const double a = opts.dt / 2.0;
    for_each_mode_half(d, L, mass, [&](std::size_t i, double w) {
        cos_h[i] = std::cos(a * w);
        sinc_h[i] = w < 1e-14 ? a : std::sin(a * w) / w;
        wsin_h[i] = w < 1e-14 ? 0.0 : w * std::sin(a * w);
    });

    std::vector<std::complex<double>> uh(nh), vh(nh);
    fft.forward(g.real_data().data(), uh.data());
    fft.forward(f.real_data().data(), vh.data());

    auto half_step = [&]() {
        for (std::size_t i = 0; i < nh; ++i) {
            auto un = cos_h[i] * uh[i] + sinc_h[i] * vh[i];
            auto vn = -wsin_h[i] * uh[i] + cos_h[i] * vh[i];
            uh[i] = un;
            vh[i] = vn;
        }
    };

    // u realized in the plan's own real buffer; the kick overwrites it and the
    // transform result is accumulated directly into vh.
    auto realize_u = [&]() {
        std::memcpy(fft.cplx_buf, static_cast<const void*>(uh.data()), nh * sizeof(fftw_complex));
        fftw_execute(fft.bwd);
        double scale = 1.0 / static_cast<double>(nr);
        for (std::size_t i = 0; i < nr; ++i) fft.real_buf[i] *= scale;
    };

    realize_u();
    observe(0.0, fft.real_buf, nr);
    const long steps = static_cast<long>(std::llround(T / opts.dt));
    for (long step = 0; step < steps; ++step) {
        half_step();
        if (opts.k != 0) {
            realize_u();
            double sup = 0;
            for (std::size_t i = 0; i < nr; ++i) {
                double v = fft.real_buf[i];
                sup = std::max(sup, std::abs(v));
                fft.real_buf[i] = std::pow(std::abs(v), opts.k - 1) * v;
            }
            if (sup > opts.blowup_cap)
                throw Blowup("nonlinear_solve: |u|_inf = " + std::to_string(sup));
            fftw_execute(fft.fwd);
            for (std::size_t i = 0; i < nh; ++i)
                vh[i] += opts.dt * std::complex<double>(fft.cplx_buf[i][0], fft.cplx_buf[i][1]);
        }
        half_step();
        if ((step + 1) % opts.snapshot_stride == 0 || step + 1 == steps) {
            realize_u();
            observe((step + 1) * opts.dt, fft.real_buf, nr);
        }
    }
}

void sine_propagator_sweep(const LatticeField& f, const std::vector<double>& times,
                           const std::function<void(double, const double*, std::size_t)>& visit) {
    if (f.is_complex()) throw NotApplicable("sweep expects a real field");
    const int d = f.d(), L = f.L();
    RealFft fft(d, L);
    std::vector<std::complex<double>> fh(fft.n_half);
    fft.forward(f.real_data().data(), fh.data());
    std::vector<double> omegas(fft.n_half);
    for_each_mode_half(d, L, f.mass(), [&](std::size_t i, double w) { omegas[i] = w; });
    for (double t : times) {
        for (std::size_t i = 0; i < fft.n_half; ++i) {
            double w = omegas[i];
            double s = w < 1e-14 ? t : std::sin(t * w) / w;
            fft.cplx_buf[i][0] = s * fh[i].real();
            fft.cplx_buf[i][1] = s * fh[i].imag();
        }
        fftw_execute(fft.bwd);
        double scale = 1.0 / static_cast<double>(fft.n_real);
        for (std::size_t i = 0; i < fft.n_real; ++i) fft.real_buf[i] *= scale;
        visit(t, fft.real_buf, fft.n_real);
    }
}

MixedNormReport mixed_norm(const std::vector<double>& times, const std::vector<double>& lr_norms,
                           double q, double r) {
    if (times.size() != lr_norms.size() || times.empty())
        throw DimensionMismatch("mixed_norm input lengths");
    MixedNormReport rep;
    rep.q = q;
    rep.r = r;
    rep.times = times;
    rep.lr_norms = lr_norms;
    if (q == std::numeric_limits<double>::infinity()) {
        rep.value = *std::max_element(lr_norms.begin(), lr_norms.end());
        return rep;
    }
    long double acc = 0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double dt = times[i + 1] - times[i];
        acc += 0.5 * dt * (std::pow(lr_norms[i], q) + std::pow(lr_norms[i + 1], q));
    }
    rep.value = static_cast<double>(std::pow(acc, 1.0L / q));
    return rep;
}

MixedNormReport mixed_norm(const std::vector<EvolutionState>& traj, double q, double r) {
    std::vector<double> ts, ns;
    for (const auto& s : traj) {
        ts.push_back(s.t);
        ns.push_back(s.u.lp_norm(r));
    }
    return mixed_norm(ts, ns, q, r);
}

double lplq_target_exponent(int d, double p, double q, bool& log_corrected) {
    log_corrected = false;
    if (q == 2.0) return 0.0;
    double sigma;
    switch (d) {
        case 2: sigma = 0.75; break;
        case 3: sigma = 7.0 / 6.0; break;
        case 4: sigma = 1.5; break;
        default: throw NotApplicable("lplq targets are tabulated for d = 2, 3, 4");
    }
    (void)p;
    if (q == std::numeric_limits<double>::infinity()) {
        log_corrected = (d == 4);
        return sigma;
    }
    return sigma * (1.0 - 2.0 / q);
}

LplqTable lplq_experiment(int d, int L, double p, double q, double T, double dt_sample,
                          const LatticeField* f0) {
    LatticeField f = f0 ? *f0 : LatticeField::delta(d, L);
    LplqTable table;
    table.p = p;
    table.q = q;
    table.target_exponent = lplq_target_exponent(d, p, q, table.log_corrected);

    RealFft fft(d, L);
    std::vector<std::complex<double>> fh(fft.n_half), uh(fft.n_half);
    fft.forward(f.real_data().data(), fh.data());
    std::vector<double> u(fft.n_real);

    for (double t = dt_sample; t <= T + 1e-9; t += dt_sample) {
        for_each_mode_half(d, L, f.mass(), [&](std::size_t i, double w) {
            double s = w < 1e-14 ? t : std::sin(t * w) / w;
            uh[i] = s * fh[i];
        });
        fft.backward(uh.data(), u.data());
        double norm;
        if (q == std::numeric_limits<double>::infinity()) {
            norm = 0;
            for (double v : u) norm = std::max(norm, std::abs(v));
        } else {
            long double acc = 0;
            for (double v : u) acc += std::pow(std::abs(v), static_cast<long double>(q));
            norm = static_cast<double>(std::pow(acc, 1.0L / q));
        }
        LplqRow row;
        row.t = t;
        row.norm = norm;
        row.normalized = norm * std::pow(1.0 + t, table.target_exponent);
        if (table.log_corrected) row.normalized /= std::log(2.0 + t);
        table.rows.push_back(row);
    }

    // envelope slope of the normalized column over the tail
    std::vector<double> lt, lv;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].t < 4.0) continue;
        double env = 0;
        for (std::size_t j = i >= 2 ? i - 2 : 0; j < std::min(table.rows.size(), i + 3); ++j)
            env = std::max(env, table.rows[j].normalized);
        if (env <= 0) continue;
        lt.push_back(std::log(1.0 + table.rows[i].t));
        lv.push_back(std::log(env));
    }
    if (lt.size() >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sx += lt[i];
            sy += lv[i];
            sxx += lt[i] * lt[i];
            sxy += lt[i] * lv[i];
        }
        double n = static_cast<double>(lt.size());
        table.envelope_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        table.bounded = table.envelope_slope <= 0.05;
    }
    return table;
}

void write_field(const LatticeField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IOError("cannot open " + path);
    std::int32_t hdr[3] = {f.d(), f.L(), f.is_complex() ? 1 : 0};
    double mass = f.mass();
    std::fwrite(hdr, sizeof(hdr), 1, fp);
    std::fwrite(&mass, sizeof(double), 1, fp);
    if (f.is_complex())
        std::fwrite(f.cplx_data().data(), sizeof(std::complex<double>), f.sites(), fp);
    else
        std::fwrite(f.real_data().data(), sizeof(double), f.sites(), fp);
    std::fclose(fp);
}

LatticeField read_field(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IOError("cannot open " + path);
    std::int32_t hdr[3];
    double mass;
    if (std::fread(hdr, sizeof(hdr), 1, fp) != 1 || std::fread(&mass, sizeof(double), 1, fp) != 1) {
        std::fclose(fp);
        throw IOError("truncated field header in " + path);
    }
    LatticeField f(hdr[0], hdr[1], hdr[2] != 0, mass);
    std::size_t want = f.sites();
    std::size_t got = f.is_complex()
                          ? std::fread(f.cplx_data().data(), sizeof(std::complex<double>), want, fp)
                          : std::fread(f.real_data().data(), sizeof(double), want, fp);
    std::fclose(fp);
    if (got != want) throw IOError("truncated field data in " + path);
    return f;
}

}  // namespace lw
