// Batch driver: every experiment is a subcommand with a reproducible config,
// CSV/JSON outputs and a run manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "latticewave/config.hpp"
#include "latticewave/numutil.hpp"
#include "latticewave/csvio.hpp"
#include "latticewave/decayfit.hpp"
#include "latticewave/dispersion.hpp"
#include "latticewave/evolve.hpp"
#include "latticewave/newton.hpp"
#include "latticewave/oscquad.hpp"
#include "latticewave/phase_series.hpp"
#include "latticewave/suites.hpp"
#include "latticewave/threadpool.hpp"

namespace {

using namespace lw;

struct CommonOpts {
    std::string out;
    std::string manifest;
    bool dump_config = false;
    int threads = 1;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "output CSV path");
    cmd->add_option("--manifest", c.manifest, "write a JSON run manifest here");
    cmd->add_flag("--dump-config", c.dump_config, "print the effective config and exit");
    cmd->add_option("--threads", c.threads, "worker threads for independent items")
        ->default_val(1);
    cmd->add_option("--seed", c.seed, "random seed for randomized experiments")->default_val(1);
}

RunConfig snapshot_config(const CLI::App* cmd) {
    RunConfig rc;
    rc.subcommand = cmd->get_name();
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->get_name().empty() || opt->get_name() == "--help") continue;
        std::string key = opt->get_name();
        if (!opt->results().empty()) {
            std::string joined;
            for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ";") + r;
            rc.values[key] = joined;
        } else {
            rc.values[key] = opt->get_default_str();
        }
    }
    return rc;
}

// dump-config prints flat key=value lines that reparse through --config
bool maybe_dump(const CLI::App* cmd, const CommonOpts& c) {
    if (!c.dump_config) return false;
    RunConfig rc = snapshot_config(cmd);
    for (const auto& [k, v] : rc.values) {
        std::string key = k;
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        std::printf("%s=%s\n", key.c_str(), v.c_str());
    }
    return true;
}

std::vector<long> parse_ray(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
    return out;
}

std::vector<double> parse_vec(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

nlohmann::json newton_to_json(const NewtonData& nd) {
    nlohmann::json j;
    j["nvars"] = nd.nvars;
    j["d_S"] = to_string(nd.d_S);
    j["k_S"] = nd.k_S;
    j["varchenko"] = {{"beta", to_string(nd.varchenko.first)}, {"log_power", nd.varchenko.second}};
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : nd.vertices) j["vertices"].push_back(v);
    auto face_json = [](const NewtonFace& f) {
        nlohmann::json fj;
        fj["members"] = nlohmann::json::array();
        for (const auto& m : f.members) fj["members"].push_back(m);
        fj["normal"] = nlohmann::json::array();
        for (const auto& n : f.normal) fj["normal"].push_back(to_string(n));
        fj["support_value"] = to_string(f.support_value);
        fj["dim"] = f.affine_dim;
        fj["compact"] = f.compact;
        if (!f.rays.empty()) fj["rays"] = f.rays;
        return fj;
    };
    j["principal_face"] = face_json(nd.principal);
    if (nd.faces_enumerated) {
        j["compact_faces"] = nlohmann::json::array();
        for (const auto& f : nd.compact_faces) j["compact_faces"].push_back(face_json(f));
    }
    j["certificate_verified"] = nd.certificate.verified;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open " + path);
    out << text << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finish(const CLI::App* cmd, const CommonOpts& c, const Timer& timer,
            const std::vector<std::string>& outputs) {
    if (!c.manifest.empty())
        emit_manifest(snapshot_config(cmd), outputs, timer.seconds(), c.manifest);
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_green(const CLI::App* cmd, const CommonOpts& c, int dim, double mass, std::string ray_s,
              long mmax, double tper, double rtol) {
    Timer timer;
    std::vector<long> ray = parse_ray(ray_s);
    if (static_cast<int>(ray.size()) != dim) throw DimensionMismatch("--ray arity != --dim");
    if (tper <= 0) {
        bool ones = true;
        for (long r : ray)
            if (std::labs(r) != 1) ones = false;
        if (!ones) throw NotApplicable("--tper required for rays other than all-ones");
        tper = std::sqrt(2.0 * dim);
    }
    DispersionRelation rel{dim, mass};
    GreenOptions gopt;
    gopt.rtol = rtol;

    std::string out = c.out.empty() ? "green.csv" : c.out;
    std::ostringstream notes;
    notes << "green, d=" << dim << ", mass=" << mass << ", tper=" << format_double(tper);
    CsvWriter csv(out, "green", notes.str(), {"m", "t", "G"});
    std::vector<std::array<double, 3>> rows(static_cast<std::size_t>(mmax));
    parallel_for(rows.size(), c.threads, [&](std::size_t i) {
        long m = static_cast<long>(i) + 1;
        std::vector<long> x(ray.size());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = m * ray[j];
        double t = m * tper;
        GreenResult g = green_G(rel, x, t, gopt);
        rows[i] = {static_cast<double>(m), t, g.value};
    });
    for (const auto& r : rows) csv.row({r[0], r[1], r[2]});
    std::printf("green: %ld ray points written to %s\n", mmax, out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_oscint(const CLI::App* cmd, const CommonOpts& c, int dim, std::string v_s, double t0,
               double t1, double ratio, double rtol) {
    Timer timer;
    std::vector<double> v = parse_vec(v_s);
    if (static_cast<int>(v.size()) != dim) throw DimensionMismatch("--v arity != --dim");
    DispersionRelation rel{dim, 0.0};
    OscIOptions io;
    io.rtol = rtol;
    auto sched = geometric_schedule(t0, t1, ratio);
    std::string out = c.out.empty() ? "oscint.csv" : c.out;
    CsvWriter csv(out, "oscint", "d=" + std::to_string(dim),
                  {"t", "re", "im", "abs", "abs_singular"});
    std::vector<std::array<double, 5>> rows(sched.size());
    parallel_for(sched.size(), c.threads, [&](std::size_t i) {
        OscIResult r = oscint_I(rel, v, sched[i], io);
        rows[i] = {sched[i], r.value.real(), r.value.imag(), std::abs(r.value),
                   std::abs(r.part_singular)};
    });
    for (const auto& r : rows) csv.row({r[0], r[1], r[2], r[3], r[4]});
    std::printf("oscint: %zu samples written to %s\n", sched.size(), out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_jphase(const CLI::App* cmd, const CommonOpts& c, std::string poly, double t0, double t1,
               double ratio, double radius, double rtol) {
    Timer timer;
    SparsePoly S = parse_poly(poly);
    JOptions jo;
    jo.rtol = rtol;
    jo.amplitude = AmplitudeSpec::separable(radius);
    auto sched = geometric_schedule(t0, t1, ratio);
    std::string out = c.out.empty() ? "jphase.csv" : c.out;
    CsvWriter csv(out, "jphase", "phase=" + poly, {"t", "re", "im", "abs"});
    std::vector<std::array<double, 4>> rows(sched.size());
    parallel_for(sched.size(), c.threads, [&](std::size_t i) {
        QuadratureResult r = oscint_J(S, sched[i], jo);
        rows[i] = {sched[i], r.value.real(), r.value.imag(), std::abs(r.value)};
    });
    for (const auto& r : rows) csv.row({r[0], r[1], r[2], r[3]});

    DecaySamples samples;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        samples.t.push_back(rows[i][0]);
        samples.magnitude.push_back(rows[i][3]);
    }
    DecayFit fit = fit_decay(samples, {});
    std::printf("jphase: fit beta = %.4f, p = %d%s over %zu samples -> %s\n", fit.beta, fit.p,
                fit.p_resolved ? "" : " (log power unresolved)", sched.size(), out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_critical(const CLI::App* cmd, const CommonOpts& c, int dim, std::string v_s, double tol) {
    Timer timer;
    std::vector<double> v = parse_vec(v_s);
    DispersionRelation rel{dim, 0.0};
    auto pts = find_critical_points(rel, v, tol);
    std::string out = c.out.empty() ? "critical.csv" : c.out;
    std::vector<std::string> cols{"label", "corank"};
    for (int j = 0; j < dim; ++j) cols.push_back("xi" + std::to_string(j + 1));
    CsvWriter csv(out, "critical", "d=" + std::to_string(dim), cols);
    for (const auto& cp : pts) {
        std::vector<std::string> row{to_string(cp.label), std::to_string(cp.corank)};
        for (double x : cp.xi) row.push_back(format_double(x));
        csv.row_mixed(row);
    }
    std::printf("critical: %zu points (|v| = %.4f) -> %s\n", pts.size(), norm2(v), out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_b0(const CLI::App* cmd, const CommonOpts& c, int dim, int grid) {
    Timer timer;
    DispersionRelation rel{dim, 0.0};
    B0Estimate e = estimate_b0(rel, grid);
    nlohmann::json j;
    j["d"] = dim;
    j["sup_speed"] = e.sup_speed;
    j["delta"] = e.delta;
    j["converged"] = e.converged;
    j["refinement_change"] = e.refinement_change;
    for (const auto& [name, sup] : e.per_stratum) j["per_stratum"][name] = sup;
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_text(c.out, j.dump(2));
        outputs.push_back(c.out);
    }
    std::printf("b0: d=%d sup|grad omega| over Sigma = %.6f (delta = %.6f, %s)\n", dim, e.sup_speed,
                e.delta, e.converged ? "stable" : "NOT stable");
    finish(cmd, c, timer, outputs);
    return 0;
}

int cmd_newton(const CLI::App* cmd, const CommonOpts& c, std::string poly) {
    Timer timer;
    SparsePoly P = parse_poly(poly);
    NewtonData nd = newton_data(P);
    nlohmann::json j = newton_to_json(nd);
    if (P.nvars() == 2) {
        try {
            j["adapted_2d"] = adapted_check_2d(P);
        } catch (const NotApplicable&) {
        }
    }
    std::string text = j.dump(2);
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_text(c.out, text);
        outputs.push_back(c.out);
    } else {
        std::printf("%s\n", text.c_str());
    }
    std::printf("newton: d_S = %s, k_S = %d\n", to_string(nd.d_S).c_str(), nd.k_S);
    finish(cmd, c, timer, outputs);
    return 0;
}

int cmd_conj(const CLI::App* cmd, const CommonOpts& c, int dim, bool no_fit) {
    Timer timer;
    ConjPhase cp = build_conj_phase(dim);
    std::printf("conj: d=%d  d_S = %s, k_S = %d, containments %s, diagonal %s\n", dim,
                to_string(cp.newton.d_S).c_str(), cp.newton.k_S,
                (cp.t1_ok && cp.t5_ok && cp.t7_ok) ? "ok" : "FAILED", cp.diagonal_ok ? "ok" : "FAILED");
    nlohmann::json j;
    j["d"] = dim;
    j["newton"] = newton_to_json(cp.newton);
    j["t1_containment"] = cp.t1_ok;
    j["t5_containment"] = cp.t5_ok;
    j["t7_containment"] = cp.t7_ok;
    j["diagonal_combination"] = cp.diagonal_ok;
    j["cubic_matches_Y"] = cp.cubic_matches_Y;
    if (!no_fit && (dim == 3 || dim == 5)) {
        ConjSuiteResult fitres = run_conj_suite(dim);
        j["fit_beta"] = fitres.fitted_beta;
        j["target_beta"] = fitres.target_beta;
        j["upper_bound_ok"] = fitres.upper_bound_ok;
        std::printf("conj: fit beta = %.4f (target %.4f)\n", fitres.fitted_beta, fitres.target_beta);
    }
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_text(c.out, j.dump(2));
        outputs.push_back(c.out);
    }
    finish(cmd, c, timer, outputs);
    return 0;
}

int cmd_evolve(const CLI::App* cmd, const CommonOpts& c, int dim, int L, double T, double dt,
               int k, std::string f_path, std::string save_final) {
    Timer timer;
    LatticeField f = f_path.empty() ? LatticeField::delta(dim, L) : read_field(f_path);
    LatticeField g(dim, L);
    std::string out = c.out.empty() ? "evolve.csv" : c.out;
    CsvWriter csv(out, "evolve",
                  "d=" + std::to_string(dim) + ", L=" + std::to_string(L) + ", k=" + std::to_string(k),
                  {"t", "l2", "linf", "energy"});
    NonlinearOptions opts;
    opts.k = k;
    opts.dt = dt;
    opts.snapshot_stride = std::max(1, static_cast<int>(std::llround(1.0 / dt)));
    LatticeField final_u;
    nonlinear_solve(g, f, T, opts, [&](const EvolutionState& s) {
        csv.row({s.t, s.u.l2_norm(), s.u.lp_norm(std::numeric_limits<double>::infinity()),
                 field_energy(s)});
        final_u = s.u;
    });
    std::vector<std::string> outputs{out};
    if (!save_final.empty()) {
        write_field(final_u, save_final);
        outputs.push_back(save_final);
    }
    std::printf("evolve: T=%g done -> %s\n", T, out.c_str());
    finish(cmd, c, timer, outputs);
    return 0;
}

int cmd_lplq(const CLI::App* cmd, const CommonOpts& c, int dim, int L, double p, double q,
             double T, double dt) {
    Timer timer;
    double qq = q <= 0 ? std::numeric_limits<double>::infinity() : q;
    LplqTable tab = lplq_experiment(dim, L, p, qq, T, dt);
    std::string out = c.out.empty() ? "lplq.csv" : c.out;
    std::ostringstream notes;
    notes << "d=" << dim << ", L=" << L << ", p=" << p << ", q=" << (q <= 0 ? 0.0 : q)
          << ", target=" << format_double(tab.target_exponent)
          << (tab.log_corrected ? ", log-corrected" : "");
    CsvWriter csv(out, "lplq", notes.str(), {"t", "norm", "normalized"});
    for (const auto& r : tab.rows) csv.row({r.t, r.norm, r.normalized});
    std::printf("lplq: envelope slope %.4f -> %s (%s)\n", tab.envelope_slope, out.c_str(),
                tab.bounded ? "bounded" : "NOT bounded");
    finish(cmd, c, timer, {out});
    return tab.bounded ? 0 : 3;
}

int cmd_strichartz(const CLI::App* cmd, const CommonOpts& c, int dim, int L, int count, double T,
                   double dt) {
    Timer timer;
    StrichartzResult r = strichartz_experiment(dim, L, count, T, dt, c.seed);
    std::string out = c.out.empty() ? "strichartz.csv" : c.out;
    CsvWriter csv(out, "strichartz", "d=" + std::to_string(dim) + ", L=" + std::to_string(L),
                  {"trial", "ratio"});
    for (std::size_t i = 0; i < r.ratios.size(); ++i)
        csv.row({static_cast<double>(i), r.ratios[i]});
    std::printf("strichartz: max ratio %.4f, median %.4f over %zu trials -> %s\n", r.max_ratio,
                r.median_ratio, r.ratios.size(), out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_nonlinear(const CLI::App* cmd, const CommonOpts& c, int dim, int L, int k, double fl1,
                  double T, double dt) {
    Timer timer;
    std::vector<double> samples;
    for (double t = 1.0; t <= T + 1e-9; t += std::max(dt, 1.0)) samples.push_back(t);
    NonlinearTrackResult r = nonlinear_tracking_experiment(dim, L, k, fl1, T, dt, samples);
    std::string out = c.out.empty() ? "nonlinear.csv" : c.out;
    CsvWriter csv(out, "nonlinear",
                  "d=" + std::to_string(dim) + ", k=" + std::to_string(k) + ", |f|_1=" +
                      format_double(fl1),
                  {"t", "sup_nonlinear", "sup_linear"});
    for (std::size_t i = 0; i < r.times.size(); ++i)
        csv.row({r.times[i], r.nonlinear_sup[i], r.linear_sup[i]});
    std::printf("nonlinear: max deviation factor vs linear = %.6f -> %s\n", r.max_factor,
                out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

int cmd_decay_fit(const CLI::App* cmd, const CommonOpts& c, std::string in_path, double t_min,
                  int envelope) {
    Timer timer;
    std::ifstream in(in_path);
    if (!in) throw IOError("cannot open " + in_path);
    DecaySamples s;
    s.tag = in_path;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        try {
            double t = std::stod(a), m = std::stod(b);
            s.t.push_back(t);
            s.magnitude.push_back(m);
        } catch (...) {
            continue;  // header row
        }
    }
    FitOptions fo;
    fo.t_min = t_min;
    fo.envelope_window = envelope;
    DecayFit fit = fit_decay(s, fo);
    nlohmann::json j;
    j["beta"] = fit.beta;
    j["p"] = fit.p;
    j["logC"] = fit.logC;
    j["p_resolved"] = fit.p_resolved;
    for (const auto& [p, m] : fit.models)
        j["models"][std::to_string(p)] = {{"beta", m.beta}, {"logC", m.logC}, {"rms", m.rms}};
    std::vector<std::string> outputs;
    if (!c.out.empty()) {
        write_text(c.out, j.dump(2));
        outputs.push_back(c.out);
    }
    std::printf("decay-fit: beta = %.5f, p = %d%s\n", fit.beta, fit.p,
                fit.p_resolved ? "" : " (unresolved)");
    finish(cmd, c, timer, outputs);
    return 0;
}

int cmd_table1(const CLI::App* cmd, const CommonOpts& c, int dim) {
    Timer timer;
    auto rows = run_table1_suite(dim);
    std::string out = c.out.empty() ? "table1.csv" : c.out;
    CsvWriter csv(out, "table1", "d=" + std::to_string(dim),
                  {"stratum", "target_beta", "fitted_beta", "selected_p", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        csv.row_mixed({r.name, format_double(r.target_beta), format_double(r.fitted_beta),
                       std::to_string(r.selected_p), r.pass ? "1" : "0"});
        std::printf("table1 %-16s target %.4f fitted %.4f  %s\n", r.name.c_str(), r.target_beta,
                    r.fitted_beta, r.pass ? "PASS" : "FAIL");
        all = all && r.pass;
    }
    finish(cmd, c, timer, {out});
    return all ? 0 : 3;
}

int cmd_table2(const CLI::App* cmd, const CommonOpts& c) {
    Timer timer;
    struct Golden {
        const char* poly;
        const char* d_S;
        int k_S;
    };
    const Golden golden[] = {{"x1^3", "3", 1},
                             {"x1^2 + x1*x2^2", "4/3", 1},
                             {"x1^2*x2 - x2^3", "3/2", 1},
                             {"x1*x2*x3", "1", 3}};
    std::string out = c.out.empty() ? "table2.csv" : c.out;
    CsvWriter csv(out, "table2", "newton distances", {"poly", "d_S", "k_S", "match"});
    bool all = true;
    for (const auto& g : golden) {
        SparsePoly P = parse_poly(g.poly);
        if (P.nvars() == 1) {
            SparsePoly wide(2);
            for (const auto& [e, coef] : P.terms()) wide.add_term({e[0], 0}, coef);
            P = wide;
        }
        NewtonData nd = newton_data(P);
        bool match = to_string(nd.d_S) == g.d_S && nd.k_S == g.k_S;
        all = all && match;
        csv.row_mixed({g.poly, to_string(nd.d_S), std::to_string(nd.k_S),
                       match ? "exact match" : "MISMATCH"});
        std::printf("table2 %-18s d_S = %-4s k_S = %d  %s\n", g.poly, to_string(nd.d_S).c_str(),
                    nd.k_S, match ? "exact match" : "MISMATCH");
    }
    finish(cmd, c, timer, {out});
    return all ? 0 : 3;
}

int cmd_probe(const CLI::App* cmd, const CommonOpts& c, std::string poly, double eps, int count,
              double t0, double t1, double ratio) {
    Timer timer;
    SparsePoly S = parse_poly(poly);
    auto sched = geometric_schedule(t0, t1, ratio);
    ProbeResult r = perturbation_probe(S, eps, count, sched, c.seed);
    std::string out = c.out.empty() ? "probe.csv" : c.out;
    CsvWriter csv(out, "probe", "phase=" + poly + ", eps=" + format_double(eps),
                  {"t", "baseline", "envelope"});
    DecaySamples env;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        csv.row({r.t[i], r.baseline[i], r.envelope[i]});
        env.t.push_back(r.t[i]);
        env.magnitude.push_back(r.envelope[i]);
    }
    DecayFit fit = fit_decay(env, {});
    std::printf("probe: envelope beta = %.4f, max envelope/baseline = %.3f -> %s\n", fit.beta,
                r.max_ratio, out.c_str());
    finish(cmd, c, timer, {out});
    return 0;
}

}  // namespace

int lw_cli_run(int argc, const char* const* argv) {
    CLI::App app{"lattice wave dispersive-decay laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    // green
    auto* green = app.add_subcommand("green", "Green's function along an exact lattice ray");
    CommonOpts green_c;
    int green_dim = 4;
    double green_mass = 0.0, green_tper = 0.0, green_rtol = 1e-8;
    long green_mmax = 15;
    std::string green_ray = "1,1,1,1";
    green->add_option("--dim", green_dim)->default_val(4);
    green->add_option("--mass", green_mass)->default_val(0.0);
    green->add_option("--ray", green_ray)->default_val("1,1,1,1");
    green->add_option("--mmax", green_mmax)->default_val(15);
    green->add_option("--tper", green_tper, "time per ray step (default sqrt(2d) for all-ones)")
        ->default_val(0.0);
    green->add_option("--rtol", green_rtol)->default_val(1e-8);
    add_common(green, green_c);

    // oscint
    auto* oscint = app.add_subcommand("oscint", "oscillatory integral I(v,t) on a schedule");
    CommonOpts oscint_c;
    int oscint_dim = 3;
    std::string oscint_v = "0.2,0.3,0.1";
    double oi_t0 = 10, oi_t1 = 100, oi_ratio = 1.2, oi_rtol = 1e-6;
    oscint->add_option("--dim", oscint_dim)->default_val(3);
    oscint->add_option("--v", oscint_v)->default_val("0.2,0.3,0.1");
    oscint->add_option("--tmin", oi_t0)->default_val(10.0);
    oscint->add_option("--tmax", oi_t1)->default_val(100.0);
    oscint->add_option("--ratio", oi_ratio)->default_val(1.2);
    oscint->add_option("--rtol", oi_rtol)->default_val(1e-6);
    add_common(oscint, oscint_c);

    // jphase
    auto* jphase = app.add_subcommand("jphase", "J(t,S,psi) decay samples and fit");
    CommonOpts jphase_c;
    std::string j_poly = "x1*x2*x3";
    double j_t0 = 10, j_t1 = 200, j_ratio = 1.2, j_radius = 1.0, j_rtol = 1e-5;
    jphase->add_option("--poly", j_poly)->default_val("x1*x2*x3");
    jphase->add_option("--tmin", j_t0)->default_val(10.0);
    jphase->add_option("--tmax", j_t1)->default_val(200.0);
    jphase->add_option("--ratio", j_ratio)->default_val(1.2);
    jphase->add_option("--radius", j_radius)->default_val(1.0);
    jphase->add_option("--rtol", j_rtol)->default_val(1e-5);
    add_common(jphase, jphase_c);

    // critical
    auto* critical = app.add_subcommand("critical", "critical points of the phase at velocity v");
    CommonOpts critical_c;
    int cr_dim = 4;
    std::string cr_v = "0.35,0.35,0.35,0.35";
    double cr_tol = 1e-8;
    critical->add_option("--dim", cr_dim)->default_val(4);
    critical->add_option("--v", cr_v)->default_val("0.35,0.35,0.35,0.35");
    critical->add_option("--tol", cr_tol)->default_val(1e-8);
    add_common(critical, critical_c);

    // b0
    auto* b0 = app.add_subcommand("b0", "sup of |grad omega| over the degenerate strata");
    CommonOpts b0_c;
    int b0_dim = 4, b0_grid = 96;
    b0->add_option("--dim", b0_dim)->default_val(4);
    b0->add_option("--grid", b0_grid)->default_val(96);
    add_common(b0, b0_c);

    // newton
    auto* newton = app.add_subcommand("newton", "Newton polyhedron data of a polynomial");
    CommonOpts newton_c;
    std::string n_poly = "x1^2*x2 - x2^3";
    newton->add_option("--poly", n_poly)->default_val("x1^2*x2 - x2^3");
    add_common(newton, newton_c);

    // conj
    auto* conj = app.add_subcommand("conj", "odd-dimension conjugate phase construction");
    CommonOpts conj_c;
    int conj_dim = 3;
    bool conj_nofit = false;
    conj->add_option("--dim", conj_dim)->default_val(3);
    conj->add_flag("--no-fit", conj_nofit, "skip the |I| decay fit");
    add_common(conj, conj_c);

    // evolve
    auto* evolve = app.add_subcommand("evolve", "spectral solver on a periodic box");
    CommonOpts evolve_c;
    int ev_dim = 2, ev_L = 64, ev_k = 0;
    double ev_T = 20, ev_dt = 0.1;
    std::string ev_f, ev_save;
    evolve->add_option("--dim", ev_dim)->default_val(2);
    evolve->add_option("--L", ev_L)->default_val(64);
    evolve->add_option("--T", ev_T)->default_val(20.0);
    evolve->add_option("--dt", ev_dt)->default_val(0.1);
    evolve->add_option("--k", ev_k, "power nonlinearity (0 = linear)")->default_val(0);
    evolve->add_option("--f", ev_f, "initial velocity field file (default delta)");
    evolve->add_option("--save-final", ev_save, "write the final u field here");
    add_common(evolve, evolve_c);

    // lplq
    auto* lplq = app.add_subcommand("lplq", "lp -> lq decay table");
    CommonOpts lplq_c;
    int lp_dim = 4, lp_L = 96;
    double lp_p = 1, lp_q = 0, lp_T = 40, lp_dt = 2.0;
    lplq->add_option("--dim", lp_dim)->default_val(4);
    lplq->add_option("--L", lp_L)->default_val(96);
    lplq->add_option("--p", lp_p)->default_val(1.0);
    lplq->add_option("--q", lp_q, "0 means infinity")->default_val(0.0);
    lplq->add_option("--T", lp_T)->default_val(40.0);
    lplq->add_option("--dt", lp_dt)->default_val(2.0);
    add_common(lplq, lplq_c);

    // strichartz
    auto* stri = app.add_subcommand("strichartz", "L4_t l4 / l^{4/3} ratio over random data");
    CommonOpts stri_c;
    int st_dim = 4, st_L = 48, st_count = 50;
    double st_T = 16, st_dt = 0.5;
    stri->add_option("--dim", st_dim)->default_val(4);
    stri->add_option("--L", st_L)->default_val(48);
    stri->add_option("--count", st_count)->default_val(50);
    stri->add_option("--T", st_T)->default_val(16.0);
    stri->add_option("--dt", st_dt)->default_val(0.5);
    add_common(stri, stri_c);

    // nonlinear
    auto* nonlinear = app.add_subcommand("nonlinear", "small-data nonlinear vs linear tracking");
    CommonOpts nl_c;
    int nl_dim = 4, nl_L = 96, nl_k = 4;
    double nl_fl1 = 1e-3, nl_T = 40, nl_dt = 0.5;
    nonlinear->add_option("--dim", nl_dim)->default_val(4);
    nonlinear->add_option("--L", nl_L)->default_val(96);
    nonlinear->add_option("--k", nl_k)->default_val(4);
    nonlinear->add_option("--fl1", nl_fl1)->default_val(1e-3);
    nonlinear->add_option("--T", nl_T)->default_val(40.0);
    nonlinear->add_option("--dt", nl_dt)->default_val(0.5);
    add_common(nonlinear, nl_c);

    // decay-fit
    auto* dfit = app.add_subcommand("decay-fit", "fit C t^beta log^p t to CSV samples");
    CommonOpts dfit_c;
    std::string df_in;
    double df_tmin = 8.0;
    int df_env = 0;
    dfit->add_option("--in", df_in, "CSV with t,magnitude columns")->required();
    dfit->add_option("--tmin", df_tmin)->default_val(8.0);
    dfit->add_option("--envelope", df_env, "running-max window (0 = raw)")->default_val(0);
    add_common(dfit, dfit_c);

    // table1 / table2
    auto* table1 = app.add_subcommand("table1", "stratum-velocity decay table");
    CommonOpts t1_c;
    int t1_dim = 2;
    table1->add_option("--dim", t1_dim)->default_val(2);
    add_common(table1, t1_c);

    auto* table2 = app.add_subcommand("table2", "golden Newton distances");
    CommonOpts t2_c;
    add_common(table2, t2_c);

    // probe
    auto* probe = app.add_subcommand("probe", "linear-perturbation stability envelope");
    CommonOpts pr_c;
    std::string pr_poly = "x1*x2*x3 + x4^2";
    double pr_eps = 0.05, pr_t0 = 10, pr_t1 = 100, pr_ratio = 1.2;
    int pr_count = 100;
    probe->add_option("--poly", pr_poly)->default_val("x1*x2*x3 + x4^2");
    probe->add_option("--eps", pr_eps)->default_val(0.05);
    probe->add_option("--count", pr_count)->default_val(100);
    probe->add_option("--tmin", pr_t0)->default_val(10.0);
    probe->add_option("--tmax", pr_t1)->default_val(100.0);
    probe->add_option("--ratio", pr_ratio)->default_val(1.2);
    add_common(probe, pr_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (green->parsed()) {
            if (maybe_dump(green, green_c)) return 0;
            return cmd_green(green, green_c, green_dim, green_mass, green_ray, green_mmax,
                             green_tper, green_rtol);
        }
        if (oscint->parsed()) {
            if (maybe_dump(oscint, oscint_c)) return 0;
            return cmd_oscint(oscint, oscint_c, oscint_dim, oscint_v, oi_t0, oi_t1, oi_ratio,
                              oi_rtol);
        }
        if (jphase->parsed()) {
            if (maybe_dump(jphase, jphase_c)) return 0;
            return cmd_jphase(jphase, jphase_c, j_poly, j_t0, j_t1, j_ratio, j_radius, j_rtol);
        }
        if (critical->parsed()) {
            if (maybe_dump(critical, critical_c)) return 0;
            return cmd_critical(critical, critical_c, cr_dim, cr_v, cr_tol);
        }
        if (b0->parsed()) {
            if (maybe_dump(b0, b0_c)) return 0;
            return cmd_b0(b0, b0_c, b0_dim, b0_grid);
        }
        if (newton->parsed()) {
            if (maybe_dump(newton, newton_c)) return 0;
            return cmd_newton(newton, newton_c, n_poly);
        }
        if (conj->parsed()) {
            if (maybe_dump(conj, conj_c)) return 0;
            return cmd_conj(conj, conj_c, conj_dim, conj_nofit);
        }
        if (evolve->parsed()) {
            if (maybe_dump(evolve, evolve_c)) return 0;
            return cmd_evolve(evolve, evolve_c, ev_dim, ev_L, ev_T, ev_dt, ev_k, ev_f, ev_save);
        }
        if (lplq->parsed()) {
            if (maybe_dump(lplq, lplq_c)) return 0;
            return cmd_lplq(lplq, lplq_c, lp_dim, lp_L, lp_p, lp_q, lp_T, lp_dt);
        }
        if (stri->parsed()) {
            if (maybe_dump(stri, stri_c)) return 0;
            return cmd_strichartz(stri, stri_c, st_dim, st_L, st_count, st_T, st_dt);
        }
        if (nonlinear->parsed()) {
            if (maybe_dump(nonlinear, nl_c)) return 0;
            return cmd_nonlinear(nonlinear, nl_c, nl_dim, nl_L, nl_k, nl_fl1, nl_T, nl_dt);
        }
        if (dfit->parsed()) {
            if (maybe_dump(dfit, dfit_c)) return 0;
            return cmd_decay_fit(dfit, dfit_c, df_in, df_tmin, df_env);
        }
        if (table1->parsed()) {
            if (maybe_dump(table1, t1_c)) return 0;
            return cmd_table1(table1, t1_c, t1_dim);
        }
        if (table2->parsed()) {
            if (maybe_dump(table2, t2_c)) return 0;
            return cmd_table2(table2, t2_c);
        }
        if (probe->parsed()) {
            if (maybe_dump(probe, pr_c)) return 0;
            return cmd_probe(probe, pr_c, pr_poly, pr_eps, pr_count, pr_t0, pr_t1, pr_ratio);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == ErrorKind::Validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
