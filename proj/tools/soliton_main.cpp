#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solitons/geometry.hpp"
#include "solitons/io.hpp"
#include "solitons/ode.hpp"
#include "solitons/phase.hpp"
#include "solitons/profiles.hpp"
#include "solitons/singular.hpp"
#include "solitons/verify.hpp"

namespace {

using namespace solitons;

std::vector<double> parse_doubles(const std::string& text, std::size_t expected,
                                  const char* what) {
    std::vector<double> out;
    const char* p = text.c_str();
    char* end = nullptr;
    for (;;) {
        const double v = std::strtod(p, &end);
        if (end == p) break;
        out.push_back(v);
        p = end;
        if (*p == ',') ++p;
        else break;
    }
    if (out.size() != expected || *p != '\0')
        throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) +
                              " comma-separated numbers, got '" + text + "'");
    return out;
}

// JSON config overlay: values apply only where the flag was not given.
struct ConfigOverlay {
    nlohmann::json doc;
    bool loaded = false;

    void load(const std::string& path) {
        try {
            doc = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("config '" + path + "': " + e.what());
        }
        loaded = true;
    }
    template <class T>
    void apply(const CLI::Option* opt, const char* key, T& var) const {
        if (!loaded || opt->count() > 0 || !doc.contains(key)) return;
        try {
            var = doc.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("config field '") + key + "': " + e.what());
        }
    }
};

struct IntegratorFlags {
    double abs_tol = 1e-12, rel_tol = 1e-10, max_step = 1e-3, min_step = 1e-14;
    double blow_up = 1e8;
    CLI::Option *o_abs = nullptr, *o_rel = nullptr, *o_max = nullptr, *o_min = nullptr,
                *o_blow = nullptr;

    void attach(CLI::App* cmd) {
        o_abs = cmd->add_option("--abs-tol", abs_tol, "absolute tolerance");
        o_rel = cmd->add_option("--rel-tol", rel_tol, "relative tolerance");
        o_max = cmd->add_option("--max-step", max_step, "maximum integrator step");
        o_min = cmd->add_option("--min-step", min_step, "minimum integrator step");
        o_blow = cmd->add_option("--blow-up-limit", blow_up, "|w| treated as blow-up");
    }
    void overlay(const ConfigOverlay& cfg) {
        cfg.apply(o_abs, "abs_tol", abs_tol);
        cfg.apply(o_rel, "rel_tol", rel_tol);
        cfg.apply(o_max, "max_step", max_step);
        cfg.apply(o_min, "min_step", min_step);
        cfg.apply(o_blow, "blow_up_limit", blow_up);
    }
    IntegratorOptions options() const {
        IntegratorOptions opts;
        opts.abs_tol = abs_tol;
        opts.rel_tol = rel_tol;
        opts.max_step = max_step;
        opts.min_step = min_step;
        opts.w_blow_up_limit = blow_up;
        opts.validate();
        return opts;
    }
};

SubmersionProfile resolve_profile(const std::string& family, const std::string& profile_path,
                                  int n) {
    const ProfileFamily fam = profile_family_from_string(family);
    if (fam == ProfileFamily::custom) {
        if (profile_path.empty())
            throw ValidationError("family 'custom' needs --profile <file.json>");
        return load_profile_file(profile_path);
    }
    return profile_for(fam, n);
}

int event_exit_code(Termination t) {
    return (t == Termination::blow_up || t == Termination::step_underflow) ? 2 : 0;
}

nlohmann::ordered_json report_json_obj(const ResidualReport& r) {
    return nlohmann::ordered_json::parse(residual_report_json(r));
}

// Surface-of-revolution OBJ from glued wing samples, decimated to a mesh-
// friendly column count.
std::string wing_obj(const GluedWing& glued, double u_lo, double u_hi, int nu) {
    std::vector<std::pair<double, double>> cols;
    const std::size_t total = glued.points.size();
    const std::size_t stride = total > 512 ? (total + 511) / 512 : 1;
    for (std::size_t j = 0; j < total; j += stride) cols.push_back(glued.points[j]);
    if (stride > 1 && (total - 1) % stride != 0) cols.push_back(glued.points.back());

    std::string out = "o wing\n";
    char buf[96];
    const std::size_t m = cols.size();
    for (int i = 0; i <= nu; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / nu;
        for (const auto& [s, f] : cols) {
            std::snprintf(buf, sizeof buf, "v %.16e %.16e %.16e\n", u, u * s * std::cos(f),
                          u * s * std::sin(f));
            out += buf;
        }
    }
    for (int i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j + 1 < m; ++j) {
            const long a = i * static_cast<long>(m) + static_cast<long>(j) + 1;
            const long b = a + static_cast<long>(m);
            std::snprintf(buf, sizeof buf, "f %ld %ld %ld %ld\n", a, b, b + 1, a + 1);
            out += buf;
        }
    }
    return out;
}

int run_bowl(int n, double f0, double s_max, double eps, bool verify, const std::string& out,
             const IntegratorOptions& opts) {
    Trajectory traj = bowl_launch(n, f0, s_max, opts, eps);
    write_file(out + ".csv", trajectory_csv(traj));
    write_file(out + ".svg", curve_svg(embed_rotator_curve(traj)));
    write_file(out + "_meta.json", trajectory_meta_json(traj));
    if (verify) {
        const SubmersionProfile profile = rotator_profile(n);
        const double res_lo = 0.1, res_hi = s_max;
        nlohmann::ordered_json bundle;
        bundle["ode"] = report_json_obj(ode_residual(profile, traj, res_lo, res_hi));
        SolitonVerifyConfig cfg;
        bundle["soliton"] = report_json_obj(rotator_soliton_report(traj, n, cfg));
        write_file(out + "_residual.json", bundle.dump(2) + "\n");
        if (n == 2) {
            const double v_lo = std::max(0.05, 0.0 + 1e-3);
            HypersurfacePatch patch =
                embed_rotator_patch(traj, n, {0.5, 2.0}, {v_lo, s_max * 0.999});
            write_file(out + ".obj", patch_obj(patch, 24, 96, "bowl"));
        }
    }
    return event_exit_code(traj.termination);
}

int run_wing(int n, double s0, double r0, double s_max, double delta_switch, bool verify,
             const std::string& out, const IntegratorOptions& opts) {
    WingCurve curve = wing_launch(n, s0, r0, s_max, opts, delta_switch);
    GluedWing glued = glue_wing(curve);
    write_file(out + ".csv", wing_csv(glued));
    // The figure needs only a drawing-resolution subset of the traversal.
    std::vector<std::pair<double, double>> drawn;
    const std::size_t stride =
        glued.points.size() > 4096 ? (glued.points.size() + 4095) / 4096 : 1;
    for (std::size_t i = 0; i < glued.points.size(); i += stride) drawn.push_back(glued.points[i]);
    write_file(out + ".svg", curve_svg(embed_rotator_curve(drawn)));
    write_file(out + "_meta_plus.json", trajectory_meta_json(curve.branch_plus));
    write_file(out + "_meta_minus.json", trajectory_meta_json(curve.branch_minus));
    if (verify) {
        const SubmersionProfile profile = rotator_profile(n);
        nlohmann::ordered_json bundle;
        SolitonVerifyConfig cfg;
        auto branch_report = [&](const Trajectory& branch) {
            nlohmann::ordered_json j;
            j["ode"] = report_json_obj(ode_residual(profile, branch, s0 + 0.1, s_max));
            j["soliton"] = report_json_obj(rotator_soliton_report(branch, n, cfg));
            return j;
        };
        bundle["branch_plus"] = branch_report(curve.branch_plus);
        bundle["branch_minus"] = branch_report(curve.branch_minus);
        write_file(out + "_residual.json", bundle.dump(2) + "\n");
        if (n == 2) write_file(out + ".obj", wing_obj(glued, 0.5, 2.0, 24));
    }
    const int code_plus = event_exit_code(curve.branch_plus.termination);
    const int code_minus = event_exit_code(curve.branch_minus.termination);
    return std::max(code_plus, code_minus);
}

int run_trajectory(const std::string& family, const std::string& profile_path, int n,
                   const std::string& from, double to, const std::string& out,
                   const IntegratorOptions& opts) {
    const SubmersionProfile profile = resolve_profile(family, profile_path, n);
    const auto init = parse_doubles(from, 3, "--from");
    Trajectory traj = integrate(profile, init[0], init[1], init[2], to, opts);
    write_file(out + ".csv", trajectory_csv(traj));
    write_file(out + "_meta.json", trajectory_meta_json(traj));
    if (profile.label() == ProfileFamily::rotation)
        write_file(out + ".svg", curve_svg(embed_rotator_curve(traj)));
    return event_exit_code(traj.termination);
}

int run_phase(int n, const std::string& box_text, int grid, double arc_length, double offset,
              const std::string& out, const IntegratorOptions& opts) {
    const auto b = parse_doubles(box_text, 4, "--box");
    const Box box{b[0], b[1], b[2], b[3]};
    PhaseField field = rotator_phase_field(n);
    const auto equilibria = find_equilibria(field, box, grid);
    write_file(out + "_equilibria.json", equilibria_json(equilibria));

    // Manifold curves clipped to the plotted box.
    PhaseField clipped = field;
    clipped.s_lo = box.s_lo;
    clipped.s_hi = box.s_hi;
    clipped.x_lo = box.x_lo;
    clipped.x_hi = box.x_hi;
    std::vector<IntegralCurve> curves;
    for (const auto& eq : equilibria) {
        if (!eq.admissible_saddle) continue;
        for (ManifoldKind kind : {ManifoldKind::unstable, ManifoldKind::stable})
            for (int side : {+1, -1}) {
                try {
                    curves.push_back(
                        manifold_launch(clipped, eq, kind, side, offset, arc_length, opts));
                } catch (const NumericalError&) {
                    // a one-sided or degenerate launch is not fatal for the plot
                }
            }
    }
    write_file(out + ".svg", phase_portrait_svg(field, box, equilibria, curves));
    return 0;
}

int run_verify(const std::string& input, const std::string& family,
               const std::string& profile_path, int n, double res_lo, double res_hi,
               double threshold, const std::string& out) {
    const SubmersionProfile profile = resolve_profile(family, profile_path, n);
    Trajectory traj = trajectory_from_csv(read_file(input), profile.label());
    const double span_lo = std::min(traj.s_front(), traj.s_back());
    const double span_hi = std::max(traj.s_front(), traj.s_back());
    double lo = std::isnan(res_lo) ? std::max(span_lo, profile.domain_lo() + 0.1) : res_lo;
    double hi = std::isnan(res_hi) ? span_hi : res_hi;
    if (std::isfinite(profile.domain_hi())) hi = std::min(hi, profile.domain_hi() - 1e-3);
    write_file(out + "_ode_residual.json",
               residual_report_json(ode_residual(profile, traj, lo, hi, threshold)));
    if (profile.label() == ProfileFamily::rotation) {
        SolitonVerifyConfig cfg;
        write_file(out + "_soliton_residual.json",
                   residual_report_json(rotator_soliton_report(traj, profile.n(), cfg)));
    }
    return 0;
}

int run_fiber_check(int n, double s, double step, std::uint64_t seed, const std::string& out) {
    const std::vector<double> steps{step, step / 2.0, step / 4.0};
    std::vector<double> h_values;
    for (double hstep : steps) h_values.push_back(fiber_check(n, s, hstep).h_numeric);
    const double h_extrap = richardson_extrapolate(h_values, 2.0, 2.0);
    const double h_formula = (n - 1) * s / std::sqrt(1.0 + s * s);

    // Seeded samplewise check of |grad pi|^2 = 1 + s^2 across the fibre.
    Rng rng(seed);
    double max_err = 0.0;
    const int samples = 100;
    for (int k = 0; k < samples; ++k) {
        const double x1 = rng.uniform(0.1, 10.0);
        Vec y(static_cast<std::size_t>(n), 0.0);
        y[0] = x1;
        for (int i = 1; i + 1 < n; ++i) y[i] = rng.uniform(-5.0, 5.0);
        y[n - 1] = s * x1;
        max_err = std::max(max_err, std::abs(grad_pi_norm_sq(y) - (1.0 + s * s)));
    }

    nlohmann::ordered_json j;
    j["n"] = n;
    j["s"] = s;
    j["steps"] = steps;
    j["h_values"] = h_values;
    j["h_numeric"] = h_extrap;
    j["h_formula"] = h_formula;
    j["h_rel_err"] = std::abs(h_extrap - h_formula) / std::abs(h_formula);
    j["grad_pi_norm_sq_formula"] = 1.0 + s * s;
    j["grad_pi_samples"] = samples;
    j["grad_pi_max_abs_err"] = max_err;
    j["seed"] = seed;
    write_file(out + ".json", j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean curvature flow solitons with respect to Killing fields in hyperbolic space"};
    app.require_subcommand(1);

    // bowl
    auto* bowl = app.add_subcommand("bowl", "launch the bowl solution from s = 0");
    int bowl_n = 2;
    double bowl_f0 = 0.0, bowl_smax = 5.0, bowl_eps = 1e-5;
    bool bowl_verify = false;
    std::string bowl_out = "bowl", bowl_cfg_path;
    IntegratorFlags bowl_flags;
    auto* bowl_o_n = bowl->add_option("--n", bowl_n, "soliton dimension (>= 2)");
    auto* bowl_o_f0 = bowl->add_option("--f0", bowl_f0, "angle value f(0)");
    auto* bowl_o_smax = bowl->add_option("--s-max", bowl_smax, "integration end");
    auto* bowl_o_eps = bowl->add_option("--eps", bowl_eps, "series launch offset");
    bowl->add_flag("--verify", bowl_verify, "emit residual JSON and OBJ");
    auto* bowl_o_out = bowl->add_option("--out", bowl_out, "output prefix");
    bowl->add_option("--config", bowl_cfg_path, "JSON config file (flags override)");
    bowl_flags.attach(bowl);

    // wing
    auto* wing = app.add_subcommand("wing", "launch a wing-like branch pair");
    int wing_n = 2;
    double wing_s0 = 1.0, wing_r0 = 0.0, wing_smax = 20.0, wing_delta = 1.0;
    bool wing_verify = false;
    std::string wing_out = "wing", wing_cfg_path;
    IntegratorFlags wing_flags;
    auto* wing_o_n = wing->add_option("--n", wing_n, "soliton dimension (>= 2)");
    auto* wing_o_s0 = wing->add_option("--s0", wing_s0, "vertical-tangent abscissa (> 0)");
    auto* wing_o_r0 = wing->add_option("--r0", wing_r0, "angle value at the vertex");
    auto* wing_o_smax = wing->add_option("--s-max", wing_smax, "branch integration end");
    auto* wing_o_delta = wing->add_option("--delta-switch", wing_delta, "|gamma'| at the handoff");
    wing->add_flag("--verify", wing_verify, "emit residual JSON and OBJ");
    auto* wing_o_out = wing->add_option("--out", wing_out, "output prefix");
    wing->add_option("--config", wing_cfg_path, "JSON config file (flags override)");
    wing_flags.attach(wing);

    // trajectory
    auto* trajcmd = app.add_subcommand("trajectory", "integrate from interior initial data");
    std::string traj_family = "rotation", traj_profile_path, traj_from, traj_out = "trajectory";
    std::string traj_cfg_path;
    int traj_n = 2;
    double traj_to = 0.0;
    IntegratorFlags traj_flags;
    auto* traj_o_family =
        trajcmd->add_option("--family", traj_family, "rotation|translation|dilation|custom");
    trajcmd->add_option("--profile", traj_profile_path, "custom profile JSON file");
    auto* traj_o_n = trajcmd->add_option("--n", traj_n, "soliton dimension (>= 2)");
    auto* traj_o_from = trajcmd->add_option("--from", traj_from, "initial data S,F,W")->required();
    auto* traj_o_to = trajcmd->add_option("--to", traj_to, "target s")->required();
    auto* traj_o_out = trajcmd->add_option("--out", traj_out, "output prefix");
    trajcmd->add_option("--config", traj_cfg_path, "JSON config file (flags override)");
    traj_flags.attach(trajcmd);

    // phase
    auto* phase = app.add_subcommand("phase", "equilibria and phase portrait");
    int phase_n = 2, phase_grid = 400;
    std::string phase_box = "-0.5,5,-2,2", phase_out = "phase", phase_cfg_path;
    double phase_arc = 12.0, phase_offset = 1e-6;
    IntegratorFlags phase_flags;
    auto* phase_o_n = phase->add_option("--n", phase_n, "soliton dimension (>= 2)");
    auto* phase_o_box = phase->add_option("--box", phase_box, "search box LO,HI,LO,HI");
    auto* phase_o_grid = phase->add_option("--grid", phase_grid, "bisection grid");
    auto* phase_o_arc = phase->add_option("--arc-length", phase_arc, "manifold arc length");
    auto* phase_o_off = phase->add_option("--offset", phase_offset, "manifold launch offset");
    auto* phase_o_out = phase->add_option("--out", phase_out, "output prefix");
    phase->add_option("--config", phase_cfg_path, "JSON config file (flags override)");
    phase_flags.attach(phase);

    // verify
    auto* verify = app.add_subcommand("verify", "residuals for a trajectory CSV");
    std::string ver_input, ver_family = "rotation", ver_profile_path, ver_out, ver_cfg_path;
    int ver_n = 2;
    double ver_lo = std::nan(""), ver_hi = std::nan(""), ver_threshold = 1e-6;
    verify->add_option("--input", ver_input, "trajectory CSV")->required();
    auto* ver_o_family =
        verify->add_option("--family", ver_family, "rotation|translation|dilation|custom");
    verify->add_option("--profile", ver_profile_path, "custom profile JSON file");
    auto* ver_o_n = verify->add_option("--n", ver_n, "soliton dimension (>= 2)");
    verify->add_option("--res-lo", ver_lo, "residual range start");
    verify->add_option("--res-hi", ver_hi, "residual range end");
    verify->add_option("--threshold", ver_threshold, "residual pass threshold");
    auto* ver_o_out = verify->add_option("--out", ver_out, "output prefix (default: input stem)");
    verify->add_option("--config", ver_cfg_path, "JSON config file (flags override)");

    // fiber-check
    auto* fiber = app.add_subcommand("fiber-check", "fibre mean curvature vs formula");
    int fib_n = 2;
    double fib_s = 1.0, fib_step = 1e-2;
    std::uint64_t fib_seed = kDefaultSeed;
    std::string fib_out = "fiber_check", fib_cfg_path;
    auto* fib_o_n = fiber->add_option("--n", fib_n, "base dimension (>= 2)");
    auto* fib_o_s = fiber->add_option("--s", fib_s, "fibre abscissa (> 0)");
    auto* fib_o_step = fiber->add_option("--step", fib_step, "coarsest FD step");
    auto* fib_o_seed = fiber->add_option("--seed", fib_seed, "seed for sample points");
    auto* fib_o_out = fiber->add_option("--out", fib_out, "output prefix");
    fiber->add_option("--config", fib_cfg_path, "JSON config file (flags override)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // flag/usage problems are validation errors
    }

    try {
        if (app.got_subcommand(bowl)) {
            ConfigOverlay cfg;
            if (!bowl_cfg_path.empty()) cfg.load(bowl_cfg_path);
            cfg.apply(bowl_o_n, "n", bowl_n);
            cfg.apply(bowl_o_f0, "f0", bowl_f0);
            cfg.apply(bowl_o_smax, "s_max", bowl_smax);
            cfg.apply(bowl_o_eps, "eps", bowl_eps);
            cfg.apply(bowl_o_out, "out", bowl_out);
            bowl_flags.overlay(cfg);
            return run_bowl(bowl_n, bowl_f0, bowl_smax, bowl_eps, bowl_verify, bowl_out,
                            bowl_flags.options());
        }
        if (app.got_subcommand(wing)) {
            ConfigOverlay cfg;
            if (!wing_cfg_path.empty()) cfg.load(wing_cfg_path);
            cfg.apply(wing_o_n, "n", wing_n);
            cfg.apply(wing_o_s0, "s0", wing_s0);
            cfg.apply(wing_o_r0, "r0", wing_r0);
            cfg.apply(wing_o_smax, "s_max", wing_smax);
            cfg.apply(wing_o_delta, "delta_switch", wing_delta);
            cfg.apply(wing_o_out, "out", wing_out);
            wing_flags.overlay(cfg);
            return run_wing(wing_n, wing_s0, wing_r0, wing_smax, wing_delta, wing_verify,
                            wing_out, wing_flags.options());
        }
        if (app.got_subcommand(trajcmd)) {
            ConfigOverlay cfg;
            if (!traj_cfg_path.empty()) cfg.load(traj_cfg_path);
            cfg.apply(traj_o_family, "family", traj_family);
            cfg.apply(traj_o_n, "n", traj_n);
            cfg.apply(traj_o_from, "from", traj_from);
            cfg.apply(traj_o_to, "to", traj_to);
            cfg.apply(traj_o_out, "out", traj_out);
            traj_flags.overlay(cfg);
            return run_trajectory(traj_family, traj_profile_path, traj_n, traj_from, traj_to,
                                  traj_out, traj_flags.options());
        }
        if (app.got_subcommand(phase)) {
            ConfigOverlay cfg;
            if (!phase_cfg_path.empty()) cfg.load(phase_cfg_path);
            cfg.apply(phase_o_n, "n", phase_n);
            cfg.apply(phase_o_box, "box", phase_box);
            cfg.apply(phase_o_grid, "grid", phase_grid);
            cfg.apply(phase_o_arc, "arc_length", phase_arc);
            cfg.apply(phase_o_off, "offset", phase_offset);
            cfg.apply(phase_o_out, "out", phase_out);
            phase_flags.overlay(cfg);
            return run_phase(phase_n, phase_box, phase_grid, phase_arc, phase_offset, phase_out,
                             phase_flags.options());
        }
        if (app.got_subcommand(verify)) {
            ConfigOverlay cfg;
            if (!ver_cfg_path.empty()) cfg.load(ver_cfg_path);
            cfg.apply(ver_o_family, "family", ver_family);
            cfg.apply(ver_o_n, "n", ver_n);
            if (ver_out.empty()) {
                ver_out = ver_input;
                const auto dot = ver_out.rfind(".csv");
                if (dot != std::string::npos) ver_out.erase(dot);
            }
            cfg.apply(ver_o_out, "out", ver_out);
            return run_verify(ver_input, ver_family, ver_profile_path, ver_n, ver_lo, ver_hi,
                              ver_threshold, ver_out);
        }
        if (app.got_subcommand(fiber)) {
            ConfigOverlay cfg;
            if (!fib_cfg_path.empty()) cfg.load(fib_cfg_path);
            cfg.apply(fib_o_n, "n", fib_n);
            cfg.apply(fib_o_s, "s", fib_s);
            cfg.apply(fib_o_step, "step", fib_step);
            cfg.apply(fib_o_seed, "seed", fib_seed);
            cfg.apply(fib_o_out, "out", fib_out);
            return run_fiber_check(fib_n, fib_s, fib_step, fib_seed, fib_out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
