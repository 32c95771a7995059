#include "solitons/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace solitons {

namespace {

struct ChartedPoint {
    double s_label;
    bool angle_chart;
    double coord;  // v in the graph chart, r in the angle chart
};

}  // namespace

ResidualReport rotator_soliton_report(const Trajectory& traj, int n,
                                      const SolitonVerifyConfig& cfg) {
    if (traj.samples.size() < 4)
        throw ValidationError("rotator_soliton_report: trajectory too short");
    const SubmersionProfile profile = rotator_profile(n);
    const CubicHermite f_of_s = traj.f_interpolant();
    const CubicHermite w_of_s = traj.w_interpolant(profile);
    const double span_lo = std::min(traj.s_front(), traj.s_back());
    const double span_hi = std::max(traj.s_front(), traj.s_back());

    std::vector<ChartedPoint> pts;
    for (double s : cfg.s_points) {
        if (s <= span_lo || s >= span_hi) {
            if (cfg.drop_out_of_range) continue;
            std::ostringstream os;
            os << "rotator_soliton_report: point s = " << s << " outside trajectory span";
            throw ValidationError(os.str());
        }
        const double w = w_of_s.eval(s);
        pts.push_back({s, std::abs(w) > cfg.chart_w_limit, 0.0});
    }
    if (pts.empty()) throw ValidationError("rotator_soliton_report: no evaluable points");

    const AmbientModel model{n + 1, KillingFamily::rotation};
    const double fd_margin = 8.0 * cfg.steps.front();

    // Graph-chart patch over the tame span.
    HypersurfacePatch graph_patch;
    bool have_graph = false;
    for (auto& p : pts) {
        if (p.angle_chart) continue;
        p.coord = p.s_label;
        have_graph = true;
    }
    if (have_graph) {
        double lo = span_hi, hi = span_lo;
        for (const auto& p : pts)
            if (!p.angle_chart) {
                lo = std::min(lo, p.coord);
                hi = std::max(hi, p.coord);
            }
        lo = std::max(span_lo, lo - 2.0 * fd_margin);
        hi = std::min(span_hi, hi + 2.0 * fd_margin);
        graph_patch = embed_rotator_patch(traj, n, cfg.u_range, {lo, hi});
    }

    // Angle-chart patch from the steep prefix of the trajectory, where f is
    // strictly monotone and gamma = s(f), gamma' = 1/w.
    HypersurfacePatch angle_patch;
    bool have_angle = false;
    for (auto& p : pts) have_angle = have_angle || p.angle_chart;
    if (have_angle) {
        std::vector<std::array<double, 3>> arc;
        for (const auto& sample : traj.samples) {
            if (std::abs(sample.w) < 0.5 * cfg.chart_w_limit) break;
            arc.push_back({sample.f, sample.s, 1.0 / sample.w});
        }
        if (arc.size() < 4)
            throw ValidationError(
                "rotator_soliton_report: steep points requested but no steep samples");
        const double r_lo = std::min(arc.front()[0], arc.back()[0]);
        const double r_hi = std::max(arc.front()[0], arc.back()[0]);
        angle_patch = embed_rotator_inverse_patch(arc, n, cfg.u_range, {r_lo, r_hi});
        for (auto& p : pts)
            if (p.angle_chart) p.coord = f_of_s.eval(p.s_label);
    }

    std::vector<Vec> graph_params, angle_params;
    std::vector<double> graph_labels, angle_labels;
    for (const auto& p : pts) {
        Vec params(static_cast<std::size_t>(n), 0.0);
        params[0] = 1.0;
        params[static_cast<std::size_t>(n) - 1] = p.coord;
        if (p.angle_chart) {
            angle_params.push_back(params);
            angle_labels.push_back(p.s_label);
        } else {
            graph_params.push_back(params);
            graph_labels.push_back(p.s_label);
        }
    }

    ResidualReport merged;
    merged.steps = cfg.steps;
    merged.residuals.assign(cfg.steps.size(), {});
    auto absorb = [&](const ResidualReport& part) {
        for (std::size_t k = 0; k < cfg.steps.size(); ++k)
            merged.residuals[k].insert(merged.residuals[k].end(), part.residuals[k].begin(),
                                       part.residuals[k].end());
        merged.points.insert(merged.points.end(), part.points.begin(), part.points.end());
    };
    if (!graph_params.empty())
        absorb(soliton_residual(graph_patch, model, graph_params, graph_labels, cfg.steps,
                                cfg.threshold));
    if (!angle_params.empty())
        absorb(soliton_residual(angle_patch, model, angle_params, angle_labels, cfg.steps,
                                cfg.threshold));
    merged.finalize(cfg.threshold);
    return merged;
}

ResidualReport control_plane_report(int n, const SolitonVerifyConfig& cfg) {
    Trajectory flat;
    flat.profile_label = ProfileFamily::rotation;
    flat.launch = LaunchMethod::interior;
    const int m = 256;
    const double lo = 0.05, hi = 3.0;
    for (int k = 0; k <= m; ++k) {
        const double s = lo + (hi - lo) * k / m;
        flat.samples.push_back({s, 0.0, 0.0});
        flat.w_prime.push_back(0.0);
    }
    return rotator_soliton_report(flat, n, cfg);
}

}  // namespace solitons
