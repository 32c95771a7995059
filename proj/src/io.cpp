#include "solitons/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solitons {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "s,f,w\n";
    for (const auto& p : traj.samples) {
        out += format_g17(p.s);
        out += ',';
        out += format_g17(p.f);
        out += ',';
        out += format_g17(p.w);
        out += '\n';
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text, ProfileFamily label) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "s,f,w")
        throw ValidationError("trajectory CSV: expected header 's,f,w'");
    Trajectory traj;
    traj.profile_label = label;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        TrajectorySample sample{};
        const char* p = line.c_str();
        char* end = nullptr;
        sample.s = std::strtod(p, &end);
        if (end == p || *end != ',')
            throw ValidationError("trajectory CSV: malformed row at line " +
                                  std::to_string(lineno));
        p = end + 1;
        sample.f = std::strtod(p, &end);
        if (end == p || *end != ',')
            throw ValidationError("trajectory CSV: malformed row at line " +
                                  std::to_string(lineno));
        p = end + 1;
        sample.w = std::strtod(p, &end);
        if (end == p)
            throw ValidationError("trajectory CSV: malformed row at line " +
                                  std::to_string(lineno));
        traj.samples.push_back(sample);
    }
    if (traj.samples.size() < 2) throw ValidationError("trajectory CSV: fewer than 2 samples");
    return traj;
}

std::string wing_csv(const GluedWing& glued) {
    std::string out = "s,f,branch\n";
    for (std::size_t i = 0; i < glued.points.size(); ++i) {
        const char* tag =
            i < glued.vertex_index ? "minus" : (i == glued.vertex_index ? "vertex" : "plus");
        out += format_g17(glued.points[i].first);
        out += ',';
        out += format_g17(glued.points[i].second);
        out += ',';
        out += tag;
        out += '\n';
    }
    return out;
}

std::string residual_report_json(const ResidualReport& report) {
    // Dense grids are decimated for the report; max/rms always refer to the
    // full computation.
    const std::size_t n = report.points.size();
    const std::size_t stride = n > 2000 ? (n + 1999) / 2000 : 1;
    std::vector<double> pts;
    std::vector<std::vector<double>> res(report.residuals.size());
    for (std::size_t i = 0; i < n; i += stride) {
        pts.push_back(report.points[i]);
        for (std::size_t k = 0; k < report.residuals.size(); ++k)
            res[k].push_back(report.residuals[k][i]);
    }
    nlohmann::ordered_json j;
    j["points"] = pts;
    j["steps"] = report.steps;
    j["residuals"] = res;
    j["max"] = report.max_abs;
    j["rms"] = report.rms;
    if (report.order)
        j["order"] = *report.order;
    else
        j["order"] = nullptr;
    j["grid_points"] = n;
    j["threshold"] = report.threshold;
    j["pass"] = report.pass;
    return j.dump(2) + "\n";
}

std::string equilibria_json(const std::vector<Equilibrium>& eqs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& eq : eqs) {
        nlohmann::ordered_json j;
        j["location"] = {eq.s0, eq.x0};
        j["jacobian"] = {{eq.jacobian[0][0], eq.jacobian[0][1]},
                         {eq.jacobian[1][0], eq.jacobian[1][1]}};
        j["eigenvalues"] = {eq.eigenvalues[0], eq.eigenvalues[1]};
        j["eigenvectors"] = {{eq.eigenvectors[0][0], eq.eigenvectors[0][1]},
                             {eq.eigenvectors[1][0], eq.eigenvectors[1][1]}};
        j["admissible_saddle"] = eq.admissible_saddle;
        arr.push_back(j);
    }
    nlohmann::ordered_json out;
    out["equilibria"] = arr;
    return out.dump(2) + "\n";
}

std::string trajectory_meta_json(const Trajectory& traj) {
    nlohmann::ordered_json j;
    j["family"] = to_string(traj.profile_label);
    j["launch"] = to_string(traj.launch);
    j["termination"] = to_string(traj.termination);
    j["abs_tol"] = traj.abs_tol;
    j["rel_tol"] = traj.rel_tol;
    j["samples"] = traj.samples.size();
    j["s_first"] = traj.samples.empty() ? 0.0 : traj.s_front();
    j["s_last"] = traj.samples.empty() ? 0.0 : traj.s_back();
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace solitons
