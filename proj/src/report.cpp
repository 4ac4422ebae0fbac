#include "equilib/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace equilib {

using nlohmann::ordered_json;

namespace {

ordered_json params_json(const WellBehavedParams& p) {
    return ordered_json{{"B", p.B}, {"C", p.C}, {"beta_min", p.beta_min}};
}

ordered_json stats_json(const SolveStats& s, bool strong) {
    ordered_json j;
    j["rho"] = s.rho;
    j["potential"] = params_json(s.potential);
    j["gradient"] = params_json(s.gradient);
    if (strong) j["determinant"] = params_json(s.determinant);
    j["nominal_degree"] = s.nominal_degree;
    j["pieces"] = s.pieces;
    j["grid_cells"] = s.grid_cells;
    j["blocks"] = s.blocks;
    j["cells_modeled"] = s.cells_modeled;
    j["kernel_boxes"] = s.kernel_boxes;
    return j;
}

std::string g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string vec(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g(v[i]);
    return s + ")";
}

const char* status_name(StrongResult::Status s) {
    switch (s) {
    case StrongResult::Status::Found: return "found";
    case StrongResult::Status::NotFound: return "not_found";
    case StrongResult::Status::Exhausted: return "exhausted";
    }
    return "?";
}

} // namespace

std::string weak_json(const WeakAnswer& a) {
    ordered_json j;
    j["command"] = "solve-weak";
    j["status"] = a.found() ? "point" : "no_delta_solution";
    j["epsilon"] = a.epsilon;
    j["delta"] = a.delta;
    if (a.found()) {
        j["point"] = a.x;
        j["gradient"] = a.gradient;
        j["residual"] = a.residual;
        if (!a.all_points.empty()) j["all_points"] = a.all_points;
    }
    j["stats"] = stats_json(a.stats, false);
    return j.dump(2) + "\n";
}

std::string strong_json(const StrongResult& r, bool auto_delta) {
    ordered_json j;
    j["command"] = "solve-strong";
    j["status"] = status_name(r.status);
    j["auto"] = auto_delta;
    if (r.found()) {
        const auto& a = r.answer;
        j["point"] = a.x;
        j["radius"] = a.radius;
        j["delta"] = a.delta;
        j["hessian_det"] = a.hessian_det;
        j["det_sign"] = a.sign;
        j["alpha"] = a.alpha;
        j["eps_prime"] = a.eps_prime;
        j["certified"] = a.certified;
    }
    j["global_params"] = {{"delta_prime", r.global.delta_prime},
                          {"alpha", r.global.alpha},
                          {"eps_prime", r.global.eps_prime}};
    if (r.status == StrongResult::Status::Exhausted) j["delta_floor"] = r.delta_floor;
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["stats"] = stats_json(r.stats, true);
    return j.dump(2) + "\n";
}

std::string oracle_json(const std::optional<ScanReport>& scan, const std::optional<BisectResult>& bisect) {
    ordered_json j;
    j["command"] = "oracle";
    if (scan) {
        ordered_json s;
        s["h"] = scan->h;
        s["threshold"] = scan->threshold;
        s["scanned"] = scan->scanned;
        s["min_residual"] = scan->min_residual;
        s["argmin"] = scan->argmin;
        ordered_json pts = ordered_json::array();
        for (const auto& p : scan->points) pts.push_back({{"x", p.x}, {"residual", p.residual}});
        s["points"] = pts;
        j["scan"] = s;
    }
    if (bisect) j["bisect"] = {{"x", bisect->x}, {"iterations", bisect->iterations}, {"width", bisect->width}};
    return j.dump(2) + "\n";
}

std::string eval_json(const ChargeSystem& sys, std::span<const double> x) {
    ordered_json j;
    j["command"] = "eval";
    j["point"] = std::vector<double>(x.begin(), x.end());
    j["potential"] = eval_potential(sys, x);
    j["gradient"] = eval_gradient(sys, x);
    j["hessian"] = hessian(sys, x);
    j["hessian_det"] = hessian_det(sys, x);
    return j.dump(2) + "\n";
}

std::string error_json(const std::string& command, const std::string& kind, const std::string& message) {
    ordered_json j;
    j["command"] = command;
    j["status"] = "error";
    j["error"] = kind;
    j["message"] = message;
    return j.dump(2) + "\n";
}

std::string weak_text(const WeakAnswer& a) {
    std::ostringstream o;
    if (a.found()) {
        o << "point " << vec(a.x) << "\n";
        o << "gradient " << vec(a.gradient) << "\n";
        o << "residual " << g(a.residual) << " <= epsilon " << g(a.epsilon) << "\n";
        if (a.all_points.size() > 1)
            for (const auto& p : a.all_points) o << "  also " << vec(p) << "\n";
    } else {
        o << "no delta-solution: no point of the domain has ||grad f||_inf <= " << g(a.delta) << "\n";
    }
    o << "cells " << a.stats.cells_modeled << " of " << a.stats.grid_cells << ", kernel boxes " << a.stats.kernel_boxes
      << "\n";
    return o.str();
}

std::string strong_text(const StrongResult& r) {
    std::ostringstream o;
    if (r.found()) {
        const auto& a = r.answer;
        o << "point " << vec(a.x) << "\n";
        o << "hessian det " << g(a.hessian_det) << " (delta " << g(a.delta) << ")\n";
        o << "alpha " << g(a.alpha) << ", eps' " << g(a.eps_prime) << "\n";
        o << (a.certified ? "certified: an exact equilibrium lies within alpha (sup norm)\n"
                          : "NOT certified: the Poincare-Miranda check was inconclusive\n");
    } else {
        o << status_name(r.status) << ": " << r.reason << "\n";
        if (r.status == StrongResult::Status::Exhausted) o << "delta floor " << g(r.delta_floor) << "\n";
    }
    return o.str();
}

std::string eval_text(const ChargeSystem& sys, std::span<const double> x) {
    std::ostringstream o;
    o << "potential " << g(eval_potential(sys, x)) << "\n";
    o << "gradient " << vec(eval_gradient(sys, x)) << "\n";
    o << "hessian " << vec(hessian(sys, x)) << "\n";
    o << "hessian det " << g(hessian_det(sys, x)) << "\n";
    return o.str();
}

} // namespace equilib
