// equilib: command-line front end for the equilibrium solvers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "equilib/equilibrium.hpp"
#include "equilib/error.hpp"
#include "equilib/instance.hpp"
#include "equilib/oracle.hpp"
#include "equilib/plot.hpp"
#include "equilib/report.hpp"

namespace {

using namespace equilib;

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kBudget = 3, kNotFound = 4, kNoSvg = 5, kTooFine = 6 };

struct Common {
    std::string instance;
    std::optional<double> epsilon;
    std::optional<double> delta;
    bool json = false;
    unsigned threads = 1;
    std::size_t budget = 1'000'000;
};

void add_common(CLI::App* cmd, Common& c, bool solver) {
    cmd->add_option("instance", c.instance, "instance JSON file")->required();
    cmd->add_option("--epsilon", c.epsilon, "tolerance (overrides the file)");
    cmd->add_flag("--json", c.json, "machine-readable output");
    if (solver) {
        cmd->add_option("--delta", c.delta, "delta (overrides the file)");
        cmd->add_option("--threads", c.threads, "worker threads for per-cell work")->check(CLI::Range(1u, 256u));
        cmd->add_option("--budget", c.budget, "kernel boxes per cell before giving up");
    }
}

double require(const std::optional<double>& flag, const std::optional<Number>& file, const char* name) {
    if (flag) return *flag;
    if (file) return file->value;
    throw ParseError(std::string("no ") + name + " given (flag or instance field)");
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return static_cast<bool>(out);
}

} // namespace

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
            throw equilib::InvalidInput("--point: cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

int main(int argc, char** argv) {
    CLI::App app{"Approximate equilibrium points of electrostatic potentials"};
    app.require_subcommand(1);

    Common weak, strong, grid, oracle, eval;
    bool enumerate_all = false;
    auto* c_weak = app.add_subcommand("solve-weak", "a point with ||grad f||_inf <= eps, or proof of none <= delta");
    add_common(c_weak, weak, true);
    c_weak->add_flag("--all", enumerate_all, "report every cell with a solution");

    bool auto_delta = false;
    double delta_floor = kDefaultDeltaFloor;
    auto* c_strong = app.add_subcommand("solve-strong", "a certified point near an exact equilibrium");
    add_common(c_strong, strong, true);
    c_strong->add_flag("--auto", auto_delta, "halve delta from 1 until success");
    c_strong->add_option("--delta-floor", delta_floor, "smallest delta tried by --auto");

    std::string grid_out;
    auto* c_grid = app.add_subcommand("grid", "dump the solver grid as CSV or SVG");
    add_common(c_grid, grid, false);
    c_grid->add_option("--out", grid_out, "output file; .svg gives a drawing, anything else CSV")->required();

    bool scan = false, bisect = false;
    double h = 1e-3;
    std::optional<double> threshold;
    auto* c_oracle = app.add_subcommand("oracle", "brute-force scan and two-charge bisection");
    add_common(c_oracle, oracle, false);
    c_oracle->add_flag("--scan", scan, "dense grid scan of ||grad f||_inf");
    c_oracle->add_flag("--bisect", bisect, "bisection between the first two charges");
    c_oracle->add_option("--spacing", h, "scan spacing h");
    c_oracle->add_option("--threshold", threshold, "scan threshold (default: epsilon)");
    c_oracle->add_option("--threads", oracle.threads, "scan threads")->check(CLI::Range(1u, 256u));

    std::string point_text;
    auto* c_eval = app.add_subcommand("eval", "potential, gradient and Hessian at a point");
    add_common(c_eval, eval, false);
    // one token "x,y,...": a delimited vector option would swallow the instance path
    c_eval->add_option("--point", point_text, "coordinates, comma separated")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    std::string command = app.get_subcommands().front()->get_name();
    bool json = weak.json || strong.json || grid.json || oracle.json || eval.json;
    auto fail = [&](int code, const char* kind, const std::string& msg) {
        std::cerr << "error: " << msg << "\n";
        if (json) std::cout << error_json(command, kind, msg);
        return code;
    };

    try {
        if (c_weak->parsed()) {
            const Instance inst = load_instance(weak.instance);
            SolverOptions opt;
            opt.threads = weak.threads;
            opt.budget = weak.budget;
            opt.enumerate_all = enumerate_all;
            const WeakAnswer a = solve_weak(inst.system(), inst.domain(), require(weak.epsilon, inst.epsilon, "epsilon"),
                                            require(weak.delta, inst.delta, "delta"), opt);
            std::cout << (weak.json ? weak_json(a) : weak_text(a));
            return kOk;
        }
        if (c_strong->parsed()) {
            const Instance inst = load_instance(strong.instance);
            SolverOptions opt;
            opt.threads = strong.threads;
            opt.budget = strong.budget;
            const bool use_auto = auto_delta || (inst.auto_delta && !strong.delta);
            const double eps = require(strong.epsilon, inst.epsilon, "epsilon");
            const StrongResult r = use_auto
                                       ? solve_strong_auto(inst.system(), inst.domain(), eps, opt, delta_floor)
                                       : solve_strong(inst.system(), inst.domain(), eps,
                                                      require(strong.delta, inst.delta, "delta"), opt);
            std::cout << (strong.json ? strong_json(r, use_auto) : strong_text(r));
            return r.found() ? kOk : kNotFound;
        }
        if (c_grid->parsed()) {
            const Instance inst = load_instance(grid.instance);
            const bool svg = grid_out.size() >= 4 && grid_out.compare(grid_out.size() - 4, 4, ".svg") == 0;
            if (svg && inst.dim != 2) return fail(kNoSvg, "Unsupported", "SVG output needs d = 2");
            const double eps =
                inst.delta && !grid.epsilon ? inst.delta->value : require(grid.epsilon, inst.epsilon, "epsilon");
            const GridLayout g = grid_layout(inst.system(), inst.domain(), eps);
            if (!write_file(grid_out, svg ? grid_svg(g) : grid_csv(g)))
                return fail(kFailure, "IoError", "cannot write " + grid_out);
            std::size_t cuts = 0;
            for (const auto& c : g.cuts)
                for (const auto& a : c.cuts) cuts += a.size();
            if (grid.json)
                std::cout << "{\n  \"command\": \"grid\",\n  \"out\": \"" << grid_out << "\",\n  \"pieces\": " << g.cuts.size()
                          << ",\n  \"cuts\": " << cuts << "\n}\n";
            else
                std::cout << "wrote " << grid_out << " (" << g.cuts.size() << " pieces, " << cuts << " cuts)\n";
            return kOk;
        }
        if (c_oracle->parsed()) {
            const Instance inst = load_instance(oracle.instance);
            const ChargeSystem sys = inst.system();
            if (!scan && !bisect) scan = true;
            std::optional<ScanReport> rep;
            std::optional<BisectResult> bis;
            if (bisect) {
                if (sys.size() < 2) throw InvalidInput("bisection needs two charges");
                const auto& c = sys.charges();
                bis = two_charge_bisect(c[0].q, c[1].q, dist2(c[0].position, c[1].position), 1e-12);
            }
            if (scan) {
                const double thr = threshold ? *threshold : require(oracle.epsilon, inst.epsilon, "threshold");
                rep = brute_force_scan(sys, inst.domain(), thr, h, oracle.threads);
            }
            if (oracle.json) {
                std::cout << oracle_json(rep, bis);
            } else {
                if (bis) std::printf("bisect %.9f (%d iterations)\n", bis->x, bis->iterations);
                if (rep) std::cout << rep->to_text();
            }
            return kOk;
        }
        if (c_eval->parsed()) {
            const Instance inst = load_instance(eval.instance);
            const ChargeSystem sys = inst.system();
            const auto point = parse_point(point_text);
            if (static_cast<int>(point.size()) != sys.dim()) throw InvalidInput("--point has the wrong dimension");
            std::cout << (eval.json ? eval_json(sys, point) : eval_text(sys, point));
            return kOk;
        }
    } catch (const ParseError& e) {
        return fail(kParse, "ParseError", e.what());
    } catch (const BudgetExceeded& e) {
        return fail(kBudget, "BudgetExceeded", std::string(e.what()) + (e.cell().empty() ? "" : " at " + e.cell()));
    } catch (const TooFine& e) {
        return fail(kTooFine, "TooFine", e.what());
    } catch (const InvalidInput& e) {
        return fail(kParse, "InvalidInput", e.what());
    } catch (const UnboundedDomain& e) {
        return fail(kParse, "UnboundedDomain", e.what());
    } catch (const EmptyPolytope& e) {
        return fail(kParse, "EmptyPolytope", e.what());
    } catch (const std::exception& e) {
        return fail(kFailure, "Error", e.what());
    }
    return kFailure;
}
