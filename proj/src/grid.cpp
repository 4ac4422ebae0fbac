#include "equilib/grid.hpp"

#include <algorithm>
#include <cmath>

#include "equilib/error.hpp"

namespace equilib {

double exclusion_radius_formula(int dim, std::size_t n, double q_max, double eps) {
    const double d = dim;
    return 1.0 / (d * std::sqrt(d) * (4.0 * static_cast<double>(n) * q_max + eps));
}

double exclusion_radius(const ChargeSystem& sys, double eps) {
    if (sys.size() < 2) throw TooFewCharges("exclusion radius needs at least two charges");
    if (!(eps >= 0.0)) throw InvalidInput("eps must be nonnegative");
    return exclusion_radius_formula(sys.dim(), sys.size(), sys.q_max(), eps);
}

std::vector<DomainPiece> split_domain(const Polytope& X, const ChargeSystem& sys, double rho) {
    std::vector<DomainPiece> out;
    if (X.empty()) return out;
    const int d = X.dim();
    if (d != sys.dim()) throw InvalidInput("domain and charge system differ in dimension");
    const Box& bb = X.bounding_box();
    const double tol = 1e-12 * (1.0 + bb.max_width());

    // per-axis intervals between consecutive planes, clipped to the bounding box
    std::vector<std::vector<std::pair<double, double>>> slabs(d);
    for (int j = 0; j < d; ++j) {
        std::vector<double> planes;
        for (const auto& c : sys.charges()) {
            planes.push_back(c.position[j] - rho);
            planes.push_back(c.position[j] + rho);
        }
        std::sort(planes.begin(), planes.end());
        planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
        std::vector<double> edges{bb.lo[j]};
        for (double p : planes)
            if (p > bb.lo[j] && p < bb.hi[j]) edges.push_back(p);
        edges.push_back(bb.hi[j]);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            if (edges[i + 1] - edges[i] > tol || edges.size() == 2) slabs[j].emplace_back(edges[i], edges[i + 1]);
    }

    std::array<std::size_t, kMaxDim> idx{};
    while (true) {
        Box slab{Point(d), Point(d)};
        for (int j = 0; j < d; ++j) {
            slab.lo[j] = slabs[j][idx[j]].first;
            slab.hi[j] = slabs[j][idx[j]].second;
        }
        bool excluded = false;
        for (const auto& c : sys.charges()) {
            Box ex(c.position, c.position);
            ex = ex.inflated(rho);
            if (ex.contains(slab, tol)) {
                excluded = true;
                break;
            }
        }
        if (!excluded && X.intersects(slab)) {
            Polytope region = X.clipped(slab);
            if (!region.empty()) out.push_back({slab, std::move(region)});
        }
        int j = d - 1;
        while (j >= 0 && ++idx[j] == slabs[j].size()) idx[j--] = 0;
        if (j < 0) break;
    }
    return out;
}

std::size_t AxisCuts::cell_count() const {
    std::size_t n = 1;
    for (const auto& c : cuts) n *= c.size() <= 1 ? 1 : c.size() - 1;
    return n;
}

Box AxisCuts::cell_box(std::span<const int> index) const {
    const int d = dim();
    Box b{Point(d), Point(d)};
    for (int j = 0; j < d; ++j) {
        const auto& c = cuts[j];
        b.lo[j] = c[index[j]];
        b.hi[j] = c.size() == 1 ? c[0] : c[index[j] + 1];
    }
    return b;
}

std::vector<double> beta_schedule(double beta_min, double width) {
    if (!(beta_min > 0.0)) throw InvalidInput("beta_min must be positive");
    int t_max = 1;
    while (beta_min * std::exp2(t_max) < width) ++t_max;
    std::vector<double> betas;
    for (int t = 0; t <= t_max; ++t) betas.push_back(beta_min * std::exp2(t));
    return betas;
}

namespace {

void add_uniform(std::vector<double>& out, double lo, double hi, std::int64_t pieces, double clip_lo, double clip_hi) {
    for (std::int64_t i = 0; i <= pieces; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(pieces);
        const double v = i == pieces ? hi : lo + (hi - lo) * t;
        if (v >= clip_lo && v <= clip_hi) out.push_back(v);
    }
}

} // namespace

AxisCuts build_axis_cuts(const std::vector<WellBehaved>& functions, const Polytope& X) {
    if (X.empty()) throw EmptyPolytope("cannot grid an empty domain");
    const Box& bb = X.bounding_box();
    const int d = X.dim();
    const double width = bb.max_width();
    AxisCuts out;
    out.cuts.resize(d);
    for (int j = 0; j < d; ++j) {
        out.cuts[j].push_back(bb.lo[j]);
        out.cuts[j].push_back(bb.hi[j]);
    }
    for (const auto& f : functions) {
        const std::int64_t pieces = 4 * f.params.C * d;
        for (int j = 0; j < d; ++j) add_uniform(out.cuts[j], bb.lo[j], bb.hi[j], pieces, bb.lo[j], bb.hi[j]);
        for (double beta : beta_schedule(f.params.beta_min, width))
            for (const auto& cb : f.cover.boxes(beta))
                for (int j = 0; j < d; ++j) add_uniform(out.cuts[j], cb.lo[j], cb.hi[j], pieces, bb.lo[j], bb.hi[j]);
    }
    const double tol = kCutMergeTolerance * std::max(1.0, width);
    for (auto& c : out.cuts) {
        std::sort(c.begin(), c.end());
        std::vector<double> merged;
        for (double v : c)
            if (merged.empty() || v - merged.back() > tol) merged.push_back(v);
        // keep the domain's upper face exactly
        if (merged.size() > 1 && c.back() != merged.back()) merged.back() = c.back();
        c = std::move(merged);
    }
    return out;
}

std::size_t axis_cut_bound(const std::vector<WellBehaved>& functions, const Polytope& X) {
    const Box& bb = X.bounding_box();
    const int d = X.dim();
    std::size_t total = 0;
    for (const auto& f : functions) {
        std::size_t covers = 0;
        for (double beta : beta_schedule(f.params.beta_min, bb.max_width())) covers += f.cover.count(beta);
        total += static_cast<std::size_t>(1 + 4 * f.params.C * d) * (1 + covers);
    }
    return total;
}

std::optional<Point> cell_anchor(const Box& cell, const Polytope& X) {
    if (!X.intersects(cell)) return std::nullopt;
    const Point c = cell.center();
    if (X.as_box()) return X.as_box()->intersection(cell).clamp(c);
    if (X.contains_box(cell)) return c;
    return project(c, X, &cell);
}

void enumerate_cells(const AxisCuts& cuts, const Polytope& X, const std::function<bool(const GridCell&)>& sink) {
    const int d = cuts.dim();
    std::array<int, kMaxDim> n{};
    for (int j = 0; j < d; ++j) {
        if (cuts.cuts[j].empty()) return;
        n[j] = std::max<int>(1, static_cast<int>(cuts.cuts[j].size()) - 1);
    }
    std::array<int, kMaxDim> idx{};
    while (true) {
        GridCell cell;
        cell.index = idx;
        cell.box = cuts.cell_box(std::span<const int>(idx.data(), d));
        if (auto a = cell_anchor(cell.box, X)) {
            cell.anchor = std::move(*a);
            if (!sink(cell)) return;
        }
        int j = d - 1;
        while (j >= 0 && ++idx[j] == n[j]) idx[j--] = 0;
        if (j < 0) return;
    }
}

std::vector<GridCell> collect_cells(const AxisCuts& cuts, const Polytope& X) {
    std::vector<GridCell> out;
    enumerate_cells(cuts, X, [&](const GridCell& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

} // namespace equilib
