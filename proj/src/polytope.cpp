#include "equilib/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "equilib/error.hpp"

namespace equilib {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

std::vector<HalfSpace> box_rows(const Box& b) {
    std::vector<HalfSpace> rows;
    const int d = b.dim();
    for (int j = 0; j < d; ++j) {
        Point n(d, 0.0);
        n[j] = 1.0;
        rows.push_back({n, b.hi[j]});
        n[j] = -1.0;
        rows.push_back({n, -b.lo[j]});
    }
    return rows;
}

// Rows with a single nonzero coefficient, if they describe a full box.
std::optional<Box> detect_box(int d, const std::vector<HalfSpace>& rows) {
    Point lo(d, -INFINITY), hi(d, INFINITY);
    for (const auto& r : rows) {
        int axis = -1;
        for (int j = 0; j < d; ++j) {
            if (r.normal[j] != 0.0) {
                if (axis >= 0) return std::nullopt;
                axis = j;
            }
        }
        if (axis < 0) {
            if (r.offset < 0.0) return Box(Point(d, 1.0), Point(d, -1.0));
            continue;
        }
        const double v = r.offset / r.normal[axis];
        if (r.normal[axis] > 0) hi[axis] = std::min(hi[axis], v);
        else lo[axis] = std::max(lo[axis], v);
    }
    for (int j = 0; j < d; ++j)
        if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) return std::nullopt;
    return Box(lo, hi);
}

template <class F>
void for_each_subset(int m, int k, F&& f) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > m) return;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::vector<Point> enumerate_vertices(int dim, const std::vector<HalfSpace>& rows, double tol) {
    std::vector<HalfSpace> unit;
    unit.reserve(rows.size());
    for (const auto& r : rows) {
        const double n = norm2(r.normal);
        if (n == 0.0) {
            if (r.offset < -tol) return {};
            continue;
        }
        HalfSpace u = r;
        for (double& v : u.normal) v /= n;
        u.offset /= n;
        unit.push_back(std::move(u));
    }
    std::vector<Point> verts;
    const int m = static_cast<int>(unit.size());
    Eigen::MatrixXd A(dim, dim);
    Eigen::VectorXd b(dim);
    for_each_subset(m, dim, [&](const std::vector<int>& idx) {
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) A(i, j) = unit[idx[i]].normal[j];
            b(i) = unit[idx[i]].offset;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rank() < dim) return;
        Eigen::VectorXd x = lu.solve(b);
        Point p(x.data(), x.data() + dim);
        const double scale = 1.0 + norm_inf(p);
        for (const auto& r : unit)
            if (dot(r.normal, p) > r.offset + tol * scale) return;
        for (const auto& v : verts)
            if (dist_inf(v, p) <= tol * scale) return;
        verts.push_back(std::move(p));
    });
    std::sort(verts.begin(), verts.end());
    return verts;
}

Polytope::Polytope(int dim, std::vector<HalfSpace> rows) : dim_(dim), rows_(std::move(rows)) {
    if (dim_ < 1 || dim_ > kMaxDim) throw InvalidInput("polytope dimension out of range");
    for (const auto& r : rows_) {
        if (static_cast<int>(r.normal.size()) != dim_) throw InvalidInput("polytope row has wrong dimension");
        for (double v : r.normal)
            if (!std::isfinite(v)) throw InvalidInput("polytope row is not finite");
        if (!std::isfinite(r.offset)) throw InvalidInput("polytope offset is not finite");
    }
    box_ = detect_box(dim_, rows_);
    if (box_) {
        if (box_->empty()) {
            box_.reset();
            return; // empty polytope: no vertices
        }
        // vertices of a box are only needed for emptiness / maximize
        bbox_ = *box_;
        const int nv = 1 << dim_;
        for (int mask = 0; mask < nv; ++mask) {
            Point v(dim_);
            for (int j = 0; j < dim_; ++j) v[j] = (mask >> j) & 1 ? box_->hi[j] : box_->lo[j];
            vertices_.push_back(std::move(v));
        }
        std::sort(vertices_.begin(), vertices_.end());
        return;
    }
    // Recession cone {y : n.y <= 0} must be trivial.
    std::vector<HalfSpace> cone;
    for (const auto& r : rows_) cone.push_back({r.normal, 0.0});
    for (auto& r : box_rows(Box(Point(dim_, -1.0), Point(dim_, 1.0)))) cone.push_back(r);
    for (const auto& v : enumerate_vertices(dim_, cone, 1e-12))
        if (norm_inf(v) > 1e-9) throw UnboundedDomain("domain is unbounded: " + to_string());
    vertices_ = enumerate_vertices(dim_, rows_);
    if (!vertices_.empty()) {
        Point lo = vertices_.front(), hi = vertices_.front();
        for (const auto& v : vertices_)
            for (int j = 0; j < dim_; ++j) {
                lo[j] = std::min(lo[j], v[j]);
                hi[j] = std::max(hi[j], v[j]);
            }
        bbox_ = Box(lo, hi);
    }
}

Polytope Polytope::from_box(const Box& box) { return Polytope(box.dim(), box_rows(box)); }

const Box& Polytope::bounding_box() const {
    if (empty()) throw EmptyPolytope("polytope is empty");
    return bbox_;
}

bool Polytope::contains(std::span<const double> x, double tol) const {
    for (const auto& r : rows_)
        if (dot(r.normal, x) > r.offset + tol * (1.0 + std::abs(r.offset))) return false;
    return true;
}

double Polytope::maximize(std::span<const double> c) const {
    if (empty()) throw EmptyPolytope("polytope is empty");
    double best = -INFINITY;
    for (const auto& v : vertices_) best = std::max(best, dot(c, v));
    return best;
}

namespace {

// min / max of n.x over a box
double box_min(const HalfSpace& r, const Box& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < r.normal.size(); ++j) s += r.normal[j] * (r.normal[j] > 0 ? b.lo[j] : b.hi[j]);
    return s;
}
double box_max(const HalfSpace& r, const Box& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < r.normal.size(); ++j) s += r.normal[j] * (r.normal[j] > 0 ? b.hi[j] : b.lo[j]);
    return s;
}

} // namespace

bool Polytope::contains_box(const Box& box, double tol) const {
    if (empty()) return false;
    for (const auto& r : rows_)
        if (box_max(r, box) > r.offset + tol * (1.0 + std::abs(r.offset))) return false;
    return true;
}

bool Polytope::intersects(const Box& box, double tol) const {
    if (empty()) return false;
    if (box_) return box_->intersects(box, tol);
    if (!bbox_.intersects(box, tol)) return false;
    bool all_inside = true;
    for (const auto& r : rows_) {
        const double slack = tol * (1.0 + std::abs(r.offset));
        if (box_min(r, box) > r.offset + slack) return false;
        if (box_max(r, box) > r.offset + slack) all_inside = false;
    }
    if (all_inside) return true;
    auto rows = rows_;
    for (auto& r : box_rows(box)) rows.push_back(std::move(r));
    return !enumerate_vertices(dim_, rows).empty();
}

Polytope Polytope::clipped(const Box& box) const {
    if (box_) {
        Box b = box_->intersection(box);
        if (b.empty()) return Polytope(dim_, {HalfSpace{Point(dim_, 0.0), -1.0}});
        return from_box(b);
    }
    auto rows = rows_;
    for (auto& r : box_rows(box)) rows.push_back(std::move(r));
    return Polytope(dim_, std::move(rows));
}

Polytope Polytope::scaled(double s) const {
    auto rows = rows_;
    for (auto& r : rows) r.offset *= s;
    return Polytope(dim_, std::move(rows));
}

std::string Polytope::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        os << (i ? "; " : "") << '(';
        for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << rows_[i].normal[j];
        os << ")x<=" << rows_[i].offset;
    }
    return os.str();
}

Point project(std::span<const double> x, const Polytope& X, const Box* clip) {
    if (X.empty()) throw EmptyPolytope("cannot project onto an empty polytope");
    const int d = X.dim();
    Point p(x.begin(), x.end());
    if (X.as_box()) {
        Box b = *X.as_box();
        if (clip) {
            b = b.intersection(*clip);
            if (b.empty()) throw EmptyPolytope("projection target is empty");
        }
        return b.clamp(p);
    }
    if (X.contains(p, 0.0) && (!clip || clip->contains(p))) return p;

    // Dykstra: one correction vector per half-space plus one for the box.
    const auto& rows = X.rows();
    const std::size_t m = rows.size();
    std::vector<Point> corr(m + 1, Point(d, 0.0));
    std::vector<double> nn(m);
    for (std::size_t i = 0; i < m; ++i) nn[i] = dot(rows[i].normal, rows[i].normal);
    Point y(d), prev(d);
    for (int iter = 0; iter < 20000; ++iter) {
        prev = p;
        for (std::size_t i = 0; i < m; ++i) {
            if (nn[i] == 0.0) continue;
            for (int j = 0; j < d; ++j) y[j] = p[j] + corr[i][j];
            const double v = dot(rows[i].normal, y) - rows[i].offset;
            Point q = y;
            if (v > 0)
                for (int j = 0; j < d; ++j) q[j] -= v / nn[i] * rows[i].normal[j];
            for (int j = 0; j < d; ++j) corr[i][j] = y[j] - q[j];
            p = q;
        }
        if (clip) {
            for (int j = 0; j < d; ++j) y[j] = p[j] + corr[m][j];
            Point q = clip->clamp(y);
            for (int j = 0; j < d; ++j) corr[m][j] = y[j] - q[j];
            p = q;
        }
        if (dist_inf(p, prev) < 1e-13 * (1.0 + norm_inf(p)) && X.contains(p, 1e-12) && (!clip || clip->contains(p, 1e-12)))
            break;
    }
    if (clip) p = clip->clamp(p);
    return p;
}

} // namespace equilib
