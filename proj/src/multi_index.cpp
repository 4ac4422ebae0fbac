#include "equilib/multi_index.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "equilib/error.hpp"

namespace equilib {

MultiIndex::MultiIndex(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) throw InvalidInput("multi-index dimension out of range");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : dim_(static_cast<int>(entries.size())) {
    if (dim_ > kMaxDim) throw InvalidInput("multi-index dimension out of range");
    int j = 0;
    for (int v : entries) {
        if (v < 0) throw InvalidInput("multi-index entries must be nonnegative");
        s_[j++] = static_cast<std::int16_t>(v);
    }
}

MultiIndex MultiIndex::unit(int dim, int axis, int times) {
    MultiIndex m(dim);
    m.s_[axis] = static_cast<std::int16_t>(times);
    return m;
}

int MultiIndex::order() const {
    int k = 0;
    for (int j = 0; j < dim_; ++j) k += s_[j];
    return k;
}

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int j = 0; j < dim_; ++j) f *= equilib::factorial(s_[j]);
    return f;
}

MultiIndex MultiIndex::plus(int axis, int times) const {
    MultiIndex m = *this;
    m.s_[axis] = static_cast<std::int16_t>(m.s_[axis] + times);
    return m;
}

MultiIndex MultiIndex::minus(int axis, int times) const {
    assert(s_[axis] >= times);
    MultiIndex m = *this;
    m.s_[axis] = static_cast<std::int16_t>(m.s_[axis] - times);
    return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    MultiIndex m = *this;
    for (int j = 0; j < dim_; ++j) m.s_[j] = static_cast<std::int16_t>(m.s_[j] + o.s_[j]);
    return m;
}

bool MultiIndex::le(const MultiIndex& o) const {
    for (int j = 0; j < dim_; ++j)
        if (s_[j] > o.s_[j]) return false;
    return true;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << s_[j];
    os << ')';
    return os.str();
}

namespace {

void fill_order(int dim, int axis, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (axis == dim - 1) {
        cur.set(axis, remaining);
        out.push_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur.set(axis, v);
        fill_order(dim, axis + 1, remaining - v, cur, out);
    }
}

} // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
    std::vector<MultiIndex> out;
    if (dim == 0) {
        if (order == 0) out.emplace_back(0);
        return out;
    }
    MultiIndex cur(dim);
    fill_order(dim, 0, order, cur, out);
    return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
    std::vector<MultiIndex> out;
    out.reserve(count_up_to(dim, max_order));
    for (int k = 0; k <= max_order; ++k) {
        auto level = multi_indices_of_order(dim, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

const std::vector<MultiIndex>& graded_indices(int dim, int max_order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<std::vector<MultiIndex>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{dim, max_order}];
    if (!slot) slot = std::make_unique<std::vector<MultiIndex>>(multi_indices_up_to(dim, max_order));
    return *slot;
}

std::size_t count_up_to(int dim, int max_order) {
    if (max_order < 0) return 0;
    return static_cast<std::size_t>(std::llround(binomial(max_order + dim, dim)));
}

std::size_t graded_rank(const MultiIndex& s) {
    const int dim = s.dim();
    const int k = s.order();
    std::size_t rank = count_up_to(dim, k - 1);
    // Within the level: entries are ordered by s_0 descending, then recursively.
    int remaining = k;
    for (int j = 0; j + 1 < dim; ++j) {
        // skip blocks where coordinate j takes values larger than s_j
        for (int v = remaining; v > s[j]; --v) {
            int rest = remaining - v;
            rank += static_cast<std::size_t>(std::llround(binomial(rest + dim - j - 2, dim - j - 2)));
        }
        remaining -= s[j];
    }
    return rank;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::round(b);
}

} // namespace equilib
