#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "equilib/geometry.hpp"

namespace equilib {

// Multi-index s = (s_1, ..., s_d) selecting the partial derivative D^s.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int dim);
    MultiIndex(std::initializer_list<int> entries);

    static MultiIndex unit(int dim, int axis, int times = 1);

    int dim() const { return dim_; }
    int operator[](int j) const { return s_[j]; }
    void set(int j, int value) { s_[j] = static_cast<std::int16_t>(value); }

    // |s|
    int order() const;
    // s! as a double (exact for the orders used here)
    double factorial() const;

    MultiIndex plus(int axis, int times = 1) const;
    MultiIndex minus(int axis, int times = 1) const;
    MultiIndex operator+(const MultiIndex& o) const;
    // componentwise <=
    bool le(const MultiIndex& o) const;

    std::string to_string() const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::array<std::int16_t, kMaxDim> s_{};
    int dim_ = 0;
};

// All multi-indices of dimension `dim` with |s| == order, in lexicographic
// order with the first coordinate varying slowest (descending).
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);

// All multi-indices with |s| <= max_order, graded (by order, then as above).
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

// Shared, cached copy of multi_indices_up_to(dim, max_order).
const std::vector<MultiIndex>& graded_indices(int dim, int max_order);

// Number of multi-indices with |s| <= max_order, i.e. C(max_order + dim, dim).
std::size_t count_up_to(int dim, int max_order);

// Position of s in multi_indices_up_to(dim, *) ordering.
std::size_t graded_rank(const MultiIndex& s);

double factorial(int n);
double binomial(int n, int k);

} // namespace equilib
