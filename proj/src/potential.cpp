#include "equilib/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "equilib/error.hpp"

namespace equilib {

// ---------------------------------------------------------------- ChargeSystem

ChargeSystem::ChargeSystem(int dim, std::vector<Charge> charges)
    : dim_(dim), charges_(std::move(charges)) {
    if (dim_ < 1 || dim_ > kMaxDim)
        throw InvalidInput("dimension must be between 1 and " + std::to_string(kMaxDim));
    if (charges_.empty()) throw InvalidInput("at least one charge is required");
    double q_min = std::numeric_limits<double>::infinity();
    double q_abs_max = 0.0;
    for (const auto& c : charges_) {
        if (c.dim() != dim_) throw InvalidInput("charge position has wrong dimension");
        if (!std::isfinite(c.q) || c.q == 0.0) throw InvalidInput("charge strength must be finite and nonzero");
        for (double v : c.position)
            if (!std::isfinite(v)) throw InvalidInput("charge position must be finite");
        q_min = std::min(q_min, std::abs(c.q));
        q_abs_max = std::max(q_abs_max, std::abs(c.q));
    }
    double sep_min = std::numeric_limits<double>::infinity();
    double sep_max = 0.0;
    for (std::size_t i = 0; i < charges_.size(); ++i) {
        for (std::size_t k = i + 1; k < charges_.size(); ++k) {
            double s = dist_inf(charges_[i].position, charges_[k].position);
            if (s == 0.0) throw InvalidInput("charges " + std::to_string(i) + " and " + std::to_string(k) + " coincide");
            sep_min = std::min(sep_min, s);
            sep_max = std::max(sep_max, s);
        }
    }
    scale_q_ = 1.0 / q_min;
    scale_x_ = charges_.size() >= 2 ? 1.0 / sep_min : 1.0;
    q_max_ = q_abs_max * scale_q_;
    a_max_ = sep_max * scale_x_;
    normalized_.reserve(charges_.size());
    for (const auto& c : charges_) {
        Charge n{c.q * scale_q_, c.position};
        for (double& v : n.position) v *= scale_x_;
        normalized_.push_back(std::move(n));
    }
}

Point ChargeSystem::to_normalized(std::span<const double> x) const {
    Point p(x.begin(), x.end());
    for (double& v : p) v *= scale_x_;
    return p;
}

Point ChargeSystem::from_normalized(std::span<const double> x) const {
    Point p(x.begin(), x.end());
    for (double& v : p) v /= scale_x_;
    return p;
}

ChargeSystem ChargeSystem::normalized() const { return ChargeSystem(dim_, normalized_); }

ChargeSystem ChargeSystem::negated() const {
    auto c = charges_;
    for (auto& ch : c) ch.q = -ch.q;
    return ChargeSystem(dim_, std::move(c));
}

// ---------------------------------------------------------------- evaluation

namespace field {

double potential(std::span<const Charge> charges, std::span<const double> x) {
    double f = 0.0;
    for (const auto& c : charges) f += c.q / dist2(x, c.position);
    return f;
}

void gradient(std::span<const Charge> charges, std::span<const double> x, std::span<double> out) {
    const std::size_t d = x.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& c : charges) {
        double r2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) r2 += (x[j] - c.position[j]) * (x[j] - c.position[j]);
        const double r = std::sqrt(r2);
        const double s = -c.q / (r2 * r);
        for (std::size_t j = 0; j < d; ++j) out[j] += s * (x[j] - c.position[j]);
    }
}

void hessian(std::span<const Charge> charges, std::span<const double> x, std::span<double> out) {
    const std::size_t d = x.size();
    std::fill(out.begin(), out.end(), 0.0);
    double u[kMaxDim];
    for (const auto& c : charges) {
        double r2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = x[j] - c.position[j];
            r2 += u[j] * u[j];
        }
        const double r = std::sqrt(r2);
        const double inv3 = c.q / (r2 * r);
        const double inv5 = 3.0 * inv3 / r2;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                out[j * d + k] += inv5 * u[j] * u[k] - (j == k ? inv3 : 0.0);
    }
}

double min_distance_inf(std::span<const Charge> charges, std::span<const double> x) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : charges) m = std::min(m, dist_inf(x, c.position));
    return m;
}

} // namespace field

namespace {

void check_regular(const ChargeSystem& sys, std::span<const double> x) {
    if (static_cast<int>(x.size()) != sys.dim()) throw InvalidInput("point has wrong dimension");
    const auto& cs = sys.charges();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (dist_inf(x, cs[i].position) * sys.scale_x() < kSingularGuard) {
            std::ostringstream os;
            os << "point coincides with charge " << i;
            throw SingularPoint(os.str());
        }
    }
}

} // namespace

double eval_potential(const ChargeSystem& sys, std::span<const double> x) {
    check_regular(sys, x);
    return field::potential(sys.charges(), x);
}

Point eval_gradient(const ChargeSystem& sys, std::span<const double> x) {
    check_regular(sys, x);
    Point g(sys.dim());
    field::gradient(sys.charges(), x, g);
    return g;
}

std::vector<double> hessian(const ChargeSystem& sys, std::span<const double> x) {
    check_regular(sys, x);
    const int d = sys.dim();
    std::vector<double> h(static_cast<std::size_t>(d * d), 0.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            MultiIndex s = MultiIndex::unit(d, j).plus(k);
            double v = 0.0;
            for (const auto& c : sys.charges()) v += charge_partial(c, s, x).value;
            h[j * d + k] = v;
            h[k * d + j] = v;
        }
    }
    return h;
}

double determinant(std::span<const double> m, int n) {
    if (n == 1) return m[0];
    if (n == 2) return m[0] * m[3] - m[1] * m[2];
    double det = 0.0;
    std::vector<double> minor(static_cast<std::size_t>((n - 1) * (n - 1)));
    for (int col = 0; col < n; ++col) {
        int idx = 0;
        for (int r = 1; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (c != col) minor[idx++] = m[r * n + c];
        const double sign = (col % 2 == 0) ? 1.0 : -1.0;
        det += sign * m[col] * determinant(minor, n - 1);
    }
    return det;
}

double hessian_det(const ChargeSystem& sys, std::span<const double> x) {
    auto h = hessian(sys, x);
    return determinant(h, sys.dim());
}

// ---------------------------------------------------------------- expansions

namespace {

// D^s (1/||u||) = sum_t coef_t u^{num_t} / ||u||^{|num_t| + |s| + 1}
struct UnitTerm {
    BigInt coef;
    MultiIndex num;
};

struct UnitExpansion {
    MultiIndex order;
    std::vector<UnitTerm> terms;
    std::vector<long double> coef_ld;
};

class ExpansionTable {
public:
    static ExpansionTable& for_dim(int dim) {
        static ExpansionTable tables[kMaxDim + 1] = {ExpansionTable(0), ExpansionTable(1), ExpansionTable(2),
                                                     ExpansionTable(3), ExpansionTable(4)};
        return tables[dim];
    }

    const UnitExpansion& get(const MultiIndex& s) {
        {
            std::shared_lock lock(mu_);
            auto it = entries_.find(s);
            if (it != entries_.end()) return *it->second;
        }
        if (s.order() > kMaxExpansionOrder)
            throw DegreeOverflow("derivative order " + std::to_string(s.order()) + " exceeds the supported maximum " +
                                 std::to_string(kMaxExpansionOrder));
        std::unique_ptr<UnitExpansion> built;
        if (s.order() == 0) {
            built = std::make_unique<UnitExpansion>();
            built->order = s;
            built->terms.push_back({BigInt(1), MultiIndex(dim_)});
        } else {
            int axis = dim_ - 1;
            while (s[axis] == 0) --axis;
            const UnitExpansion& parent = get(s.minus(axis));
            built = differentiate(parent, axis);
        }
        built->coef_ld.reserve(built->terms.size());
        for (const auto& t : built->terms) {
            long double c = t.coef.convert_to<long double>();
            if (!std::isfinite(c)) throw DegreeOverflow("expansion coefficient overflows long double");
            built->coef_ld.push_back(c);
        }
        std::unique_lock lock(mu_);
        auto [it, inserted] = entries_.emplace(s, std::move(built));
        return *it->second;
    }

private:
    explicit ExpansionTable(int dim) : dim_(dim) {}

    std::unique_ptr<UnitExpansion> differentiate(const UnitExpansion& parent, int axis) const {
        const int k = parent.order.order();
        std::map<MultiIndex, BigInt> merged;
        for (const auto& t : parent.terms) {
            const int t_den = t.num.order() + k + 1;
            if (t.num[axis] > 0) merged[t.num.minus(axis)] += t.coef * t.num[axis];
            merged[t.num.plus(axis)] -= t.coef * t_den;
        }
        auto out = std::make_unique<UnitExpansion>();
        out->order = parent.order.plus(axis);
        for (auto& [num, coef] : merged)
            if (coef != 0) out->terms.push_back({coef, num});
        return out;
    }

    int dim_;
    std::shared_mutex mu_;
    std::map<MultiIndex, std::unique_ptr<UnitExpansion>> entries_;
};

constexpr long double kUnitRoundoffLd = std::numeric_limits<long double>::epsilon() / 2;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// Precomputed normalized direction w = u / r and its powers for one charge.
struct DirectionPowers {
    int dim = 0;
    int max_power = 0;
    long double r = 0.0L;
    std::vector<long double> pow; // pow[j * (max_power + 1) + p] = w_j^p

    DirectionPowers(const Charge& c, std::span<const double> x, int max_pow) : dim(c.dim()), max_power(max_pow) {
        long double u[kMaxDim];
        long double r2 = 0.0L;
        for (int j = 0; j < dim; ++j) {
            u[j] = static_cast<long double>(x[j]) - static_cast<long double>(c.position[j]);
            r2 += u[j] * u[j];
        }
        r = std::sqrt(r2);
        pow.assign(static_cast<std::size_t>(dim * (max_power + 1)), 1.0L);
        for (int j = 0; j < dim; ++j) {
            const long double w = u[j] / r;
            for (int p = 1; p <= max_power; ++p) pow[j * (max_power + 1) + p] = pow[j * (max_power + 1) + p - 1] * w;
        }
    }

    long double monomial(const MultiIndex& n) const {
        long double m = 1.0L;
        for (int j = 0; j < dim; ++j) m *= pow[j * (max_power + 1) + n[j]];
        return m;
    }
};

struct PartialLd {
    long double value = 0.0L;
    long double error = 0.0L;
};

// Value in extended precision and a bound on its extended-precision error.
PartialLd evaluate_unit(const UnitExpansion& e, const DirectionPowers& w, double q) {
    const int k = e.order.order();
    long double sum = 0.0L;
    long double abs_sum = 0.0L;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        const long double v = e.coef_ld[i] * w.monomial(e.terms[i].num);
        sum += v;
        abs_sum += std::abs(v);
    }
    const long double scale = static_cast<long double>(q) / std::pow(w.r, static_cast<long double>(k + 1));
    // Rounding in w, its powers, the products, the sum and the radial scale.
    const long double rel = (6.0L * k + static_cast<long double>(e.terms.size()) + 40.0L) * kUnitRoundoffLd;
    return {sum * scale, abs_sum * std::abs(scale) * rel};
}

PartialValue to_double(const PartialLd& p) {
    PartialValue out;
    out.value = static_cast<double>(p.value);
    if (!std::isfinite(out.value)) throw DegreeOverflow("derivative value overflows double");
    out.error = static_cast<double>(p.error * (1.0L + 1e-15L)) + kUnitRoundoff * std::abs(out.value) +
                std::numeric_limits<double>::denorm_min();
    return out;
}

} // namespace

double DerivativeExpansion::evaluate(std::span<const double> x) const {
    const int d = charge.dim();
    double u[kMaxDim];
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
        u[j] = x[j] - charge.position[j];
        r2 += u[j] * u[j];
    }
    const double r = std::sqrt(r2);
    double sum = 0.0;
    for (const auto& t : terms) {
        double m = t.kappa / std::pow(r, t.den_pow);
        for (int j = 0; j < d; ++j) m *= std::pow(u[j], t.num[j]);
        sum += m;
    }
    return sum;
}

DerivativeExpansion derivative_terms(const Charge& charge, const MultiIndex& order) {
    if (order.dim() != charge.dim()) throw InvalidInput("multi-index dimension does not match the charge");
    const auto& unit = ExpansionTable::for_dim(charge.dim()).get(order);
    DerivativeExpansion out;
    out.charge = charge;
    out.order = order;
    const int k = order.order();
    out.terms.reserve(unit.terms.size());
    for (std::size_t i = 0; i < unit.terms.size(); ++i) {
        PolyTerm t;
        t.coefficient = unit.terms[i].coef;
        t.kappa = static_cast<double>(unit.coef_ld[i]) * charge.q;
        if (!std::isfinite(t.kappa)) throw DegreeOverflow("term coefficient overflows double");
        t.num = unit.terms[i].num;
        t.den_pow = t.num.order() + k + 1;
        out.terms.push_back(std::move(t));
    }
    return out;
}

std::size_t unmerged_term_bound(int dim, int order) {
    std::size_t b = 1;
    for (int i = 0; i < order; ++i) b *= static_cast<std::size_t>(2 * dim);
    return b;
}

double derivative_bound(const Charge& charge, int k, double r) {
    if (k > 160) {
        const double lg = std::lgamma(k + 1.0) + k * std::log(2.0) + std::log(std::abs(charge.q)) - (k + 1) * std::log(r);
        return std::exp(lg);
    }
    double f = std::abs(charge.q);
    for (int i = 1; i <= k; ++i) f *= (2.0 * i) / r;
    return f / r;
}

PartialValue charge_partial(const Charge& charge, const MultiIndex& s, std::span<const double> x) {
    const auto& unit = ExpansionTable::for_dim(charge.dim()).get(s);
    DirectionPowers w(charge, x, s.order());
    return to_double(evaluate_unit(unit, w, charge.q));
}

std::vector<PartialValue> potential_partials(std::span<const Charge> charges, std::span<const double> x,
                                             int max_order) {
    const int d = static_cast<int>(x.size());
    const auto indices = multi_indices_up_to(d, max_order);
    std::vector<PartialLd> acc(indices.size());
    std::vector<long double> magnitude(indices.size(), 0.0L);
    auto& table = ExpansionTable::for_dim(d);
    std::vector<const UnitExpansion*> units(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) units[i] = &table.get(indices[i]);
    for (const auto& c : charges) {
        DirectionPowers w(c, x, max_order);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const PartialLd p = evaluate_unit(*units[i], w, c.q);
            acc[i].value += p.value;
            acc[i].error += p.error;
            magnitude[i] += std::abs(p.value);
        }
    }
    // Summation over charges happens in extended precision; one final rounding to double.
    const long double gamma = (static_cast<long double>(charges.size()) + 1.0L) * kUnitRoundoffLd * 1.01L;
    std::vector<PartialValue> out(indices.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc[i].error += gamma * magnitude[i];
        out[i] = to_double(acc[i]);
    }
    return out;
}

} // namespace equilib
