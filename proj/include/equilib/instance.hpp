#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equilib/polytope.hpp"
#include "equilib/potential.hpp"

namespace equilib {

// A number as written in an instance file: a decimal, or an integer fraction
// {"num": p, "den": q}. The fraction is kept so that files round-trip.
struct Number {
    double value = 0.0;
    std::optional<std::pair<std::int64_t, std::int64_t>> fraction;

    Number() = default;
    Number(double v) : value(v) {} // NOLINT
    static Number ratio(std::int64_t num, std::int64_t den);
    bool operator==(const Number&) const = default;
};

struct InstanceCharge {
    Number q;
    std::vector<Number> position;
    bool operator==(const InstanceCharge&) const = default;
};

struct InstanceRow {
    std::vector<Number> normal; // normal . x <= offset
    Number offset;
    bool operator==(const InstanceRow&) const = default;
};

struct Instance {
    int dim = 0;
    std::vector<InstanceCharge> charges;
    // Exactly one of box / rows describes the domain.
    std::optional<std::pair<std::vector<Number>, std::vector<Number>>> box;
    std::vector<InstanceRow> rows;
    std::optional<Number> epsilon;
    std::optional<Number> delta;
    bool auto_delta = false;

    ChargeSystem system() const;
    Polytope domain() const;
    bool operator==(const Instance&) const = default;
};

// Parses and validates (charges, domain). Throws ParseError on malformed
// JSON or missing fields, and the usual validation errors (InvalidInput,
// UnboundedDomain, ...) for bad content.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);

} // namespace equilib
