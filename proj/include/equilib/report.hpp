#pragma once

#include <optional>
#include <span>
#include <string>

#include "equilib/equilibrium.hpp"
#include "equilib/oracle.hpp"

namespace equilib {

// Machine-readable results (see docs/output.schema.json). Numbers are written
// in shortest round-trip form, so every double is reproduced exactly.
std::string weak_json(const WeakAnswer& a);
std::string strong_json(const StrongResult& r, bool auto_delta);
std::string oracle_json(const std::optional<ScanReport>& scan, const std::optional<BisectResult>& bisect);
std::string eval_json(const ChargeSystem& sys, std::span<const double> x);
std::string error_json(const std::string& command, const std::string& kind, const std::string& message);

// Human-readable counterparts.
std::string weak_text(const WeakAnswer& a);
std::string strong_text(const StrongResult& r);
std::string eval_text(const ChargeSystem& sys, std::span<const double> x);

} // namespace equilib
