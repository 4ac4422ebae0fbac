#include "equilib/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "equilib/error.hpp"

namespace equilib {

using nlohmann::json;

Number Number::ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ParseError("fraction with zero denominator");
    Number n(static_cast<double>(num) / static_cast<double>(den));
    n.fraction = std::make_pair(num, den);
    return n;
}

namespace {

Number number_from(const json& j, const char* what) {
    if (j.is_number()) return Number(j.get<double>());
    if (j.is_object() && j.contains("num") && j.contains("den") && j.at("num").is_number_integer() &&
        j.at("den").is_number_integer())
        return Number::ratio(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
    throw ParseError(std::string(what) + ": expected a number or {\"num\", \"den\"}");
}

json number_to(const Number& n) {
    if (n.fraction) return json{{"num", n.fraction->first}, {"den", n.fraction->second}};
    return n.value;
}

std::vector<Number> vector_from(const json& j, int dim, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError(std::string(what) + ": expected an array of " + std::to_string(dim) + " numbers");
    std::vector<Number> v;
    for (const auto& e : j) v.push_back(number_from(e, what));
    return v;
}

json vector_to(const std::vector<Number>& v) {
    json a = json::array();
    for (const auto& n : v) a.push_back(number_to(n));
    return a;
}

Point values(const std::vector<Number>& v) {
    Point p;
    for (const auto& n : v) p.push_back(n.value);
    return p;
}

} // namespace

ChargeSystem Instance::system() const {
    std::vector<Charge> cs;
    for (const auto& c : charges) cs.push_back({c.q.value, values(c.position)});
    return ChargeSystem(dim, std::move(cs));
}

Polytope Instance::domain() const {
    if (box) return Polytope::from_box(Box(values(box->first), values(box->second)));
    std::vector<HalfSpace> hs;
    for (const auto& r : rows) hs.push_back({values(r.normal), r.offset.value});
    return Polytope(dim, std::move(hs));
}

Instance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    Instance inst;
    try {
        if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
            throw ParseError("missing integer field \"dimension\"");
        inst.dim = j.at("dimension").get<int>();
        if (inst.dim < 1 || inst.dim > kMaxDim) throw ParseError("dimension must be between 1 and 4");
        if (!j.contains("charges") || !j.at("charges").is_array()) throw ParseError("missing array \"charges\"");
        for (const auto& c : j.at("charges")) {
            if (!c.is_object() || !c.contains("q") || !c.contains("position"))
                throw ParseError("each charge needs \"q\" and \"position\"");
            inst.charges.push_back({number_from(c.at("q"), "q"), vector_from(c.at("position"), inst.dim, "position")});
        }
        if (!j.contains("domain") || !j.at("domain").is_object()) throw ParseError("missing object \"domain\"");
        const auto& dom = j.at("domain");
        if (dom.contains("box") == dom.contains("polytope"))
            throw ParseError("domain needs exactly one of \"box\" or \"polytope\"");
        if (dom.contains("box")) {
            const auto& b = dom.at("box");
            if (!b.is_object() || !b.contains("lo") || !b.contains("hi")) throw ParseError("box needs \"lo\" and \"hi\"");
            inst.box = std::make_pair(vector_from(b.at("lo"), inst.dim, "lo"), vector_from(b.at("hi"), inst.dim, "hi"));
        } else {
            const auto& rows = dom.at("polytope");
            if (!rows.is_array() || rows.empty()) throw ParseError("polytope must be a nonempty array of rows");
            for (const auto& r : rows) {
                if (!r.is_object() || !r.contains("normal") || !r.contains("offset"))
                    throw ParseError("polytope rows need \"normal\" and \"offset\"");
                inst.rows.push_back({vector_from(r.at("normal"), inst.dim, "normal"), number_from(r.at("offset"), "offset")});
            }
        }
        if (j.contains("epsilon")) inst.epsilon = number_from(j.at("epsilon"), "epsilon");
        if (j.contains("delta")) inst.delta = number_from(j.at("delta"), "delta");
        if (j.contains("auto")) {
            if (!j.at("auto").is_boolean()) throw ParseError("\"auto\" must be a boolean");
            inst.auto_delta = j.at("auto").get<bool>();
        }
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    // content validation
    (void)inst.system();
    const Polytope X = inst.domain();
    if (X.empty()) throw EmptyPolytope("domain is empty");
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& inst) {
    json j;
    j["dimension"] = inst.dim;
    json cs = json::array();
    for (const auto& c : inst.charges) cs.push_back({{"q", number_to(c.q)}, {"position", vector_to(c.position)}});
    j["charges"] = cs;
    if (inst.box) {
        j["domain"] = {{"box", {{"lo", vector_to(inst.box->first)}, {"hi", vector_to(inst.box->second)}}}};
    } else {
        json rows = json::array();
        for (const auto& r : inst.rows) rows.push_back({{"normal", vector_to(r.normal)}, {"offset", number_to(r.offset)}});
        j["domain"] = {{"polytope", rows}};
    }
    if (inst.epsilon) j["epsilon"] = number_to(*inst.epsilon);
    if (inst.delta) j["delta"] = number_to(*inst.delta);
    if (inst.auto_delta) j["auto"] = true;
    return j.dump(2) + "\n";
}

} // namespace equilib
