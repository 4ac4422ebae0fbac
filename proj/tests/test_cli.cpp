#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "equilib/error.hpp"
#include "equilib/instance.hpp"

using namespace equilib;

namespace {

const std::string kCli = EQUILIB_CLI;
const std::string kInstances = EQUILIB_INSTANCES;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    FILE* p = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string inst(const std::string& name) { return kInstances + "/" + name + ".json"; }

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("equilib_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

} // namespace

TEST_CASE("instance round trip") {
    for (const char* name : {"golden_two_charge", "symmetric", "far_domain", "single_charge", "three_charges", "three_d"}) {
        const Instance a = load_instance(inst(name));
        const Instance b = parse_instance(serialize_instance(a));
        CHECK(a == b);
        CHECK(serialize_instance(b) == serialize_instance(a));
    }
    const Instance t = load_instance(inst("three_charges"));
    REQUIRE(t.charges[1].q.fraction);
    CHECK(t.charges[1].q.value == 1.5);
    CHECK(t.rows.size() == 3);
    // shortest round-trip numbers survive exactly
    Instance g = load_instance(inst("golden_two_charge"));
    g.epsilon = Number(0.1 + 0.2);
    CHECK(parse_instance(serialize_instance(g)).epsilon->value == 0.1 + 0.2);
}

TEST_CASE("instance validation") {
    const std::string box = R"("domain": {"box": {"lo": [0, 0], "hi": [1, 1]}})";
    CHECK_THROWS_AS(parse_instance(R"({"dimension": 2, "charges": [], )" + box + "}"), InvalidInput);
    CHECK_THROWS_AS(parse_instance(R"({"dimension": 2, "charges": [{"q": 1, "position": [0, 0]}, {"q": 2, "position": [0, 0]}], )" + box + "}"),
                    InvalidInput);
    CHECK_THROWS_AS(parse_instance(R"({"dimension": 2, "charges": [{"q": 1, "position": [0, 0]}],
        "domain": {"polytope": [{"normal": [1, 0], "offset": 1}]}})"),
                    UnboundedDomain);
    CHECK_THROWS_AS(parse_instance("{"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"dimension": 2})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"dimension": 2, "charges": [{"q": {"num": 1, "den": 0}, "position": [0, 0]}], )" + box + "}"),
                    ParseError);
}

TEST_CASE("solve-weak command") {
    auto r = run("solve-weak " + inst("golden_two_charge"));
    CHECK(r.code == 0);
    CHECK(r.out.find("point (0.41421") != std::string::npos);

    r = run("solve-weak --json " + inst("golden_two_charge"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "point");
    CHECK(std::abs(j["point"][0].get<double>() - 0.414214) < 1e-5);

    r = run("solve-weak --json " + inst("far_domain"));
    CHECK(r.code == 0);
    const auto k = nlohmann::json::parse(r.out);
    CHECK(k["status"] == "no_delta_solution");
    CHECK(k["delta"].get<double>() == 1e-5);

    write(tmp("bad.json"), R"({"dimension": 2, "charges": [)");
    r = run("solve-weak " + tmp("bad.json"));
    CHECK(r.code == 2);
    CHECK(r.out.empty());

    r = run("solve-weak --budget 2 " + inst("golden_two_charge"));
    CHECK(r.code == 3);
}

TEST_CASE("solve-strong command") {
    auto r = run("solve-strong --auto --epsilon 1e-4 --json " + inst("golden_two_charge"));
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["certified"] == true);
    CHECK(std::abs(j["point"][0].get<double>() - 0.414214) < 1e-4);

    r = run("solve-strong --auto --epsilon 1e-4 " + inst("symmetric"));
    CHECK(r.code == 0);
    CHECK(r.out.find("certified") != std::string::npos);

    r = run("solve-strong --delta 0.5 --epsilon 1e-3 " + inst("far_domain"));
    CHECK(r.code == 4);
    r = run("solve-strong --auto --epsilon 1e-3 " + inst("far_domain"));
    CHECK(r.code == 4);
}

TEST_CASE("grid command") {
    auto r = run("grid --out " + tmp("one.svg") + " " + inst("single_charge"));
    REQUIRE(r.code == 0);
    const std::string svg = slurp(tmp("one.svg"));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("class=\"exclusion\"") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);

    r = run("grid --out " + tmp("three.svg") + " " + inst("three_charges"));
    CHECK(r.code == 0);

    r = run("grid --out " + tmp("three_d.svg") + " " + inst("three_d"));
    CHECK(r.code == 5);

    r = run("grid --json --out " + tmp("golden.csv") + " " + inst("golden_two_charge"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    std::ifstream csv(tmp("golden.csv"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == j["cuts"].get<std::size_t>() + 1);

    r = run("grid --out " + tmp("three_d.csv") + " " + inst("three_d"));
    CHECK(r.code == 0);
}

TEST_CASE("oracle and eval commands") {
    auto r = run("oracle --bisect " + inst("golden_two_charge"));
    CHECK(r.code == 0);
    CHECK(r.out.find("0.41421356") != std::string::npos);

    r = run("oracle --scan --spacing 0.01 --threshold 0.5 --json " + inst("symmetric"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    std::vector<std::pair<double, double>> pts, mirrored;
    for (const auto& p : j["scan"]["points"]) {
        const double x = std::round(p["x"][0].get<double>() * 1e6) / 1e6, y = std::round(p["x"][1].get<double>() * 1e6) / 1e6;
        pts.push_back({x, y});
        mirrored.push_back({-x + 0.0, y});
    }
    std::sort(pts.begin(), pts.end());
    std::sort(mirrored.begin(), mirrored.end());
    CHECK(!pts.empty());
    CHECK(pts == mirrored);

    r = run("oracle --scan --spacing 1e-6 " + inst("golden_two_charge"));
    CHECK(r.code == 6);

    r = run("eval --point 0.5,0 --json " + inst("golden_two_charge"));
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["potential"].get<double>() == doctest::Approx(6.0));
    // flags may follow the instance path
    r = run("eval --point 0.5,0 " + inst("golden_two_charge") + " --json");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["potential"].get<double>() == doctest::Approx(6.0));
    CHECK(run("eval --point 0.5,zero " + inst("golden_two_charge")).code == 2);
    CHECK(run("eval --point 0.5 " + inst("golden_two_charge")).code == 2);
}

TEST_CASE("json output is deterministic") {
    const auto a = run("solve-weak --json --threads 2 " + inst("three_charges"));
    const auto b = run("solve-weak --json --threads 2 " + inst("three_charges"));
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto c = run("solve-strong --auto --json --epsilon 1e-4 " + inst("golden_two_charge"));
    const auto d = run("solve-strong --auto --json --epsilon 1e-4 " + inst("golden_two_charge"));
    CHECK(c.out == d.out);
}
