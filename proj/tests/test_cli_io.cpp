// Copyright 2026 The gdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdl/cli.hpp"

using namespace gdl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gdl_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "gdl");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump();
    return p;
}

} // namespace

TEST_CASE("config round trip and defaults", "[io]") {
    RunConfig c;
    c.sigma = 3.25;
    c.system.preset = "tfim_chain";
    c.system.n_qubits = 2;
    c.experiment.sigmas = {2, 3};
    const json j = config_to_json(c);
    const RunConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(RunConfig{}) != config_hash(c));
    CHECK(config_to_json(config_from_json(json::object())) == config_to_json(RunConfig{}));
    CHECK_NOTHROW(validate(RunConfig{}));
}

TEST_CASE("config rejects unknown keys and wrong types with the field path", "[io]") {
    auto msg = [](const json& j) {
        try {
            config_from_json(j);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(msg({{"sigmaa", 2}}).find("sigmaa") != std::string::npos);
    CHECK(msg({{"system", {{"params", {{"hy", 1}}}}}}).find("system.params.hy") != std::string::npos);
    CHECK(msg({{"beta", "one"}}).find("beta") != std::string::npos);
    CHECK(msg({{"system", {{"n_qubits", 1.5}}}}).find("system.n_qubits") != std::string::npos);
    CHECK(msg({{"time", 3}}).find("time") != std::string::npos);
    RunConfig bad;
    bad.beta = -1.0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("float formatting round-trips", "[io]") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-7}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("report files and series layout", "[io]") {
    const fs::path dir = scratch("files");
    RunReport r;
    r.command = "scan-sigma";
    r.results = {{"x", 1.0 / 3.0}};
    r.scans.push_back({"a", "sigma", {1, 2, 3}, {0.3, 0.2, 0.1}, {}, false});
    auto files = write_report(r, dir / "one");
    CHECK(fs::exists(dir / "one/report.json"));
    CHECK(fs::exists(dir / "one/series.csv"));
    CHECK(fs::exists(dir / "one/manifest.json"));
    CHECK(files.size() == 3);
    const json rep = json::parse(slurp(dir / "one/report.json"));
    CHECK(rep.at("results").at("x").get<double>() == 1.0 / 3.0);
    CHECK_FALSE(rep.contains("timestamp"));
    CHECK_FALSE(rep.contains("wall_time_s"));
    const json man = json::parse(slurp(dir / "one/manifest.json"));
    CHECK(man.at("config_hash") == config_hash(r.config));
    CHECK(man.contains("timestamp"));
    const std::string csv = slurp(dir / "one/series.csv");
    CHECK(csv.rfind("axis,value\n", 0) == 0);

    r.scans.push_back({"b", "sigma", {1, 2}, {1, 1}, {}, false});
    write_report(r, dir / "two");
    CHECK(fs::exists(dir / "two/series_a.csv"));
    CHECK(fs::exists(dir / "two/series_b.csv"));
    CHECK_FALSE(fs::exists(dir / "two/series.csv"));
}

TEST_CASE("cli runs are deterministic and write the expected files", "[io][cli]") {
    const fs::path dir = scratch("det");
    REQUIRE(run({"scan-sigma", "-o", (dir / "a").string()}) == kExitOk);
    REQUIRE(run({"scan-sigma", "-o", (dir / "b").string()}) == kExitOk);
    for (const char* f : {"report.json", "series_lamb_defect.csv", "series_lamb_envelope.csv"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    // series axis strictly increasing
    std::istringstream in(slurp(dir / "a/series_lamb_envelope.csv"));
    std::string line;
    std::getline(in, line);
    double prev = -1.0;
    while (std::getline(in, line)) {
        const double x = std::stod(line.substr(0, line.find(',')));
        CHECK(x > prev);
        prev = x;
    }
    CHECK(run({"verify", "-o", (dir / "v").string()}) == kExitOk);
    const json rep = json::parse(slurp(dir / "v/report.json"));
    CHECK(rep.at("results").at("checks").size() == 4);
}

TEST_CASE("cli exit codes", "[io][cli]") {
    const fs::path dir = scratch("codes");
    CHECK(run({"verify", "-c", write_config(dir, {{"bogus", 1}}).string(), "-o", (dir / "o").string()}) == kExitValidation);
    CHECK(run({"verify", "-c", write_config(dir, {{"beta", 0}}).string(), "-o", (dir / "o").string()}) == kExitValidation);
    CHECK(run({"verify", "-c", (dir / "missing.json").string(), "-o", (dir / "o").string()}) == kExitValidation);
    CHECK(run({"no-such-command"}) == kExitValidation);
    CHECK(run({"verify", "-c", write_config(dir, {{"system", {{"n_qubits", 7}}}}).string(), "-o", (dir / "o").string()}) ==
          kExitValidation);
    // a channel this weak cannot mix to 1e-12 within the step cap
    CHECK(run({"mixing", "-c", write_config(dir, {{"alpha", 1e-4}, {"experiment", {{"eps", 1e-12}}}}).string(), "-o",
               (dir / "o").string()}) == kExitNumeric);
}
