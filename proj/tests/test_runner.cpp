#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "parawt/checks.hpp"
#include "parawt/error.hpp"
#include "parawt/runner.hpp"

using namespace parawt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

json base_config()
{
    return json::parse(R"({
        "params": {"n": 1, "p": 2},
        "seed": 9,
        "grid": {"shape": [16, 32], "origin": [0, 0], "h_x": 0.25, "h_t": 0.0625},
        "tasks": []
    })");
}

std::string config_error(json const& doc)
{
    try
    {
        ExperimentConfig::parse(doc);
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::config);
        return e.what();
    }
    return "";
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(std::string const& name)
{
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("config errors carry the field path")
{
    json doc = base_config();
    doc["grid"]["h_x"] = -1;
    CHECK(config_error(doc).find("grid.h_x") != std::string::npos);

    doc = base_config();
    doc["tasks"] = json::array({{{"type", "dance"}}});
    CHECK(config_error(doc).find("tasks[0].type") != std::string::npos);

    doc = base_config();
    doc["weights"] = {{"w", {{"kind", "spatial_power"}}}};
    CHECK(config_error(doc).find("weights.w.a") != std::string::npos);

    doc = base_config();
    doc["fields"] = {{"f", {{"kind", "bumps"}, {"bumps", "none"}}}};
    CHECK(config_error(doc).find("fields.f.bumps") != std::string::npos);
}

TEST_CASE("empty task list yields a header-only summary")
{
    ExperimentConfig cfg = ExperimentConfig::parse(base_config());
    fs::path dir = fresh_dir("parawt_runner_empty");
    RunResult r = run_experiment(cfg, {dir.string(), 1, true});
    CHECK(r.tasks.empty());
    CHECK(r.all_passed);
    CHECK(slurp(dir / "summary.csv") == "name,params_hash,value,pass\n");
}

TEST_CASE("constant estimate of constant weights is one")
{
    json doc = base_config();
    doc["tasks"] = json::array({{{"type", "constant_estimate"}, {"u", "one"}, {"v", "one"}}});
    RunResult r = run_experiment(ExperimentConfig::parse(doc), {"", 1, false});
    REQUIRE(r.tasks.size() == 1);
    CHECK(r.tasks[0].ok);
    CHECK(r.tasks[0].value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.all_passed);
    std::string csv = summary_csv(r.tasks);
    CHECK(csv.find(",1,true") != std::string::npos);
}

TEST_CASE("task failures do not stop later tasks")
{
    json doc = base_config();
    doc["tasks"] = json::array({{{"type", "constant_estimate"}, {"u", "missing"}, {"v", "one"}},
                                {{"type", "constant_estimate"}, {"u", "one"}, {"v", "one"}}});
    RunResult r = run_experiment(ExperimentConfig::parse(doc), {"", 1, false});
    REQUIRE(r.tasks.size() == 2);
    CHECK_FALSE(r.tasks[0].ok);
    CHECK(r.tasks[0].error.find("tasks[0].u") != std::string::npos);
    CHECK(r.tasks[1].ok);
    CHECK_FALSE(r.all_passed);
}

TEST_CASE("check registry")
{
    auto reg = check_registry();
    CHECK(find_check("check_welland") != nullptr);
    CHECK(find_check("check_duality") != nullptr);
    CHECK(find_check("check_nothing") == nullptr);
    std::size_t n = 0;
    for (auto const& c : reg)
    {
        CHECK(!c.statement.empty());
        CHECK(find_check(c.name) == &c);
        ++n;
    }
    CHECK(n == reg.size());
    CHECK(n >= 13);
}

TEST_CASE("same config and seed give an identical bundle for any job count")
{
    json doc = base_config();
    doc["fields"] = {{"f", {{"kind", "random_bumps"}, {"index", 0}}},
                     {"u", {{"kind", "noise"}, {"amplitude", 1.0}, {"offset", 0.5}}}};
    doc["weights"] = {{"wu", {{"kind", "field"}, {"field", "u"}}}};
    doc["tasks"] = json::array({
        {{"type", "constant_estimate"}, {"u", "wu"}, {"v", "wu"}, {"r", 2}, {"q", 4}},
        {{"type", "operator_eval"}, {"operator", "uncentered_maximal"}, {"field", "f"}},
        {{"type", "check"}, {"check", "check_duality"}, {"u", "wu"}, {"v", "wu"}, {"r", 2}, {"q", 4}},
        {{"type", "construction"}, {"construction", "selection"}, {"size", 40}},
    });
    ExperimentConfig cfg = ExperimentConfig::parse(doc);
    fs::path a = fresh_dir("parawt_runner_a"), b = fresh_dir("parawt_runner_b");
    RunResult ra = run_experiment(cfg, {a.string(), 1, true});
    RunResult rb = run_experiment(cfg, {b.string(), 2, true});
    REQUIRE(ra.tasks.size() == 4);
    for (auto const& t : ra.tasks)
        CHECK_MESSAGE(t.ok, t.error);

    std::size_t files = 0;
    for (auto const& e : fs::directory_iterator(a))
    {
        fs::path other = b / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
        ++files;
    }
    CHECK(files >= 6);
}
