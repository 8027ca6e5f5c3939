// Exercises the shared library through its C header only.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "parawt.h"

namespace fs = std::filesystem;

namespace
{

char const* kConfig = R"({
    "params": {"n": 1, "p": 2},
    "seed": 3,
    "grid": {"shape": [8, 16], "origin": [0, 0], "h_x": 0.5, "h_t": 0.125},
    "fields": {"f": {"kind": "bumps", "bumps": [{"center": [2, 1.75], "radius_x": 1, "radius_t": 0.5}]}},
    "tasks": [
        {"type": "constant_estimate", "name": "ones", "u": "one", "v": "one"},
        {"type": "operator_eval", "name": "maxf", "operator": "uncentered_maximal", "field": "f"}
    ]
})";

}  // namespace

TEST_CASE("version and status names")
{
    CHECK(std::string(parawt_version()).size() > 0);
    CHECK(std::string(parawt_status_name(PARAWT_OK)) == "ok");
    CHECK(std::string(parawt_status_name(PARAWT_E_CONFIG)) == "config");
}

TEST_CASE("null arguments and bad configs return error codes")
{
    parawt_config* cfg = nullptr;
    CHECK(parawt_config_parse(nullptr, &cfg) == PARAWT_E_NULL);
    CHECK(parawt_config_parse("{", &cfg) == PARAWT_E_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::string(parawt_last_error()).size() > 0);
    CHECK(parawt_config_parse(R"({"grid": {"shape": [4], "origin": [0, 0], "h_x": 1, "h_t": 1}})", &cfg) ==
          PARAWT_E_CONFIG);
    CHECK(std::string(parawt_last_error()).find("grid.shape") != std::string::npos);
    CHECK(parawt_config_load("/nonexistent/parawt.cfg", &cfg) != PARAWT_OK);
    parawt_config_free(nullptr);
    parawt_run_free(nullptr);
    parawt_field_free(nullptr);
}

TEST_CASE("run a config and read results back")
{
    parawt_config* cfg = nullptr;
    REQUIRE(parawt_config_parse(kConfig, &cfg) == PARAWT_OK);
    CHECK(parawt_config_task_count(cfg) == 2);

    fs::path dir = fs::temp_directory_path() / "parawt_capi_run";
    fs::remove_all(dir);
    parawt_run* run = nullptr;
    REQUIRE(parawt_run_config(cfg, dir.string().c_str(), 1, 1, &run) == PARAWT_OK);
    parawt_config_free(cfg);

    CHECK(parawt_run_all_passed(run) == 1);
    REQUIRE(parawt_run_task_count(run) == 2);
    double value = 0, secs = -1;
    int ok = 0, pass = 0;
    REQUIRE(parawt_run_task_result(run, 0, &value, &ok, &pass, &secs) == PARAWT_OK);
    CHECK(ok == 1);
    CHECK(pass == 1);
    CHECK(std::abs(value - 1.0) < 1e-13);
    CHECK(secs >= 0.0);
    CHECK(parawt_run_task_result(run, 5, &value, &ok, &pass, &secs) == PARAWT_E_RANGE);

    char const* js = nullptr;
    REQUIRE(parawt_run_task_json(run, 1, &js) == PARAWT_OK);
    CHECK(std::string(js).find("\"maxf\"") != std::string::npos);
    CHECK(std::string(parawt_run_summary_csv(run)).rfind("name,params_hash,value,pass\n", 0) == 0);
    CHECK(fs::path(parawt_run_output_dir(run)) == dir);

    fs::path field;
    for (auto const& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".field")
            field = e.path();
    REQUIRE(!field.empty());
    parawt_run_free(run);

    parawt_field* f = nullptr;
    REQUIRE(parawt_field_load(field.string().c_str(), &f) == PARAWT_OK);
    int n = 0, shape[3] = {0, 0, 0};
    REQUIRE(parawt_field_shape(f, &n, shape) == PARAWT_OK);
    CHECK(n == 1);
    CHECK(shape[0] == 8);
    CHECK(shape[1] == 16);
    double hx = 0, ht = 0;
    REQUIRE(parawt_field_spacing(f, &hx, &ht) == PARAWT_OK);
    CHECK(hx == 0.5);
    CHECK(ht == 0.125);
    REQUIRE(parawt_field_size(f) == 128);
    double peak = 0;
    for (std::size_t i = 0; i < 128; ++i)
        peak = std::max(peak, parawt_field_values(f)[i]);
    CHECK(peak > 0.0);

    fs::path csv = dir / "copy.csv";
    REQUIRE(parawt_field_save(f, csv.string().c_str()) == PARAWT_OK);
    parawt_field* g = nullptr;
    REQUIRE(parawt_field_load(csv.string().c_str(), &g) == PARAWT_OK);
    for (std::size_t i = 0; i < 128; ++i)
        CHECK(parawt_field_values(g)[i] == parawt_field_values(f)[i]);
    parawt_field_free(g);
    parawt_field_free(f);
}

TEST_CASE("check listing")
{
    std::size_t n = parawt_check_count();
    CHECK(n > 0);
    bool welland = false, duality = false;
    for (std::size_t i = 0; i < n; ++i)
    {
        std::string name = parawt_check_name(i);
        welland = welland || name == "check_welland";
        duality = duality || name == "check_duality";
        CHECK(std::string(parawt_check_statement(i)).size() > 0);
    }
    CHECK(welland);
    CHECK(duality);
    CHECK(parawt_check_name(n) == nullptr);
}

TEST_CASE("rectangle parts")
{
    double box[4];
    REQUIRE(parawt_upper_part(0, 0, 1, 2, 0.5, box) == PARAWT_OK);
    CHECK(box[0] == -1.0);
    CHECK(box[1] == 0.5);
    CHECK(box[2] == 1.0);
    CHECK(box[3] == 1.0);
    REQUIRE(parawt_lower_part(0, 0, 1, 2, 0.5, box) == PARAWT_OK);
    CHECK(box[1] == -1.0);
    CHECK(box[3] == -0.5);
    CHECK(parawt_upper_part(0, 0, 1, 2, 1.0, box) == PARAWT_E_PARAMETER);
    CHECK(parawt_lower_part(0, 0, 1, 2, 0.5, nullptr) == PARAWT_E_NULL);
}
