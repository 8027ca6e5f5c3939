// Experiment configuration: JSON documents describing the grid, named
// weights and fields, and an ordered task list. Validation errors name the
// offending field path, e.g. "tasks[2].r".
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parawt/analysis.hpp"
#include "parawt/family.hpp"
#include "parawt/fields.hpp"
#include "parawt/weights.hpp"

namespace parawt
{

// Read-only view of a JSON node that remembers its path for error messages.
class JsonView
{
  public:
    JsonView(nlohmann::json const& j, std::string path) : j_(&j), path_(std::move(path)) {}

    nlohmann::json const& raw() const { return *j_; }
    std::string const& path() const { return path_; }
    bool has(std::string const& key) const;
    JsonView at(std::string const& key) const;
    JsonView at(std::size_t i) const;
    std::size_t size() const;
    bool is_object() const { return j_->is_object(); }
    bool is_array() const { return j_->is_array(); }

    double num(std::string const& key) const;
    double num(std::string const& key, double fallback) const;
    int integer(std::string const& key) const;
    int integer(std::string const& key, int fallback) const;
    std::uint64_t seed(std::string const& key) const;
    std::string str(std::string const& key) const;
    std::string str(std::string const& key, std::string const& fallback) const;
    bool flag(std::string const& key, bool fallback) const;
    std::vector<double> nums(std::string const& key) const;
    std::vector<double> nums(std::string const& key, std::vector<double> fallback) const;
    std::vector<int> ints(std::string const& key, std::vector<int> fallback) const;

    [[noreturn]] void error(std::string const& key, std::string const& msg) const;

  private:
    std::string child(std::string const& key) const;

    nlohmann::json const* j_;
    std::string path_;
};

GridSpec parse_grid(JsonView const& v, Params const& prm);
WeightSpec parse_weight(JsonView const& v);
FamilySpec parse_family(JsonView const& v);
Bump parse_bump(JsonView const& v, int n);
Box parse_box(JsonView const& v, int n);
Direction parse_direction(JsonView const& v, std::string const& key);
OperatorKind parse_operator(JsonView const& v, std::string const& key);

// Seeded random bumps inside a region given in cells from the window edge.
struct BumpDraw
{
    int count = 3;
    double rx_min = 3.0, rx_max = 8.0;
    double rt_min = 3.0, rt_max = 10.0;
    int margin_cells = 2;
    std::string stream = "fields";

    static BumpDraw parse(JsonView const& v, BumpDraw fallback);
    std::vector<Bump> draw(GridSpec const& g, std::uint64_t seed, std::uint64_t index) const;
};

struct FieldEntry
{
    SampledField field;
    // Continuum profile when the field was built from bumps.
    std::optional<std::vector<Bump>> bumps;
};

struct ExperimentConfig
{
    Params params;
    std::optional<GridSpec> grid;
    std::optional<std::uint64_t> seed;
    std::map<std::string, WeightSpec> weights;
    std::map<std::string, FieldEntry> fields;
    nlohmann::json tasks = nlohmann::json::array();
    std::string output;

    static ExperimentConfig parse(nlohmann::json const& doc);
    static ExperimentConfig load(std::string const& path);

    GridSpec const& require_grid(std::string const& path) const;
    std::uint64_t require_seed(std::string const& path) const;
    WeightSpec const& weight(JsonView const& task, std::string const& key) const;
    FieldEntry const& field(JsonView const& task, std::string const& key) const;
};

}  // namespace parawt
