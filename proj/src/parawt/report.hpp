// Task results and their serialization: per-task JSON records and the flat
// CSV summary. Nothing time-dependent is written, so equal inputs give
// byte-identical bundles.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "parawt/analysis.hpp"

namespace parawt
{

struct TaskResult
{
    std::size_t index = 0;
    std::string name;
    std::string type;
    nlohmann::json params = nlohmann::json::object();
    // Check margin, estimate value, or a size, depending on the task type.
    double value = 0.0;
    bool ok = false;  // the task ran to completion
    bool pass = false;
    std::string error;
    nlohmann::json record = nlohmann::json::object();
    std::vector<std::pair<std::string, SampledField>> fields;
    double runtime_s = 0.0;  // reported on stderr only
};

// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string params_hash(nlohmann::json const& params);

// Replaces non-finite numbers by the strings "inf", "-inf", "nan".
nlohmann::json finite_json(nlohmann::json const& j);

nlohmann::json report_json(CheckReport const& r);
nlohmann::json task_json(TaskResult const& t);

// Shortest decimal that round-trips, with inf/nan spelled out.
std::string format_value(double v);

std::string summary_csv(std::vector<TaskResult> const& tasks);

// File stem for a task: zero-padded index and a sanitized name.
std::string task_stem(TaskResult const& t);

void write_text(std::string const& path, std::string const& text);

}  // namespace parawt
