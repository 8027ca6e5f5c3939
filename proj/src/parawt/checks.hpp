// Registry of named checks runnable from an experiment config.
#pragma once

#include <functional>
#include <span>
#include <string>

#include "parawt/analysis.hpp"
#include "parawt/config.hpp"

namespace parawt
{

struct CheckInfo
{
    std::string name;
    // The inequality or identity the check verifies.
    std::string statement;
    std::function<CheckReport(JsonView const& task, ExperimentConfig const& cfg)> run;
};

std::span<CheckInfo const> check_registry();
CheckInfo const* find_check(std::string const& name);

// Merges per-instance reports of one check into a single report: the worst
// margin wins, the pass flag requires every instance to pass.
CheckReport combine_reports(std::string const& name, nlohmann::json params,
                            std::vector<CheckReport> const& parts);

}  // namespace parawt
