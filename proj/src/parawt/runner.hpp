// Executes the task list of an experiment config and writes the report
// bundle: summary.csv, one JSON record per task, and output fields.
#pragma once

#include <string>
#include <vector>

#include "parawt/config.hpp"
#include "parawt/report.hpp"

namespace parawt
{

struct RunOptions
{
    // Overrides the config's output directory when non-empty.
    std::string out_dir;
    int jobs = 1;
    bool write = true;
};

struct RunResult
{
    std::vector<TaskResult> tasks;
    std::string out_dir;
    // Every task ran and every check passed.
    bool all_passed = true;
};

// Runs one task; errors are captured in the result, never thrown.
TaskResult run_task(ExperimentConfig const& cfg, std::size_t index);

RunResult run_experiment(ExperimentConfig const& cfg, RunOptions const& opt);

}  // namespace parawt
