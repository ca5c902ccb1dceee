#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "krf/cli/config.hpp"
#include "krf/error.hpp"

namespace krf::cli {

/** Process exit statuses. */
enum ExitCode : int
{
    ExitOk = 0,
    ExitGoldenMismatch = 1,
    ExitInputError = 2,        // malformed config, invalid class data, bad model
    ExitMonitorViolation = 3,
    ExitNumericalFailure = 4,  // non-finite state, step budget, lost positivity without a predicted singularity
};

/** Exit status for an exception escaping a command. */
int exit_code_for(const Error& e);

struct CommandResult
{
    int status = ExitOk;
    nlohmann::json verdict;   // the verdict.json contents
};

CommandResult cmd_predict(const ExperimentConfig& config, std::ostream& log);
CommandResult cmd_run(const ExperimentConfig& config, std::ostream& log);

/** Ids of the canned experiments: 9.2, 9.3a, ... */
std::vector<std::string> reproduce_ids();
int cmd_reproduce(const std::string& id, std::ostream& log, const std::string& data_dir = KRF_DATA_DIR);

struct SweepParameter
{
    std::string path;                  // dotted config path
    std::vector<nlohmann::json> values;
};

/** Parse "run.initial.c=1,2,3" (values are JSON literals or bare strings). */
SweepParameter parse_sweep_parameter(const std::string& text);

/**
 * Run the cartesian product of parameter values, each in <output_dir>/sweep_<index>,
 * on up to `workers` concurrent threads. Returns the largest exit status.
 */
int cmd_sweep(const nlohmann::json& base, const std::vector<SweepParameter>& params, unsigned workers,
              std::ostream& log);

/** Entry point of the krf executable. */
int main(int argc, char** argv);

}   // namespace krf::cli
