#pragma once

#include <string>
#include <vector>

#include "tmss/runner/config.hpp"
#include "tmss/runner/output.hpp"

namespace tmss::runner {

// Computes the data tables of one experiment; nothing is written.
std::vector<Table> run_experiment(const Config& config);

struct RunSummary {
    std::vector<std::string> files;  // data files, without run.json
    int warnings = 0;
};

// Runs the experiment and writes its tables plus run.json into config "out".
RunSummary run_and_write(const Config& config);

}  // namespace tmss::runner
