#pragma once

#include "fractalfn/config.hpp"

namespace fractalfn {

struct RunResult {
    int exit_code = 0;  // 0 success, 2 failed condition check
    std::string report;
};

// dispatches a job, writes its artifacts and report.txt under out_dir;
// throws on errors (the CLI maps those to exit code 1)
RunResult run(const JobConfig& job);

}  // namespace fractalfn
