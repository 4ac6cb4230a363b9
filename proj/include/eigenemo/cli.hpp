#pragma once

#include <string>
#include <vector>

namespace eigenemo::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,     // I/O and other runtime failures
    kUsage = 2,       // unknown subcommand or flag
    kDataError = 3,   // parse, validation, pairing or config failures
    kNumericError = 4,
};

/// Subcommands: synth, summarize, eval, report.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace eigenemo::cli
