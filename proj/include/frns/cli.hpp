#pragma once

namespace frns::cli {

enum ExitCode : int {
    ok = 0,
    numerical_failure = 1,
    invalid_parameters = 2,
    parse_error = 3,
};

// Entry point of the frns command-line tool.
int run(int argc, char** argv);

} // namespace frns::cli
