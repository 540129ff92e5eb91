#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpcav
{
enum ExitCode
{
    exit_ok = 0,
    exit_failure = 1, // computation failed, or a reproduction row missed its target
    exit_usage = 2,   // bad arguments, unreadable input, stack-document errors
};

/// Runs one `fpcav` subcommand. args excludes the program name.
int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
} // namespace fpcav
