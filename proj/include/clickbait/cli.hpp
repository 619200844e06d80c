#pragma once

#include <string>
#include <vector>

namespace clickbait::cli {

/// Runs one subcommand. Returns 0 on success, 2 for usage/validation errors
/// and 1 for runtime failures.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args excludes the program name

/// Parses a flat "key = value" config document into (key, value) pairs.
/// Blank lines and '#' comments are skipped; values may be double-quoted.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace clickbait::cli
