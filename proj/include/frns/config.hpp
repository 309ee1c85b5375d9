#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "frns/model.hpp"
#include "frns/solver.hpp"

namespace frns {

class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(const std::string& msg, int line) : std::runtime_error(msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct RunConfig {
    ModelConfig model;
    std::size_t points_per_dim = 128;
    // 0 selects the default 20/m.
    double half_length = 0.0;
    Tolerances tol;
    int restarts = 3;
    std::uint64_t seed = 1;
    std::vector<double> sweep_eps{0.5, 0.25, 0.1};
    // 0 selects the number of hardware threads.
    int jobs = 0;
    bool svg = true;

    Grid grid() const;
    double effective_half_length() const;
};

// Flat "key = value" text, '#' starts a comment. Point lists are written
// "x y; x y". Unknown keys, duplicates and malformed values throw
// ConfigParseError with the 1-based line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Sorted key=value lines with every value in canonical form; two configs that
// parse to the same values give the same text.
std::string canonical_config(const RunConfig& cfg);
std::string sha256_hex(const std::string& data);

// All recognised keys with a one-line description, in documentation order.
std::vector<std::pair<std::string, std::string>> config_keys();

} // namespace frns
