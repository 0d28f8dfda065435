#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace timepref {

/// Resolved settings of one CLI run. Every output starts with
/// "# " + to_json(config) so a result file names its own inputs.
struct ExperimentConfig {
    std::string command;
    std::optional<std::string> family;
    std::vector<int> T;
    std::optional<double> delta;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::string> dist;
    std::vector<double> grid;
    std::vector<std::uint64_t> sizes;
    std::optional<int> trials;
    std::vector<double> eps;
    std::uint64_t seed = 0;
    std::string out = "-";
    /// Command-specific settings not covered above.
    nlohmann::json options = nlohmann::json::object();

    bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json config_to_json(const ExperimentConfig& c);
/// Throws std::invalid_argument on missing "command" or mistyped fields.
ExperimentConfig config_from_json(const nlohmann::json& j);
std::string config_header(const ExperimentConfig& c);
/// Parses a "# {...}" header line.
ExperimentConfig config_from_header(const std::string& line);

/// Bad flags or flag combinations; mapped to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exit codes: 0 success, 1 runtime failure, 2 argument error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace timepref
