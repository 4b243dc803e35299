#ifndef OGP_EXPERIMENTS_HPP
#define OGP_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ogp/errors.hpp"

namespace ogp {

/// Semantic version of the library and CLI.
std::string version();

/**
 * Invalid configuration. `fields` names every offending key so the CLI can list them.
 * Maps to exit code 3.
 */
class ConfigError : public ParameterError {
public:
    ConfigError(const std::string& what, std::vector<std::string> fields)
        : ParameterError(what), fields(std::move(fields)) {}
    std::vector<std::string> fields;
};

/// Output directory or file could not be written. Maps to exit code 2.
class OutputError : public std::runtime_error {
public:
    explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown preset or experiment name. Maps to exit code 2.
class UnknownExperimentError : public std::invalid_argument {
public:
    explicit UnknownExperimentError(const std::string& what) : std::invalid_argument(what) {}
};

/**
 * Resolved experiment configuration.
 *
 * Text form is one `key = value` per line, `#` starts a comment. Arrays are written
 * `[a, b, c]` or `linspace(a, b, k)`. `time_grid` is accepted on input as an alias that
 * stores rho = 1 - t. Keys a given experiment does not use are kept but ignored.
 */
struct ExperimentConfig {
    std::string experiment;
    int n = 0;
    double q = 0;
    std::uint64_t seed = 0;
    int trials = 1;
    int m = 0;  ///< block size of the Ising example
    std::vector<double> rho_grid;
    std::vector<double> beta_grid;
    std::vector<double> lambda_grid;
    std::vector<double> gamma_grid;
    std::vector<double> delta_grid;
    std::vector<double> r_grid;
    std::string out_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the text form. Throws ConfigError on syntax errors or unknown keys.
ExperimentConfig parse_config(std::string_view text);
/// Reads and parses a file. Throws OutputError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Text form with every key, in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

struct ValidationReport {
    std::vector<std::string> fields;    ///< offending keys
    std::vector<std::string> messages;  ///< one per problem
    bool ok() const { return messages.empty(); }
    /// "ok" or the messages joined by newlines.
    std::string text() const;
};

/// Checks the fields the named experiment needs: nonempty grids, trials >= 1, n q > 1, ranges. No side effects.
ValidationReport validate_config(const ExperimentConfig& c);

std::vector<std::string> experiment_names();
std::vector<std::string> preset_names();
/// Default configuration of a preset. Throws UnknownExperimentError.
ExperimentConfig preset_config(std::string_view name);

/// Applies one `key=value` override in the text syntax.
void apply_override(ExperimentConfig& c, std::string_view assignment);

struct RunOutput {
    std::vector<std::filesystem::path> files;  ///< every file written, CSVs first, summary last
    std::string summary;                       ///< the JSON summary as written
};

/// Worker count: OGP_LAB_THREADS when set to a positive integer, else the hardware concurrency.
int threads_from_env();

/**
 * Runs an experiment and writes `<out_dir>/<experiment>*.csv` plus `<experiment>_summary.json`.
 *
 * Trials run on `threads` workers. Every trial draws from its own stream derived from
 * (seed, trial index), and rows are emitted in trial order, so the output bytes do not
 * depend on the thread count. Throws ConfigError when validation fails and OutputError
 * when the directory cannot be created or written.
 */
RunOutput run_experiment(const ExperimentConfig& c, int threads = 1);

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Rethrows the first exception.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ogp

#endif
