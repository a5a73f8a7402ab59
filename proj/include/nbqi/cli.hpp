#pragma once

// Batch front-end shared by the nbqi executable and the tests.

#include "nbqi/knots.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nbqi::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

enum class Format { csv, json };

struct RunConfig {
    std::string command = "norms";
    PartitionSpec partition;
    int m = 2;
    /// 0 selects p = m.
    int p = 0;
    int q = 2;
    std::string kind = "q2star";
    std::string function = "sin";
    std::vector<int> sizes;
    int trials = 1;
    bool audit = false;
    Format format = Format::csv;
    std::string out;

    bool operator==(const RunConfig&) const = default;

    [[nodiscard]] int effective_p() const noexcept { return p > 0 ? p : m; }

    /// Every field as a flat key-value record.
    [[nodiscard]] std::map<std::string, std::string> to_record() const;
    /// Canonical text: sorted `key=value` lines.
    [[nodiscard]] std::string canonical() const;
    /// Unknown keys throw std::invalid_argument; absent keys keep defaults.
    static void apply_record(RunConfig& config, const std::map<std::string, std::string>& record);
    [[nodiscard]] static RunConfig from_record(const std::map<std::string, std::string>& record);
};

/// Thrown for malformed command lines or config files.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parses argv-style arguments (without the program name). `--config <file>`
/// is read first; explicit flags override its entries. Returns nullopt when
/// help was requested (help text goes to `help_out`).
[[nodiscard]] std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& help_out);

/// Executes a validated config, writing tables to `out` and one-line
/// diagnostics to `err`. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + run, honouring --out.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nbqi::cli
