#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace pretlab::cli {

using json = nlohmann::json;

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitRuntime = 4;

enum class ArgType { integer, real, text, flag, int_list, real_list };

struct ArgSpec {
    std::string name;  // without leading dashes
    ArgType type;
    std::string help;
    bool required = false;
};

struct OpSpec {
    std::string command;  // top-level subcommand
    std::string action;   // empty for single-action commands
    std::string help;
    std::vector<ArgSpec> args;
    bool table = false;   // emits rows (CSV-native)
};

/// every operation the front end knows, in a stable order
const std::vector<OpSpec>& operations();

/// "charsum.max", "ltrunc", ...
std::string op_name(const OpSpec& s);

/// Run one operation. The returned record carries {op, inputs, value} where
/// inputs has every default filled in, so dispatch(rec["op"], rec["inputs"])
/// reproduces rec. Errors propagate as pretlab::Error.
json dispatch(const std::string& op, const json& inputs);

/// Records with a "rows" member as CSV (header + rows); other records are
/// flattened into a single row of their scalar value fields.
std::string to_csv(const json& record);

/// 15 significant digits, the serialization precision for every number
double round15(double x);

/// Entry point used by the binary; returns the exit status.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pretlab::cli
