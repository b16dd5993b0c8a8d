#pragma once

// Command implementations behind the `tmq` binary. Each command fills a
// Table that is rendered as CSV or JSON.

#include "tmq/arith.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tmq::cli {

/// Usage or parse error (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
    std::string a = "2";
    std::string b = "1";
    Format format = Format::Csv;
    std::string out;                 // empty: stdout
    std::uint64_t limit = 200;       // prime limit
    unsigned horizon = 20;           // exponent of the horizon 2^horizon
    std::string grid;                // comma list or start:step:count
    std::string sizes;               // comma list of approximant sizes
    unsigned jobs = 0;               // 0: hardware concurrency
    std::uint64_t seed = 1;
    std::uint64_t p = 3;
    std::uint64_t j = 0;
    std::uint64_t n = 16;
    unsigned resolution = 1024;
    std::string weights = "ones";    // ones | zeros | squares | random | flip-squares
    std::string q = "0";
};

struct Real {
    double value;
    int digits = 0;  // 0: shortest round trip, else significant digits
};

using Cell = std::variant<std::monostate, std::string, std::int64_t, Real, bool>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;  // CSV: "# key=value" trailer
};

struct CommandResult {
    Table table;
    int exit_code = 0;  // 0 ok, 1 per-row parse errors, 2 numerical flag
};

/// Splits a comma list or expands "start:step:count" into exact rationals.
std::vector<Rational> parse_grid(const std::string& text);

/// Comma list of positive integers.
std::vector<std::uint64_t> parse_sizes(const std::string& text);

std::string format_real(double value, int digits = 0);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);
std::string render(const Table& table, Format format);

CommandResult cmd_sequence(const RunConfig& cfg);
CommandResult cmd_diffract(const RunConfig& cfg);
CommandResult cmd_classify_primes(const RunConfig& cfg);
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_profile(const RunConfig& cfg);
CommandResult cmd_rarefy(const RunConfig& cfg);
CommandResult cmd_marcinkiewicz(const RunConfig& cfg);

CommandResult run_command(const std::string& name, const RunConfig& cfg);

/// Full entry point: parses argv, runs, writes output, returns the exit code.
int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tmq::cli
