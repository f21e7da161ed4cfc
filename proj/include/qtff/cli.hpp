// Command-line front end: scenario files, series CSV and JSON reports.
//
// Exit codes: 0 ok, 1 I/O failure, 2 schema/usage error, 3 numeric validation,
// 4 positivity violation during integration.

#pragma once

#include "qtff/dynamics.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtff::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitSchema = 2,
    kExitNumeric = 3,
    kExitPositivity = 4,
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses a scenario document. Structural problems raise SchemaError, numeric
// invariant violations raise ValidationError.
dynamics::Scenario parse_scenario(const std::string& json_text);
dynamics::Scenario load_scenario(const std::filesystem::path& path);

// 9 significant digits; "inf", "-inf", "nan"; negative zero prints as 0.
std::string format_number(double v);
// Fixed 9 decimals for report values.
std::string format_fixed(double v);

enum class CsvLayout { full, channel_rates };
std::string series_csv(const dynamics::Trajectory& traj, CsvLayout layout = CsvLayout::full);

// Writes via a temporary file in the same directory followed by rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// QTFF_EPS, default 1e-12.
double clamp_eps_from_env();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtff::cli
