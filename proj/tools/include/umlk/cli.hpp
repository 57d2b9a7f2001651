#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace umlk::cli {

// Exit statuses shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;

enum class GradeFormat { Text, Csv, Ndjson };
std::optional<GradeFormat> grade_format_from_string(std::string_view text);

/// Grades one diagram file, or every regular file in a directory, against
/// an exercise file. Output is in input-path order.
int cmd_grade(const std::filesystem::path& solutionPath, const std::filesystem::path& input, GradeFormat format,
              std::ostream& out, std::ostream& err, unsigned threads = 0);

int cmd_validate(const std::filesystem::path& solutionPath, std::ostream& out, std::ostream& err);

struct BindAddress {
  std::string host;
  int port = 0;
};
/// "host:port", ":port" or "port".
std::optional<BindAddress> parse_bind(std::string_view text);

/// Runs the HTTP service until SIGINT/SIGTERM.
int cmd_serve(const std::filesystem::path& dataDir, const BindAddress& bind, std::ostream& err);

/// Shortest decimal with at least one fractional digit, at most four.
std::string format_ratio(double value);

}  // namespace umlk::cli
