#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "umlk/cli.hpp"

namespace {

std::string env_or(const char* name, const char* fallback) {
  const char* value = std::getenv(name);
  return value != nullptr && *value != '\0' ? value : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace umlk::cli;
  CLI::App app{"Use case diagram grading and course service"};
  app.require_subcommand(1);

  std::string solution, input, format = "text";
  auto* grade = app.add_subcommand("grade", "Grade diagram files against an exercise file");
  grade->add_option("--solution", solution, "Exercise file with reference solutions")->required();
  grade->add_option("--input", input, "Diagram file or directory of diagram files")->required();
  grade->add_option("--format", format, "text, csv or ndjson")->check(CLI::IsMember({"text", "csv", "ndjson"}));

  std::string validatePath;
  auto* validate = app.add_subcommand("validate", "Check an exercise file");
  validate->add_option("path", validatePath, "Exercise file")->required();

  std::string dataDir = env_or("UMLK_DATA_DIR", "./data");
  std::string bind = env_or("UMLK_BIND", "127.0.0.1:8080");
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--data", dataDir, "Data directory (UMLK_DATA_DIR)");
  serve->add_option("--bind", bind, "host:port to listen on (UMLK_BIND)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }

  if (*grade) return cmd_grade(solution, input, *grade_format_from_string(format), std::cout, std::cerr);
  if (*validate) return cmd_validate(validatePath, std::cout, std::cerr);
  const auto address = parse_bind(bind);
  if (!address) {
    std::cerr << "error: invalid bind address \"" << bind << "\"\n";
    return kExitIo;
  }
  return cmd_serve(dataDir, *address, std::cerr);
}
