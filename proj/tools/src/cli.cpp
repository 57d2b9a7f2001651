#include "umlk/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "umlk/authoring.hpp"
#include "umlk/codec.hpp"
#include "umlk/evaluator.hpp"
#include "umlk/http_api.hpp"
#include "umlk/parser.hpp"
#include "umlk/service.hpp"
#include "umlk/store.hpp"

namespace umlk::cli {

namespace fs = std::filesystem;

std::optional<GradeFormat> grade_format_from_string(std::string_view text) {
  if (text == "text") return GradeFormat::Text;
  if (text == "csv") return GradeFormat::Csv;
  if (text == "ndjson") return GradeFormat::Ndjson;
  return std::nullopt;
}

std::string format_ratio(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  std::string text = buffer;
  while (text.size() > 1 && text.back() == '0' && text[text.size() - 2] != '.') text.pop_back();
  return text;
}

namespace {

struct Graded {
  enum class Status { Ok, Io, Parse } status = Status::Ok;
  std::string message;
  std::optional<EvaluationReport> report;
};

Graded grade_file(const ExerciseSpec& exercise, const fs::path& file) {
  auto text = read_file(file);
  if (!text) return {Graded::Status::Io, "cannot read " + file.string(), std::nullopt};
  auto doc = parse_document(*text);
  if (!doc) {
    std::string message = file.string() + ": " + std::string(to_string(doc.error().code)) + ": " + doc.error().detail;
    return {Graded::Status::Parse, message, std::nullopt};
  }
  return {Graded::Status::Ok, "", evaluate_exercise(exercise, *doc)};
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_report(std::ostream& out, GradeFormat format, const std::string& name, const EvaluationReport& report) {
  const auto& c = report.completeness;
  switch (format) {
    case GradeFormat::Text: {
      out << name << ": completeness " << format_ratio(c.overall) << " (" << c.matched_items() << "/"
          << c.total_items() << "), solution " << report.solutionIndex << ", " << report.syntactic.size()
          << " syntactic, " << report.semantic.size() << " semantic\n";
      for (const auto* list : {&report.syntactic, &report.semantic}) {
        for (const auto& d : *list) out << "  " << to_string(d.rule) << ": " << d.message << "\n";
      }
      break;
    }
    case GradeFormat::Csv:
      out << csv_field(name) << "," << report.solutionIndex << "," << format_ratio(c.overall) << ","
          << c.matched_items() << "," << c.total_items() << "," << report.syntactic.size() << ","
          << report.semantic.size() << "\n";
      break;
    case GradeFormat::Ndjson:
      out << nlohmann::json{{"file", name}, {"report", report}}.dump(-1, ' ', false,
                                                                      nlohmann::json::error_handler_t::replace)
          << "\n";
      break;
  }
}

}  // namespace

int cmd_grade(const fs::path& solutionPath, const fs::path& input, GradeFormat format, std::ostream& out,
              std::ostream& err, unsigned threads) {
  auto solutionText = read_file(solutionPath);
  if (!solutionText) {
    err << "error: cannot read " << solutionPath.string() << "\n";
    return kExitIo;
  }
  auto exercise = load_exercise(*solutionText);
  if (!exercise) {
    for (const auto& issue : exercise.error()) {
      err << solutionPath.string() << ": " << to_string(issue.code) << ": " << issue.detail << "\n";
    }
    return kExitValidation;
  }

  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(input, ec)) {
    for (const auto& entry : fs::directory_iterator(input, ec)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) {
      err << "error: cannot list " << input.string() << ": " << ec.message() << "\n";
      return kExitIo;
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(input, ec)) {
    files.push_back(input);
  } else {
    err << "error: " << input.string() << " does not exist\n";
    return kExitIo;
  }

  std::vector<Graded> results(files.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, files.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < files.size(); i = next++) results[i] = grade_file(exercise.value(), files[i]);
    });
  }
  for (auto& thread : pool) thread.join();

  if (format == GradeFormat::Csv) out << "file,solution,completeness,matched,total,syntactic,semantic\n";
  bool io_failed = false;
  bool parse_failed = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& r = results[i];
    if (r.status == Graded::Status::Ok) {
      write_report(out, format, files[i].string(), *r.report);
    } else {
      err << "error: " << r.message << "\n";
      io_failed = io_failed || r.status == Graded::Status::Io;
      parse_failed = parse_failed || r.status == Graded::Status::Parse;
    }
  }
  if (io_failed) return kExitIo;
  return parse_failed ? kExitParse : kExitOk;
}

int cmd_validate(const fs::path& solutionPath, std::ostream& out, std::ostream& err) {
  auto text = read_file(solutionPath);
  if (!text) {
    err << "error: cannot read " << solutionPath.string() << "\n";
    return kExitIo;
  }
  auto exercise = load_exercise(*text);
  if (!exercise) {
    for (const auto& issue : exercise.error()) {
      out << solutionPath.string() << ": " << to_string(issue.code);
      if (!issue.refId.empty()) out << " [" << issue.refId << "]";
      out << ": " << issue.detail << "\n";
    }
    return kExitValidation;
  }
  out << solutionPath.string() << ": ok (" << exercise->solutions.size() << " solution"
      << (exercise->solutions.size() == 1 ? "" : "s") << ")\n";
  return kExitOk;
}

std::optional<BindAddress> parse_bind(std::string_view text) {
  BindAddress address{"127.0.0.1", 0};
  std::string_view port = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) address.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  if (port.empty() || port.size() > 5) return std::nullopt;
  for (char c : port) {
    if (c < '0' || c > '9') return std::nullopt;
    address.port = address.port * 10 + (c - '0');
  }
  if (address.port > 65535) return std::nullopt;
  return address;
}

namespace {
std::atomic<bool> g_stop_requested{false};
extern "C" void on_signal(int) { g_stop_requested = true; }
}  // namespace

int cmd_serve(const fs::path& dataDir, const BindAddress& bind, std::ostream& err) {
  auto service = CourseService::open(dataDir);
  if (!service) {
    err << "error: " << service.error() << "\n";
    return kExitIo;
  }
  HttpApi api(*service.value());
  if (!api.bind(bind.host, bind.port)) {
    err << "error: cannot bind " << bind.host << ":" << bind.port << "\n";
    return kExitIo;
  }

  g_stop_requested = false;
  struct sigaction action {};
  action.sa_handler = on_signal;
  sigemptyset(&action.sa_mask);
  sigaction(SIGINT, &action, nullptr);
  sigaction(SIGTERM, &action, nullptr);

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done && !g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    api.stop();
  });
  err << "serving " << dataDir.string() << " on " << bind.host << ":" << bind.port << "\n";
  api.listen();
  done = true;
  watcher.join();
  service.value()->flush();
  err << "stopped; event log flushed\n";
  return kExitOk;
}

}  // namespace umlk::cli
