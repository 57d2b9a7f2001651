#include "umlk/store.hpp"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "umlk/authoring.hpp"
#include "umlk/codec.hpp"

namespace umlk {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_safe_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

namespace {

json course_json(const CourseFile& course) {
  json j = course.game;
  json users = json::array();
  for (const auto& user : course.users) {
    users.push_back({{"userId", user.userId},
                     {"displayName", user.displayName},
                     {"token", user.token},
                     {"isTeacher", user.isTeacher}});
  }
  j["users"] = std::move(users);
  return j;
}

CourseFile course_from_json(const json& j) {
  CourseFile course;
  course.game = j.get<CourseConfig>();
  if (j.contains("users")) {
    for (const auto& u : j.at("users")) {
      UserAccount user;
      u.at("userId").get_to(user.userId);
      user.displayName = u.value("displayName", user.userId);
      u.at("token").get_to(user.token);
      user.isTeacher = u.value("isTeacher", false);
      course.users.push_back(std::move(user));
    }
  }
  return course;
}

}  // namespace

std::string course_file_text(const CourseFile& course) { return course_json(course).dump(2) + "\n"; }

Result<CourseFile, std::vector<std::string>> parse_course_file(std::string_view text) {
  const json j = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::vector<std::string>{"course config is not a JSON object"};
  CourseFile course;
  try {
    course = course_from_json(j);
  } catch (const std::exception& e) {
    return std::vector<std::string>{std::string("course config: ") + e.what()};
  }
  std::vector<std::string> problems = validate_config(course.game);
  std::set<std::string> ids;
  std::set<std::string> tokens;
  for (const auto& user : course.users) {
    if (!is_safe_id(user.userId)) problems.push_back("user id \"" + user.userId + "\" must match [A-Za-z0-9_-]{1,64}");
    if (!ids.insert(user.userId).second) problems.push_back("duplicate user id " + user.userId);
    if (user.token.empty()) problems.push_back("user " + user.userId + " has an empty token");
    if (!tokens.insert(user.token).second) problems.push_back("token of user " + user.userId + " is not unique");
  }
  if (!problems.empty()) return problems;
  return course;
}

std::string event_line(const Event& event) {
  json j;
  if (const auto* e = std::get_if<CheckEvent>(&event)) {
    j = json{{"type", "check"},
             {"timestamp", e->timestamp},
             {"studentId", e->studentId},
             {"exerciseId", e->exerciseId},
             {"documentText", e->documentText},
             {"baseXp", e->baseXp},
             {"summary", e->summary},
             {"obtainableXp", e->obtainableXp},
             {"completed", e->completed}};
  } else if (const auto* e = std::get_if<ConfigEvent>(&event)) {
    j = json{{"type", "config"}, {"timestamp", e->timestamp}, {"course", course_json(e->course)}};
  } else {
    const auto& a = std::get<AvatarEvent>(event);
    j = json{{"type", "avatar"}, {"timestamp", a.timestamp}, {"studentId", a.studentId}, {"equippedProps", a.equippedProps}};
  }
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

Result<Event, std::string> parse_event_line(std::string_view line) {
  const json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::string("event is not a JSON object");
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "check") {
      CheckEvent e;
      j.at("timestamp").get_to(e.timestamp);
      j.at("studentId").get_to(e.studentId);
      j.at("exerciseId").get_to(e.exerciseId);
      j.at("documentText").get_to(e.documentText);
      j.at("baseXp").get_to(e.baseXp);
      e.summary = j.at("summary").get<CheckSummary>();
      j.at("obtainableXp").get_to(e.obtainableXp);
      j.at("completed").get_to(e.completed);
      return Event{std::move(e)};
    }
    if (type == "config") {
      return Event{ConfigEvent{j.at("timestamp").get<std::string>(), course_from_json(j.at("course"))}};
    }
    if (type == "avatar") {
      return Event{AvatarEvent{j.at("timestamp").get<std::string>(), j.at("studentId").get<std::string>(),
                               j.at("equippedProps").get<std::set<std::string>>()}};
    }
    return "unknown event type \"" + type + "\"";
  } catch (const std::exception& e) {
    return std::string(e.what());
  }
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw fs::filesystem_error("cannot write", temp, std::make_error_code(std::errc::io_error));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw fs::filesystem_error("cannot write", temp, std::make_error_code(std::errc::io_error));
  }
  fs::rename(temp, path);
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CourseStore::CourseStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "exercises");
  fs::create_directories(root_ / "students");
  // Drop a torn final line so the next append starts on a fresh line.
  const fs::path log_path = root_ / "events.log";
  if (auto text = read_file(log_path); text && !text->empty() && text->back() != '\n') {
    const std::size_t keep = text->rfind('\n') == std::string::npos ? 0 : text->rfind('\n') + 1;
    fs::resize_file(log_path, keep);
  }
  log_ = std::fopen((root_ / "events.log").c_str(), "ab");
  if (log_ == nullptr) {
    throw fs::filesystem_error("cannot open event log", root_ / "events.log",
                               std::error_code(errno, std::generic_category()));
  }
}

CourseStore::~CourseStore() {
  if (log_ != nullptr) {
    std::fflush(log_);
    std::fclose(log_);
  }
}

std::optional<std::string> CourseStore::read_course_text() const { return read_file(root_ / "course.config"); }

void CourseStore::write_course(const CourseFile& course) {
  write_file_atomic(root_ / "course.config", course_file_text(course));
}

Result<std::vector<ExerciseSpec>, std::string> CourseStore::load_exercises() const {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root_ / "exercises")) {
    if (entry.is_regular_file() && entry.path().extension() == ".exercise") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ExerciseSpec> exercises;
  for (const auto& file : files) {
    auto text = read_file(file);
    if (!text) return "cannot read " + file.string();
    auto loaded = load_exercise(*text);
    if (!loaded) {
      std::string message = file.string() + ":";
      for (const auto& issue : loaded.error()) message += " [" + std::string(to_string(issue.code)) + "] " + issue.detail;
      return message;
    }
    exercises.push_back(std::move(loaded).value());
  }
  return exercises;
}

void CourseStore::write_exercise(const ExerciseSpec& exercise) {
  write_file_atomic(root_ / "exercises" / (exercise.exerciseId + ".exercise"), serialize_exercise(exercise));
}

void CourseStore::write_snapshot(const StudentState& state) {
  write_file_atomic(root_ / "students" / (state.studentId + ".state"), snapshot_text(state));
}

std::optional<std::string> CourseStore::read_snapshot(std::string_view studentId) const {
  return read_file(root_ / "students" / (std::string(studentId) + ".state"));
}

void CourseStore::append(const Event& event) {
  const std::string line = event_line(event) + "\n";
  std::lock_guard lock(log_mutex_);
  if (std::fwrite(line.data(), 1, line.size(), log_) != line.size() || std::fflush(log_) != 0) {
    throw fs::filesystem_error("cannot append to event log", root_ / "events.log",
                               std::error_code(errno, std::generic_category()));
  }
  ::fsync(::fileno(log_));
}

Result<std::vector<Event>, std::string> CourseStore::read_events() const {
  auto text = read_file(root_ / "events.log");
  std::vector<Event> events;
  if (!text) return events;
  std::size_t start = 0;
  std::size_t line_number = 0;
  while (start < text->size()) {
    const std::size_t end = text->find('\n', start);
    const bool complete = end != std::string::npos;
    const std::string_view line(text->data() + start, (complete ? end : text->size()) - start);
    ++line_number;
    start = complete ? end + 1 : text->size();
    if (line.empty()) continue;
    auto event = parse_event_line(line);
    if (!event) {
      if (!complete) break;  // torn tail from an interrupted append
      return "events.log line " + std::to_string(line_number) + ": " + event.error();
    }
    events.push_back(std::move(event).value());
  }
  return events;
}

void CourseStore::flush() {
  std::lock_guard lock(log_mutex_);
  std::fflush(log_);
  ::fsync(::fileno(log_));
}

}  // namespace umlk
