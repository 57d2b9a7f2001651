#pragma once

// On-disk course layout:
//
//   <data>/course.config              course config + user accounts (JSON)
//   <data>/exercises/<id>.exercise    exercise files
//   <data>/students/<id>.state        latest student snapshot
//   <data>/events.log                 append-only, one JSON event per line
//
// The event log is authoritative; snapshots are a readable cache.

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "umlk/game.hpp"
#include "umlk/model.hpp"
#include "umlk/result.hpp"

namespace umlk {

struct UserAccount {
  std::string userId;
  std::string displayName;
  std::string token;
  bool isTeacher = false;

  bool operator==(const UserAccount&) const = default;
};

struct CourseFile {
  CourseConfig game;
  std::vector<UserAccount> users;

  bool operator==(const CourseFile&) const = default;
};

std::string course_file_text(const CourseFile& course);
/// Parses and validates a course file (config rules, user ids, tokens).
Result<CourseFile, std::vector<std::string>> parse_course_file(std::string_view text);

/// Ids used as file names: [A-Za-z0-9_-], 1 to 64 characters.
bool is_safe_id(std::string_view id);

struct CheckEvent {
  std::string timestamp;
  std::string studentId;
  std::string exerciseId;
  std::string documentText;
  Xp baseXp = 0;
  CheckSummary summary;
  Xp obtainableXp = 0;
  bool completed = false;

  bool operator==(const CheckEvent&) const = default;
};

struct ConfigEvent {
  std::string timestamp;
  CourseFile course;

  bool operator==(const ConfigEvent&) const = default;
};

struct AvatarEvent {
  std::string timestamp;
  std::string studentId;
  std::set<std::string> equippedProps;

  bool operator==(const AvatarEvent&) const = default;
};

using Event = std::variant<CheckEvent, ConfigEvent, AvatarEvent>;

std::string event_line(const Event& event);
Result<Event, std::string> parse_event_line(std::string_view line);

class CourseStore {
 public:
  /// Creates the directory layout if needed. Throws std::filesystem_error
  /// when the directory cannot be created.
  explicit CourseStore(std::filesystem::path root);
  ~CourseStore();

  CourseStore(const CourseStore&) = delete;
  CourseStore& operator=(const CourseStore&) = delete;

  const std::filesystem::path& root() const { return root_; }

  std::optional<std::string> read_course_text() const;
  void write_course(const CourseFile& course);

  /// Loads every exercises/*.exercise file, sorted by file name.
  Result<std::vector<ExerciseSpec>, std::string> load_exercises() const;
  void write_exercise(const ExerciseSpec& exercise);

  void write_snapshot(const StudentState& state);
  std::optional<std::string> read_snapshot(std::string_view studentId) const;

  /// Appends one line and flushes it to disk before returning.
  void append(const Event& event);

  /// All complete events in log order. A torn final line (no newline,
  /// unparseable) from an interrupted write is ignored.
  Result<std::vector<Event>, std::string> read_events() const;

  void flush();

 private:
  std::filesystem::path root_;
  std::mutex log_mutex_;
  std::FILE* log_ = nullptr;
};

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace umlk
