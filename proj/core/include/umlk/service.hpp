#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "umlk/evaluator.hpp"
#include "umlk/game.hpp"
#include "umlk/model.hpp"
#include "umlk/parser.hpp"
#include "umlk/result.hpp"
#include "umlk/store.hpp"

namespace umlk {

enum class ServiceErrorCode {
  ParseFailed,
  UnknownExercise,
  UnknownStudent,
  AlreadyCompleted,
  NotUnlocked,
  InvalidExercise,
  InvalidConfig,
  PropNotOwned,
  Storage,
};
std::string_view to_string(ServiceErrorCode code);

struct ServiceError {
  ServiceErrorCode code = ServiceErrorCode::Storage;
  std::string detail;
  std::optional<ParseError> parse;
  std::vector<AuthoringIssue> issues;
  std::vector<std::string> problems;
};

struct CheckResponse {
  EvaluationReport report;
  Recap recap;
  MoodState mood;
  Xp obtainableXp = 0;
  Xp baseXp = 0;
  Xp totalXp = 0;
  int level = 1;
  std::optional<CompletionResult> completion;
};

/// Result of feeding one graded check into a student's game state. Shared
/// by live requests and log replay so both follow the same path.
struct SubmissionStep {
  StudentState state;
  Recap recap;
  std::optional<CompletionResult> completion;
};
Result<SubmissionStep, GameError> apply_submission(const StudentState& state, const CourseConfig& config,
                                                   std::string_view exerciseId, Xp baseXp, const CheckSummary& summary);

/// Orchestrates checks, profiles, leaderboards and teacher configuration
/// on top of a CourseStore. Mutations for one student are serialized;
/// different students proceed in parallel.
class CourseService {
 public:
  using Clock = std::function<std::string()>;

  /// Opens (or initializes) a data directory and rebuilds all student
  /// states by replaying the event log.
  static Result<std::unique_ptr<CourseService>, std::string> open(const std::filesystem::path& dataDir,
                                                                   Clock clock = {});

  CourseService(const CourseService&) = delete;
  CourseService& operator=(const CourseService&) = delete;
  ~CourseService();

  std::optional<UserAccount> authenticate(std::string_view token) const;

  Result<CheckResponse, ServiceError> handle_check(std::string_view studentId, std::string_view exerciseId,
                                                   std::string_view documentText);
  Result<std::vector<ReferenceSolution>, ServiceError> get_solution_view(std::string_view studentId,
                                                                         std::string_view exerciseId) const;

  std::vector<ExerciseSpec> exercises() const;
  Result<ExerciseSpec, ServiceError> exercise(std::string_view exerciseId) const;

  Result<StudentState, ServiceError> student(std::string_view studentId) const;
  std::vector<StudentState> students() const;
  Result<StudentState, ServiceError> equip(std::string_view studentId, const std::set<std::string>& props);

  CourseFile course() const;
  Result<CourseFile, ServiceError> update_course(std::string_view courseText);
  /// Creates or replaces an exercise from exercise-file text. When
  /// `expectedId` is set the file's exerciseId must equal it.
  Result<ExerciseSpec, ServiceError> put_exercise(std::string_view exerciseText,
                                                  std::optional<std::string_view> expectedId = std::nullopt);

  Result<std::vector<LeaderboardEntry>, ServiceError> leaderboard(const LeaderboardKind& kind) const;

  /// Snapshot text of the in-memory state, identical to what is on disk.
  Result<std::string, ServiceError> snapshot(std::string_view studentId) const;

  /// Ids whose snapshot file differs from the replayed state.
  std::vector<std::string> stale_snapshots() const;

  const std::filesystem::path& data_dir() const { return store_.root(); }
  void flush();

 private:
  struct StudentSlot {
    mutable std::mutex mutex;
    StudentState state;
  };

  CourseService(const std::filesystem::path& dataDir, Clock clock);
  std::optional<std::string> replay();
  void apply_course(const CourseFile& course);
  StudentSlot* slot(std::string_view studentId) const;
  std::string now() const;

  CourseStore store_;
  Clock clock_;

  // Guards course_, exercises_ and the shape of students_. Checks hold it
  // shared so a config change is ordered against them in the log.
  mutable std::shared_mutex course_mutex_;
  CourseFile course_;
  std::map<std::string, ExerciseSpec, std::less<>> exercises_;
  std::map<std::string, std::unique_ptr<StudentSlot>, std::less<>> students_;
};

}  // namespace umlk
