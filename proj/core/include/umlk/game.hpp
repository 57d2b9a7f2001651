#pragma once

// Game mechanics driven by evaluation reports: obtainable XP with
// new-error-only deductions, the avatar mood ladder, completion rewards,
// levels and leaderboards. Every transition is a pure function of
// (state, inputs) so an event log can be replayed.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "umlk/evaluator.hpp"
#include "umlk/model.hpp"
#include "umlk/result.hpp"

namespace umlk {

struct Multiplier {
  int maxChecks = 1;
  double factor = 1.0;

  bool operator==(const Multiplier&) const = default;
};

struct PropUnlock {
  std::string propId;
  int unlockLevel = 1;

  bool operator==(const PropUnlock&) const = default;
};

struct CourseConfig {
  std::vector<Xp> levelThresholds{0, 100, 250, 450, 700, 1000};
  double deductionFraction = 0.05;
  double floorFraction = 0.35;
  std::vector<Multiplier> multipliers{{1, 1.5}, {3, 1.25}};
  std::vector<PropUnlock> propUnlocks{{"cap", 1}, {"glasses", 2}, {"scarf", 3}, {"cape", 4}, {"crown", 6}};

  bool operator==(const CourseConfig&) const = default;
};

/// Human-readable problems with a config; empty means usable.
std::vector<std::string> validate_config(const CourseConfig& config);

/// Identity of an error across checks.
struct ErrorFingerprint {
  std::string rule;
  std::string anchor;

  auto operator<=>(const ErrorFingerprint&) const = default;
  bool operator==(const ErrorFingerprint&) const = default;
};

ErrorFingerprint error_fingerprint(const Diagnostic& diagnostic);

/// What the game layer needs from one evaluation. Stored in the event log
/// so replay does not depend on re-grading.
struct CheckSummary {
  double completeness = 0.0;
  std::set<ErrorFingerprint> fingerprints;

  bool operator==(const CheckSummary&) const = default;
};

CheckSummary summarize(const EvaluationReport& report);

struct ExerciseSession {
  std::string exerciseId;
  int checksUsed = 0;
  std::map<ErrorFingerprint, Xp> deductions;
  std::set<ErrorFingerprint> activeErrors;
  double lastCompleteness = 0.0;
  Xp lastObtainable = 0;
  double bestCompleteness = 0.0;
  bool completed = false;

  bool operator==(const ExerciseSession&) const = default;
};

inline constexpr int kMoodMin = -3;
inline constexpr int kMoodMax = 3;

struct MoodState {
  int index = 0;

  bool operator==(const MoodState&) const = default;
};

std::string_view mood_label(MoodState mood);

struct Recap {
  int newErrors = 0;
  int fixedErrors = 0;
  Xp deltaXp = 0;
  double deltaCompleteness = 0.0;
  Xp obtainableXp = 0;
  double completeness = 0.0;

  bool operator==(const Recap&) const = default;
};

struct StudentState {
  std::string studentId;
  std::string displayName;
  Xp totalXp = 0;
  int level = 1;
  MoodState mood;
  std::set<std::string> ownedProps;
  std::set<std::string> equippedProps;
  std::map<std::string, ExerciseSession> sessions;

  bool operator==(const StudentState&) const = default;
};

/// Fresh student at level 1 owning the level-1 props.
StudentState new_student(std::string studentId, std::string displayName, const CourseConfig& config);

struct CompletionResult {
  Xp awardedXp = 0;
  double multiplierApplied = 1.0;
  int newLevel = 1;
  std::vector<std::string> unlockedProps;
  bool solutionViewUnlocked = true;

  bool operator==(const CompletionResult&) const = default;
};

enum class GameError { CheckOnCompleted, NotComplete, AlreadyCompleted };
std::string_view to_string(GameError error);

int level_for_xp(Xp xp, const CourseConfig& config);

/// Whole-XP amount for a fraction of baseXp, rounded half away from zero.
Xp nominal_deduction(Xp baseXp, const CourseConfig& config);
Xp xp_floor(Xp baseXp, const CourseConfig& config);

Xp obtainable_xp(const ExerciseSession& session, Xp baseXp, const CourseConfig& config);

struct CheckOutcome {
  StudentState state;
  Recap recap;
};

Result<CheckOutcome, GameError> apply_check(const StudentState& state, const CourseConfig& config,
                                            std::string_view exerciseId, Xp baseXp, const CheckSummary& summary);
Result<CheckOutcome, GameError> apply_check(const StudentState& state, const CourseConfig& config,
                                            const ExerciseSpec& exercise, const EvaluationReport& report);

MoodState mood_transition(MoodState mood, const Recap& recap);

/// True when the session's latest check was complete and error free.
bool completion_condition(const ExerciseSession& session);

struct CompletionOutcome {
  StudentState state;
  CompletionResult result;
};

Result<CompletionOutcome, GameError> complete_exercise(const StudentState& state, const CourseConfig& config,
                                                       std::string_view exerciseId);
Result<CompletionOutcome, GameError> complete_exercise(const StudentState& state, const CourseConfig& config,
                                                       const ExerciseSpec& exercise);

/// Re-derives level and owned props after a config change. Props already
/// owned are kept.
StudentState reconcile_progress(StudentState state, const CourseConfig& config);

struct XpLevelBoard {};
struct ExerciseScoreBoard {
  std::string exerciseId;
};
struct CompletedCountBoard {};
using LeaderboardKind = std::variant<XpLevelBoard, ExerciseScoreBoard, CompletedCountBoard>;

struct LeaderboardEntry {
  int rank = 1;
  std::string studentId;
  std::string displayName;
  double score = 0.0;  // totalXp, best completeness, or completed count
  int level = 1;
  Xp totalXp = 0;
  std::set<std::string> equippedProps;

  bool operator==(const LeaderboardEntry&) const = default;
};

/// Standard competition ranking (1,1,3); ties ordered by display name, then
/// student id. ExerciseScore only lists students who attempted the exercise.
std::vector<LeaderboardEntry> leaderboard(const LeaderboardKind& kind, const std::vector<StudentState>& students);

}  // namespace umlk
