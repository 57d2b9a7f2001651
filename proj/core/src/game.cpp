#include "umlk/game.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "umlk/text.hpp"

namespace umlk {

namespace {

template <typename T>
int sign(T value) {
  return (T{0} < value) - (value < T{0});
}

ExerciseSession fresh_session(std::string_view exerciseId, Xp baseXp) {
  ExerciseSession session;
  session.exerciseId = std::string(exerciseId);
  // Synthetic baseline for the first recap: nothing matched, no errors,
  // full XP still obtainable.
  session.lastObtainable = baseXp;
  session.lastCompleteness = 0.0;
  return session;
}

}  // namespace

std::vector<std::string> validate_config(const CourseConfig& config) {
  std::vector<std::string> problems;
  if (config.levelThresholds.empty() || config.levelThresholds.front() != 0) {
    problems.emplace_back("levelThresholds must start at 0");
  }
  for (std::size_t i = 1; i < config.levelThresholds.size(); ++i) {
    if (config.levelThresholds[i] <= config.levelThresholds[i - 1]) {
      problems.emplace_back("levelThresholds must be strictly increasing");
      break;
    }
  }
  if (!(config.deductionFraction >= 0.0 && config.deductionFraction <= 1.0)) {
    problems.emplace_back("deductionFraction must lie in [0,1]");
  }
  if (!(config.floorFraction > 0.0 && config.floorFraction < 1.0)) {
    problems.emplace_back("floorFraction must lie in (0,1)");
  }
  for (std::size_t i = 0; i < config.multipliers.size(); ++i) {
    const Multiplier& m = config.multipliers[i];
    if (m.maxChecks <= 0) problems.emplace_back("multiplier maxChecks must be positive");
    if (!(m.factor >= 1.0)) problems.emplace_back("multiplier factor must be at least 1");
    if (i > 0) {
      const Multiplier& prev = config.multipliers[i - 1];
      if (m.maxChecks <= prev.maxChecks) problems.emplace_back("multipliers must be sorted by ascending maxChecks");
      if (m.factor >= prev.factor) problems.emplace_back("multiplier factors must be strictly decreasing");
    }
  }
  std::set<std::string> prop_ids;
  for (const auto& prop : config.propUnlocks) {
    if (prop.propId.empty()) problems.emplace_back("propId must not be empty");
    if (!prop_ids.insert(prop.propId).second) problems.emplace_back("duplicate propId " + prop.propId);
    if (prop.unlockLevel < 1) problems.emplace_back("unlockLevel of " + prop.propId + " must be positive");
  }
  return problems;
}

ErrorFingerprint error_fingerprint(const Diagnostic& diagnostic) {
  ErrorFingerprint fingerprint{std::string(to_string(diagnostic.rule)), {}};
  if (diagnostic.refId) {
    fingerprint.anchor = *diagnostic.refId;
    return fingerprint;
  }
  std::vector<std::string> names;
  bool unnamed = diagnostic.subjectNames.empty();
  for (const auto& name : diagnostic.subjectNames) {
    names.push_back(normalize_name(name));
    unnamed = unnamed || names.back().empty();
  }
  if (unnamed) {
    // No usable name; diagram ids are stable while the student edits.
    names.clear();
    for (const auto& id : diagnostic.subjectIds) names.push_back("#" + id);
  }
  std::sort(names.begin(), names.end());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) fingerprint.anchor += '|';
    fingerprint.anchor += names[i];
  }
  return fingerprint;
}

CheckSummary summarize(const EvaluationReport& report) {
  CheckSummary summary;
  summary.completeness = report.completeness.overall;
  for (const auto& d : report.syntactic) summary.fingerprints.insert(error_fingerprint(d));
  for (const auto& d : report.semantic) summary.fingerprints.insert(error_fingerprint(d));
  return summary;
}

std::string_view mood_label(MoodState mood) {
  switch (mood.index) {
    case -3: return "miserable";
    case -2: return "sad";
    case -1: return "worried";
    case 0: return "neutral";
    case 1: return "content";
    case 2: return "happy";
    case 3: return "ecstatic";
    default: return "neutral";
  }
}

StudentState new_student(std::string studentId, std::string displayName, const CourseConfig& config) {
  StudentState state;
  state.studentId = std::move(studentId);
  state.displayName = std::move(displayName);
  return reconcile_progress(std::move(state), config);
}

std::string_view to_string(GameError error) {
  switch (error) {
    case GameError::CheckOnCompleted: return "CHECK_ON_COMPLETED";
    case GameError::NotComplete: return "NOT_COMPLETE";
    case GameError::AlreadyCompleted: return "ALREADY_COMPLETED";
  }
  return "?";
}

int level_for_xp(Xp xp, const CourseConfig& config) {
  int level = 1;
  for (const Xp threshold : config.levelThresholds) {
    if (threshold > 0 && threshold <= xp) ++level;
  }
  return level;
}

Xp nominal_deduction(Xp baseXp, const CourseConfig& config) {
  return std::llround(config.deductionFraction * static_cast<double>(baseXp));
}

Xp xp_floor(Xp baseXp, const CourseConfig& config) {
  // 0.35 * 100 is 35.000000000000004 in binary floating point.
  return static_cast<Xp>(std::ceil(config.floorFraction * static_cast<double>(baseXp) - 1e-9));
}

Xp obtainable_xp(const ExerciseSession& session, Xp baseXp, const CourseConfig& config) {
  Xp deducted = 0;
  for (const auto& fingerprint : session.activeErrors) {
    auto it = session.deductions.find(fingerprint);
    deducted += it != session.deductions.end() ? it->second : nominal_deduction(baseXp, config);
  }
  return std::max(xp_floor(baseXp, config), baseXp - deducted);
}

Result<CheckOutcome, GameError> apply_check(const StudentState& state, const CourseConfig& config,
                                            std::string_view exerciseId, Xp baseXp, const CheckSummary& summary) {
  StudentState next = state;
  auto [it, inserted] = next.sessions.try_emplace(std::string(exerciseId), fresh_session(exerciseId, baseXp));
  ExerciseSession& session = it->second;
  if (session.completed) return GameError::CheckOnCompleted;

  const Xp previous_obtainable = session.lastObtainable;
  const double previous_completeness = session.lastCompleteness;

  Recap recap;
  for (const auto& fingerprint : summary.fingerprints) {
    if (session.activeErrors.contains(fingerprint)) continue;
    ++recap.newErrors;
    // A previously fixed error comes back with its original deduction.
    session.deductions.try_emplace(fingerprint, nominal_deduction(baseXp, config));
  }
  for (const auto& fingerprint : session.activeErrors) {
    if (!summary.fingerprints.contains(fingerprint)) ++recap.fixedErrors;
  }
  session.activeErrors = summary.fingerprints;

  const Xp obtainable = obtainable_xp(session, baseXp, config);
  ++session.checksUsed;
  session.lastObtainable = obtainable;
  session.lastCompleteness = summary.completeness;
  session.bestCompleteness = std::max(session.bestCompleteness, summary.completeness);

  recap.obtainableXp = obtainable;
  recap.completeness = summary.completeness;
  recap.deltaXp = obtainable - previous_obtainable;
  recap.deltaCompleteness = summary.completeness - previous_completeness;
  return CheckOutcome{std::move(next), recap};
}

Result<CheckOutcome, GameError> apply_check(const StudentState& state, const CourseConfig& config,
                                            const ExerciseSpec& exercise, const EvaluationReport& report) {
  return apply_check(state, config, exercise.exerciseId, exercise.baseXp, summarize(report));
}

MoodState mood_transition(MoodState mood, const Recap& recap) {
  const int score = sign(recap.deltaXp) + sign(recap.fixedErrors - recap.newErrors) + sign(recap.deltaCompleteness);
  return MoodState{std::clamp(mood.index + sign(score), kMoodMin, kMoodMax)};
}

bool completion_condition(const ExerciseSession& session) {
  return session.checksUsed > 0 && !session.completed && session.lastCompleteness == 1.0 &&
         session.activeErrors.empty();
}

Result<CompletionOutcome, GameError> complete_exercise(const StudentState& state, const CourseConfig& config,
                                                       std::string_view exerciseId) {
  auto found = state.sessions.find(std::string(exerciseId));
  if (found == state.sessions.end()) return GameError::NotComplete;
  if (found->second.completed) return GameError::AlreadyCompleted;
  if (!completion_condition(found->second)) return GameError::NotComplete;

  StudentState next = state;
  ExerciseSession& session = next.sessions.at(std::string(exerciseId));

  CompletionResult result;
  for (const auto& multiplier : config.multipliers) {
    if (session.checksUsed <= multiplier.maxChecks) {
      result.multiplierApplied = multiplier.factor;
      break;
    }
  }
  result.awardedXp = std::llround(static_cast<double>(session.lastObtainable) * result.multiplierApplied);

  const int old_level = next.level;
  next.totalXp += result.awardedXp;
  next.level = level_for_xp(next.totalXp, config);
  result.newLevel = next.level;
  for (const auto& prop : config.propUnlocks) {
    if (prop.unlockLevel > old_level && prop.unlockLevel <= next.level) {
      result.unlockedProps.push_back(prop.propId);
      next.ownedProps.insert(prop.propId);
    }
  }
  session.completed = true;
  result.solutionViewUnlocked = true;
  return CompletionOutcome{std::move(next), std::move(result)};
}

Result<CompletionOutcome, GameError> complete_exercise(const StudentState& state, const CourseConfig& config,
                                                       const ExerciseSpec& exercise) {
  return complete_exercise(state, config, exercise.exerciseId);
}

StudentState reconcile_progress(StudentState state, const CourseConfig& config) {
  state.level = level_for_xp(state.totalXp, config);
  for (const auto& prop : config.propUnlocks) {
    if (prop.unlockLevel <= state.level) state.ownedProps.insert(prop.propId);
  }
  return state;
}

std::vector<LeaderboardEntry> leaderboard(const LeaderboardKind& kind, const std::vector<StudentState>& students) {
  struct Row {
    LeaderboardEntry entry;
    std::tuple<double, double> key;  // compared descending
  };
  std::vector<Row> rows;
  for (const auto& student : students) {
    LeaderboardEntry entry{1, student.studentId, student.displayName, 0.0, student.level, student.totalXp,
                           student.equippedProps};
    std::tuple<double, double> key;
    if (std::holds_alternative<XpLevelBoard>(kind)) {
      entry.score = static_cast<double>(student.totalXp);
      key = {static_cast<double>(student.level), static_cast<double>(student.totalXp)};
    } else if (const auto* board = std::get_if<ExerciseScoreBoard>(&kind)) {
      auto session = student.sessions.find(board->exerciseId);
      if (session == student.sessions.end()) continue;
      entry.score = session->second.bestCompleteness;
      key = {entry.score, 0.0};
    } else {
      const auto completed = std::count_if(student.sessions.begin(), student.sessions.end(),
                                           [](const auto& s) { return s.second.completed; });
      entry.score = static_cast<double>(completed);
      key = {entry.score, 0.0};
    }
    rows.push_back({std::move(entry), key});
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.key != b.key) return a.key > b.key;
    return std::tie(a.entry.displayName, a.entry.studentId) < std::tie(b.entry.displayName, b.entry.studentId);
  });

  std::vector<LeaderboardEntry> ranking;
  ranking.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].entry.rank = (i > 0 && rows[i].key == rows[i - 1].key) ? ranking.back().rank : static_cast<int>(i) + 1;
    ranking.push_back(std::move(rows[i].entry));
  }
  return ranking;
}

}  // namespace umlk
