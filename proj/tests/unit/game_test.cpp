#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "umlk/game.hpp"

using namespace umlk;

namespace {

CheckSummary errors(std::initializer_list<int> ids, double completeness = 0.5) {
  CheckSummary s;
  s.completeness = completeness;
  for (int id : ids) s.fingerprints.insert(gen::fingerprint(id));
  return s;
}

ExerciseSession session_with(int active, Xp) {
  ExerciseSession s;
  for (int i = 0; i < active; ++i) {
    s.activeErrors.insert(gen::fingerprint(i));
    s.deductions[gen::fingerprint(i)] = 5;
  }
  return s;
}

Recap recap_with_signs(int xp, int errorBalance, int completeness) {
  Recap r;
  r.deltaXp = xp * 5;
  if (errorBalance > 0) r.fixedErrors = 2;
  if (errorBalance < 0) r.newErrors = 3;
  r.deltaCompleteness = completeness * 0.125;
  return r;
}

}  // namespace

TEST_CASE("obtainable XP examples") {
  const CourseConfig config;
  CHECK(obtainable_xp(ExerciseSession{}, 100, config) == 100);
  CHECK(obtainable_xp(session_with(3, 100), 100, config) == 85);
  CHECK(obtainable_xp(session_with(20, 100), 100, config) == 35);
  CHECK(xp_floor(100, config) == 35);
  CHECK(xp_floor(101, config) == 36);
  CHECK(nominal_deduction(100, config) == 5);
  CHECK(nominal_deduction(30, config) == 2);  // 1.5 rounds away from zero
  CHECK(nominal_deduction(10, config) == 1);  // 0.5 rounds away from zero
}

TEST_CASE("apply_check sequence from the deduction rules") {
  const CourseConfig config;
  StudentState s = new_student("s1", "Sam", config);

  auto first = apply_check(s, config, "ex", 100, errors({1, 2}));
  REQUIRE(first.ok());
  CHECK(first->recap.obtainableXp == 90);
  CHECK(first->recap.newErrors == 2);
  CHECK(first->recap.fixedErrors == 0);
  CHECK(first->recap.deltaXp == -10);
  CHECK(first->recap.deltaCompleteness == 0.5);

  auto second = apply_check(first->state, config, "ex", 100, errors({1, 2}));
  CHECK(second->recap.obtainableXp == 90);
  CHECK(second->recap.newErrors == 0);
  CHECK(second->recap.fixedErrors == 0);
  CHECK(second->recap.deltaXp == 0);
  CHECK(second->state.sessions.at("ex").deductions == first->state.sessions.at("ex").deductions);
  CHECK(second->state.sessions.at("ex").checksUsed == 2);

  auto third = apply_check(second->state, config, "ex", 100, errors({2}));
  CHECK(third->recap.obtainableXp == 95);
  CHECK(third->recap.fixedErrors == 1);
  CHECK(third->recap.deltaXp == 5);

  // reintroducing a fixed error reuses its deduction
  auto fourth = apply_check(third->state, config, "ex", 100, errors({1, 2}));
  CHECK(fourth->recap.obtainableXp == 90);
  CHECK(fourth->recap.newErrors == 1);
  CHECK(fourth->state.sessions.at("ex").deductions.size() == 2);
}

TEST_CASE("first check compares against a full baseline") {
  const CourseConfig config;
  auto out = apply_check(new_student("s", "S", config), config, "ex", 100, errors({}, 1.0));
  CHECK(out->recap == Recap{0, 0, 0, 1.0, 100, 1.0});
  CHECK(mood_transition(MoodState{}, out->recap).index == 1);
}

TEST_CASE("checks on a completed session are refused") {
  const CourseConfig config;
  auto out = apply_check(new_student("s", "S", config), config, "ex", 100, errors({}, 1.0));
  auto done = complete_exercise(out->state, config, "ex");
  REQUIRE(done.ok());
  auto again = apply_check(done->state, config, "ex", 100, errors({}, 1.0));
  REQUIRE_FALSE(again.ok());
  CHECK(again.error() == GameError::CheckOnCompleted);
  CHECK(complete_exercise(done->state, config, "ex").error() == GameError::AlreadyCompleted);
}

TEST_CASE("completion requires a clean, complete last check") {
  const CourseConfig config;
  StudentState s = new_student("s", "S", config);
  CHECK(complete_exercise(s, config, "ex").error() == GameError::NotComplete);
  auto partial = apply_check(s, config, "ex", 100, errors({}, 0.9));
  CHECK(complete_exercise(partial->state, config, "ex").error() == GameError::NotComplete);
  auto noisy = apply_check(s, config, "ex", 100, errors({4}, 1.0));
  CHECK(complete_exercise(noisy->state, config, "ex").error() == GameError::NotComplete);
}

TEST_CASE("completion rewards") {
  CourseConfig config;
  config.levelThresholds = {0, 100, 250};
  config.multipliers = {{1, 1.5}};
  config.propUnlocks = {{"cap", 1}, {"glasses", 2}, {"crown", 3}};

  StudentState s = new_student("s", "S", config);
  s.totalXp = 80;
  s = reconcile_progress(s, config);
  REQUIRE(s.level == 1);
  ExerciseSession session;
  session.exerciseId = "ex";
  session.checksUsed = 1;
  session.lastCompleteness = 1.0;
  session.lastObtainable = 90;
  s.sessions["ex"] = session;

  auto done = complete_exercise(s, config, "ex");
  REQUIRE(done.ok());
  CHECK(done->result.multiplierApplied == 1.5);
  CHECK(done->result.awardedXp == 135);
  CHECK(done->state.totalXp == 215);
  CHECK(done->result.newLevel == 2);
  CHECK(done->result.unlockedProps == std::vector<std::string>{"glasses"});
  CHECK(done->state.ownedProps == std::set<std::string>{"cap", "glasses"});
  CHECK(done->result.solutionViewUnlocked);
  CHECK(done->state.sessions.at("ex").completed);

  // no multiplier applies after too many checks
  s.sessions["ex"].checksUsed = 2;
  done = complete_exercise(s, config, "ex");
  CHECK(done->result.multiplierApplied == 1.0);
  CHECK(done->result.awardedXp == 90);
}

TEST_CASE("default multipliers pick the first entry that applies") {
  const CourseConfig config;
  auto play = [&](int checks) {
    StudentState s = new_student("s", "S", config);
    for (int i = 1; i < checks; ++i) s = apply_check(s, config, "ex", 100, errors({}, 0.5))->state;
    s = apply_check(s, config, "ex", 100, errors({}, 1.0))->state;
    return complete_exercise(s, config, "ex")->result;
  };
  CHECK(play(1).awardedXp == 150);
  CHECK(play(2).awardedXp == 125);
  CHECK(play(3).awardedXp == 125);
  CHECK(play(4).awardedXp == 100);
}

TEST_CASE("levels") {
  CourseConfig config;
  config.levelThresholds = {0, 100, 250};
  CHECK(level_for_xp(0, config) == 1);
  CHECK(level_for_xp(99, config) == 1);
  CHECK(level_for_xp(100, config) == 2);
  CHECK(level_for_xp(1'000'000'000, config) == 3);
  CHECK(level_for_xp(1'000'000'000, CourseConfig{}) == 6);
}

TEST_CASE("mood examples") {
  CHECK(mood_transition(MoodState{0}, Recap{0, 1, 5, 0.1, 0, 0}).index == 1);
  CHECK(mood_transition(MoodState{3}, Recap{0, 1, 5, 0.1, 0, 0}).index == 3);
  CHECK(mood_transition(MoodState{0}, Recap{2, 0, -10, -0.05, 0, 0}).index == -1);
  CHECK(mood_transition(MoodState{-2}, Recap{}).index == -2);
  CHECK(mood_label(MoodState{-3}) == "miserable");
  CHECK(mood_label(MoodState{3}) == "ecstatic");
}

TEST_CASE("mood ladder is exhaustive") {
  for (int start = kMoodMin; start <= kMoodMax; ++start) {
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int c = -1; c <= 1; ++c) {
          const int next = mood_transition(MoodState{start}, recap_with_signs(a, b, c)).index;
          const int sum = a + b + c;
          const int expected = std::clamp(start + (sum > 0) - (sum < 0), -3, 3);
          CHECK(next == expected);
          CHECK(std::abs(next - start) <= 1);
        }
      }
    }
  }
}

TEST_CASE("fingerprints") {
  Diagnostic missing{Severity::Semantic, Rule::SemMissingElement, {}, {"Admin"}, std::string("r7"), "x"};
  CHECK(error_fingerprint(missing) == error_fingerprint(missing));
  CHECK(error_fingerprint(missing).anchor == "r7");

  Diagnostic dup1{Severity::Syntactic, Rule::SynDuplicateName, {"a", "b"}, {"User", "User"}, std::nullopt, "m"};
  Diagnostic dup2{Severity::Syntactic, Rule::SynDuplicateName, {"c", "d"}, {"user", "USER"}, std::nullopt, "n"};
  CHECK(error_fingerprint(dup1) == error_fingerprint(dup2));

  Diagnostic other = dup1;
  other.rule = Rule::SynActorInSystem;
  CHECK_FALSE(error_fingerprint(other) == error_fingerprint(dup1));

  Diagnostic unnamed{Severity::Syntactic, Rule::SynMissingName, {"x9"}, {""}, std::nullopt, "m"};
  CHECK(error_fingerprint(unnamed).anchor == "#x9");

  Diagnostic extra{Severity::Semantic, Rule::SemExtraRelation, {"r", "b", "a"}, {"Zed", "Alpha"}, std::nullopt, ""};
  CHECK(error_fingerprint(extra).anchor == "alpha|zed");
}

TEST_CASE("report-driven overload matches the summary path") {
  const CourseConfig config;
  const auto spec = fx::exercise("shop", {fx::shop_reference()});
  const auto report = evaluate_exercise(spec, fx::shop_violations()[0].diagram.parse());
  const StudentState s = new_student("s", "S", config);
  auto a = apply_check(s, config, spec, report);
  auto b = apply_check(s, config, "shop", 100, summarize(report));
  CHECK(a->state == b->state);
  CHECK(a->recap == b->recap);
  CHECK(a->recap.newErrors == 1);
}

TEST_CASE("leaderboards") {
  auto student = [](std::string id, std::string name, Xp xp, int level) {
    StudentState s;
    s.studentId = std::move(id);
    s.displayName = std::move(name);
    s.totalXp = xp;
    s.level = level;
    return s;
  };
  std::vector<StudentState> students{student("c", "Cleo", 120, 2), student("b", "Bo", 300, 3),
                                     student("a", "Al", 300, 3)};
  auto board = leaderboard(XpLevelBoard{}, students);
  REQUIRE(board.size() == 3);
  CHECK(board[0].studentId == "a");
  CHECK(board[1].studentId == "b");
  CHECK(board[2].studentId == "c");
  CHECK(board[0].rank == 1);
  CHECK(board[1].rank == 1);
  CHECK(board[2].rank == 3);

  CHECK(leaderboard(XpLevelBoard{}, {}).empty());

  students[2].sessions["e"].completed = true;
  students[2].sessions["f"].completed = true;
  students[0].sessions["e"].bestCompleteness = 0.5;
  board = leaderboard(CompletedCountBoard{}, students);
  CHECK(board[0].studentId == "a");
  CHECK(board[0].score == 2);
  CHECK(board[1].rank == 2);
  CHECK(board[2].rank == 2);

  board = leaderboard(ExerciseScoreBoard{"e"}, students);
  REQUIRE(board.size() == 2);
  CHECK(board[0].studentId == "c");
  CHECK(board[1].studentId == "a");
}

TEST_CASE("config validation") {
  CHECK(validate_config(CourseConfig{}).empty());
  CourseConfig bad;
  bad.levelThresholds = {10, 5};
  bad.floorFraction = 1.0;
  bad.multipliers = {{3, 1.25}, {1, 1.5}};
  bad.propUnlocks = {{"cap", 0}, {"cap", 1}};
  CHECK(validate_config(bad).size() >= 6);
}

TEST_CASE("reconcile never removes owned props") {
  CourseConfig config;
  StudentState s = new_student("s", "S", config);
  s.totalXp = 500;
  s = reconcile_progress(s, config);
  CHECK(s.level == 4);
  CHECK(s.ownedProps.contains("cape"));
  config.levelThresholds = {0, 1000, 2000};
  s = reconcile_progress(s, config);
  CHECK(s.level == 1);
  CHECK(s.ownedProps.contains("cape"));
}

TEST_CASE("XP laws on random check sequences") {
  gen::Rng rng(1234);
  for (int sequence = 0; sequence < 300; ++sequence) {
    CourseConfig config;
    const int pct = gen::uniform(rng, 1, 20);
    config.deductionFraction = pct / 100.0;
    const Xp base = gen::uniform(rng, 1, 2000);
    StudentState s = new_student("s", "S", config);
    std::set<ErrorFingerprint> previous;
    for (int step = 0; step < 25; ++step) {
      CheckSummary summary;
      summary.completeness = gen::uniform(rng, 0, 4) / 4.0;
      for (int e = 0; e < 30; ++e) {
        if (gen::coin(rng, 0.2)) summary.fingerprints.insert(gen::fingerprint(e));
      }
      if (summary.completeness == 1.0) summary.fingerprints.insert(gen::fingerprint(0));  // stay incomplete
      auto out = apply_check(s, config, "ex", base, summary);
      REQUIRE(out.ok());
      const Xp expected = oracle::obtainable(base, pct, 35, summary.fingerprints.size());
      CHECK(out->recap.obtainableXp == expected);
      CHECK(out->recap.obtainableXp >= xp_floor(base, config));
      auto repeat = apply_check(out->state, config, "ex", base, summary);
      CHECK(repeat->recap.obtainableXp == out->recap.obtainableXp);
      CHECK(repeat->state.sessions.at("ex").deductions == out->state.sessions.at("ex").deductions);
      s = out->state;
      previous = summary.fingerprints;
    }
  }
}
