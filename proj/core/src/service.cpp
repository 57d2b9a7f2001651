#include "umlk/service.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <random>

#include "umlk/authoring.hpp"
#include "umlk/codec.hpp"

namespace umlk {

std::string_view to_string(ServiceErrorCode code) {
  switch (code) {
    case ServiceErrorCode::ParseFailed: return "PARSE_FAILED";
    case ServiceErrorCode::UnknownExercise: return "UNKNOWN_EXERCISE";
    case ServiceErrorCode::UnknownStudent: return "UNKNOWN_STUDENT";
    case ServiceErrorCode::AlreadyCompleted: return "ALREADY_COMPLETED";
    case ServiceErrorCode::NotUnlocked: return "NOT_UNLOCKED";
    case ServiceErrorCode::InvalidExercise: return "INVALID_EXERCISE";
    case ServiceErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ServiceErrorCode::PropNotOwned: return "PROP_NOT_OWNED";
    case ServiceErrorCode::Storage: return "STORAGE";
  }
  return "?";
}

namespace {

ServiceError error(ServiceErrorCode code, std::string detail) { return ServiceError{code, std::move(detail), {}, {}, {}}; }

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03lldZ", buffer, static_cast<long long>(millis));
  return out;
}

std::string random_token() {
  std::random_device device;
  std::uniform_int_distribution<int> nibble(0, 15);
  std::string token;
  for (int i = 0; i < 32; ++i) token.push_back("0123456789abcdef"[nibble(device)]);
  return token;
}

}  // namespace

Result<SubmissionStep, GameError> apply_submission(const StudentState& state, const CourseConfig& config,
                                                   std::string_view exerciseId, Xp baseXp,
                                                   const CheckSummary& summary) {
  auto checked = apply_check(state, config, exerciseId, baseXp, summary);
  if (!checked) return checked.error();
  SubmissionStep step{std::move(checked->state), checked->recap, std::nullopt};
  step.state.mood = mood_transition(step.state.mood, step.recap);
  if (completion_condition(step.state.sessions.at(std::string(exerciseId)))) {
    auto done = complete_exercise(step.state, config, exerciseId);
    if (!done) return done.error();
    step.state = std::move(done->state);
    step.completion = std::move(done->result);
  }
  return step;
}

CourseService::CourseService(const std::filesystem::path& dataDir, Clock clock)
    : store_(dataDir), clock_(clock ? std::move(clock) : Clock(utc_now)) {}

CourseService::~CourseService() { store_.flush(); }

std::string CourseService::now() const { return clock_(); }

Result<std::unique_ptr<CourseService>, std::string> CourseService::open(const std::filesystem::path& dataDir,
                                                                         Clock clock) {
  std::unique_ptr<CourseService> service;
  try {
    service.reset(new CourseService(dataDir, std::move(clock)));
  } catch (const std::exception& e) {
    return std::string("cannot open data directory: ") + e.what();
  }

  bool had_config_event = false;
  if (auto failure = service->replay()) return *failure;
  {
    auto events = service->store_.read_events();
    for (const auto& event : events.value()) had_config_event = had_config_event || std::holds_alternative<ConfigEvent>(event);
  }

  try {
    const auto text = service->store_.read_course_text();
    std::optional<CourseFile> on_disk;
    if (text) {
      auto parsed = parse_course_file(*text);
      if (!parsed) {
        std::string message = "course.config is invalid:";
        for (const auto& problem : parsed.error()) message += " " + problem + ";";
        return message;
      }
      on_disk = std::move(parsed).value();
    } else if (!had_config_event) {
      CourseFile fresh;
      fresh.users.push_back({"teacher", "Teacher", random_token(), true});
      on_disk = fresh;
      std::clog << "umlk: initialized " << dataDir.string() << "; teacher token " << fresh.users.front().token << "\n";
    }

    if (on_disk && (!had_config_event || *on_disk != service->course_)) {
      // Offline edits to course.config (or a fresh course) enter the log so
      // replay sees the same configuration history.
      service->store_.append(ConfigEvent{service->now(), *on_disk});
      service->apply_course(*on_disk);
    }
    service->store_.write_course(service->course_);

    auto exercises = service->store_.load_exercises();
    if (!exercises) return exercises.error();
    for (auto& exercise : exercises.value()) service->exercises_.emplace(exercise.exerciseId, std::move(exercise));

    for (const auto& id : service->stale_snapshots()) {
      service->store_.write_snapshot(service->students_.at(id)->state);
    }
  } catch (const std::exception& e) {
    return std::string("cannot initialize data directory: ") + e.what();
  }
  return service;
}

std::optional<std::string> CourseService::replay() {
  auto events = store_.read_events();
  if (!events) return events.error();
  std::size_t position = 0;
  for (const auto& event : events.value()) {
    ++position;
    if (const auto* config = std::get_if<ConfigEvent>(&event)) {
      apply_course(config->course);
    } else if (const auto* avatar = std::get_if<AvatarEvent>(&event)) {
      StudentSlot* s = slot(avatar->studentId);
      if (s == nullptr) return "event " + std::to_string(position) + ": unknown student " + avatar->studentId;
      s->state.equippedProps = avatar->equippedProps;
    } else {
      const auto& check = std::get<CheckEvent>(event);
      StudentSlot* s = slot(check.studentId);
      if (s == nullptr) return "event " + std::to_string(position) + ": unknown student " + check.studentId;
      auto step = apply_submission(s->state, course_.game, check.exerciseId, check.baseXp, check.summary);
      if (!step) {
        return "event " + std::to_string(position) + ": " + std::string(to_string(step.error()));
      }
      s->state = std::move(step->state);
    }
  }
  return std::nullopt;
}

void CourseService::apply_course(const CourseFile& course) {
  course_ = course;
  for (const auto& user : course_.users) {
    if (user.isTeacher) continue;
    auto it = students_.find(user.userId);
    if (it == students_.end()) {
      auto slot = std::make_unique<StudentSlot>();
      slot->state = new_student(user.userId, user.displayName, course_.game);
      students_.emplace(user.userId, std::move(slot));
    } else {
      it->second->state.displayName = user.displayName;
    }
  }
  for (auto& [id, slot] : students_) slot->state = reconcile_progress(std::move(slot->state), course_.game);
}

CourseService::StudentSlot* CourseService::slot(std::string_view studentId) const {
  auto it = students_.find(studentId);
  return it == students_.end() ? nullptr : it->second.get();
}

std::optional<UserAccount> CourseService::authenticate(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  std::shared_lock lock(course_mutex_);
  for (const auto& user : course_.users) {
    if (user.token == token) return user;
  }
  return std::nullopt;
}

Result<CheckResponse, ServiceError> CourseService::handle_check(std::string_view studentId,
                                                                std::string_view exerciseId,
                                                                std::string_view documentText) {
  std::shared_lock course_lock(course_mutex_);
  auto exercise = exercises_.find(exerciseId);
  if (exercise == exercises_.end()) return error(ServiceErrorCode::UnknownExercise, std::string(exerciseId));
  StudentSlot* s = slot(studentId);
  if (s == nullptr) return error(ServiceErrorCode::UnknownStudent, std::string(studentId));

  std::lock_guard student_lock(s->mutex);
  if (auto session = s->state.sessions.find(exercise->first);
      session != s->state.sessions.end() && session->second.completed) {
    return error(ServiceErrorCode::AlreadyCompleted, "exercise already completed");
  }

  auto doc = parse_document(documentText);
  if (!doc) {
    ServiceError failure = error(ServiceErrorCode::ParseFailed, doc.error().detail);
    failure.parse = doc.error();
    return failure;
  }

  const ExerciseSpec& spec = exercise->second;
  EvaluationReport report = evaluate_exercise(spec, *doc);
  CheckSummary summary = summarize(report);
  auto step = apply_submission(s->state, course_.game, spec.exerciseId, spec.baseXp, summary);
  if (!step) return error(ServiceErrorCode::AlreadyCompleted, std::string(to_string(step.error())));

  const ExerciseSession& session = step->state.sessions.at(spec.exerciseId);
  CheckEvent event{now(), std::string(studentId), spec.exerciseId, std::string(documentText), spec.baseXp,
                   std::move(summary), session.lastObtainable, session.completed};
  try {
    store_.append(event);
  } catch (const std::exception& e) {
    return error(ServiceErrorCode::Storage, e.what());
  }
  s->state = std::move(step->state);
  try {
    store_.write_snapshot(s->state);
  } catch (const std::exception& e) {
    // The log already holds the event; the snapshot is rebuilt on restart.
    std::clog << "umlk: snapshot write failed for " << studentId << ": " << e.what() << "\n";
  }

  CheckResponse response;
  response.report = std::move(report);
  response.recap = step->recap;
  response.mood = s->state.mood;
  response.obtainableXp = step->recap.obtainableXp;
  response.baseXp = spec.baseXp;
  response.totalXp = s->state.totalXp;
  response.level = s->state.level;
  response.completion = std::move(step->completion);
  return response;
}

Result<std::vector<ReferenceSolution>, ServiceError> CourseService::get_solution_view(
    std::string_view studentId, std::string_view exerciseId) const {
  std::shared_lock course_lock(course_mutex_);
  auto exercise = exercises_.find(exerciseId);
  if (exercise == exercises_.end()) return error(ServiceErrorCode::UnknownExercise, std::string(exerciseId));
  StudentSlot* s = slot(studentId);
  if (s == nullptr) return error(ServiceErrorCode::UnknownStudent, std::string(studentId));
  std::lock_guard student_lock(s->mutex);
  auto session = s->state.sessions.find(exercise->first);
  if (session == s->state.sessions.end() || !session->second.completed) {
    return error(ServiceErrorCode::NotUnlocked, "complete the exercise to view its reference solutions");
  }
  return exercise->second.solutions;
}

std::vector<ExerciseSpec> CourseService::exercises() const {
  std::shared_lock lock(course_mutex_);
  std::vector<ExerciseSpec> out;
  for (const auto& [id, exercise] : exercises_) out.push_back(exercise);
  return out;
}

Result<ExerciseSpec, ServiceError> CourseService::exercise(std::string_view exerciseId) const {
  std::shared_lock lock(course_mutex_);
  auto it = exercises_.find(exerciseId);
  if (it == exercises_.end()) return error(ServiceErrorCode::UnknownExercise, std::string(exerciseId));
  return it->second;
}

Result<StudentState, ServiceError> CourseService::student(std::string_view studentId) const {
  std::shared_lock lock(course_mutex_);
  StudentSlot* s = slot(studentId);
  if (s == nullptr) return error(ServiceErrorCode::UnknownStudent, std::string(studentId));
  std::lock_guard student_lock(s->mutex);
  return s->state;
}

std::vector<StudentState> CourseService::students() const {
  std::shared_lock lock(course_mutex_);
  std::vector<StudentState> out;
  for (const auto& [id, s] : students_) {
    std::lock_guard student_lock(s->mutex);
    out.push_back(s->state);
  }
  return out;
}

Result<StudentState, ServiceError> CourseService::equip(std::string_view studentId,
                                                        const std::set<std::string>& props) {
  std::shared_lock course_lock(course_mutex_);
  StudentSlot* s = slot(studentId);
  if (s == nullptr) return error(ServiceErrorCode::UnknownStudent, std::string(studentId));
  std::lock_guard student_lock(s->mutex);
  for (const auto& prop : props) {
    if (!s->state.ownedProps.contains(prop)) return error(ServiceErrorCode::PropNotOwned, prop);
  }
  try {
    store_.append(AvatarEvent{now(), std::string(studentId), props});
  } catch (const std::exception& e) {
    return error(ServiceErrorCode::Storage, e.what());
  }
  s->state.equippedProps = props;
  try {
    store_.write_snapshot(s->state);
  } catch (const std::exception& e) {
    std::clog << "umlk: snapshot write failed for " << studentId << ": " << e.what() << "\n";
  }
  return s->state;
}

CourseFile CourseService::course() const {
  std::shared_lock lock(course_mutex_);
  return course_;
}

Result<CourseFile, ServiceError> CourseService::update_course(std::string_view courseText) {
  auto parsed = parse_course_file(courseText);
  if (!parsed) {
    ServiceError failure = error(ServiceErrorCode::InvalidConfig, "course config rejected");
    failure.problems = std::move(parsed.error());
    return failure;
  }
  std::unique_lock lock(course_mutex_);
  try {
    store_.append(ConfigEvent{now(), parsed.value()});
  } catch (const std::exception& e) {
    return error(ServiceErrorCode::Storage, e.what());
  }
  apply_course(parsed.value());
  try {
    store_.write_course(course_);
    for (const auto& [id, s] : students_) store_.write_snapshot(s->state);
  } catch (const std::exception& e) {
    std::clog << "umlk: writing course files failed: " << e.what() << "\n";
  }
  return course_;
}

Result<ExerciseSpec, ServiceError> CourseService::put_exercise(std::string_view exerciseText,
                                                               std::optional<std::string_view> expectedId) {
  auto loaded = load_exercise(exerciseText);
  if (!loaded) {
    ServiceError failure = error(ServiceErrorCode::InvalidExercise, "exercise rejected");
    failure.issues = std::move(loaded.error());
    return failure;
  }
  ExerciseSpec exercise = std::move(loaded).value();
  if (!is_safe_id(exercise.exerciseId)) {
    return error(ServiceErrorCode::InvalidExercise, "exerciseId must match [A-Za-z0-9_-]{1,64}");
  }
  if (expectedId && *expectedId != exercise.exerciseId) {
    return error(ServiceErrorCode::InvalidExercise, "exerciseId in the body does not match the URL");
  }
  std::unique_lock lock(course_mutex_);
  try {
    store_.write_exercise(exercise);
  } catch (const std::exception& e) {
    return error(ServiceErrorCode::Storage, e.what());
  }
  exercises_.insert_or_assign(exercise.exerciseId, exercise);
  return exercise;
}

Result<std::vector<LeaderboardEntry>, ServiceError> CourseService::leaderboard(const LeaderboardKind& kind) const {
  if (const auto* board = std::get_if<ExerciseScoreBoard>(&kind)) {
    std::shared_lock lock(course_mutex_);
    if (!exercises_.contains(board->exerciseId)) return error(ServiceErrorCode::UnknownExercise, board->exerciseId);
  }
  return umlk::leaderboard(kind, students());
}

Result<std::string, ServiceError> CourseService::snapshot(std::string_view studentId) const {
  auto state = student(studentId);
  if (!state) return state.error();
  return snapshot_text(state.value());
}

std::vector<std::string> CourseService::stale_snapshots() const {
  std::vector<std::string> stale;
  for (const auto& state : students()) {
    if (store_.read_snapshot(state.studentId) != snapshot_text(state)) stale.push_back(state.studentId);
  }
  return stale;
}

void CourseService::flush() { store_.flush(); }

}  // namespace umlk
