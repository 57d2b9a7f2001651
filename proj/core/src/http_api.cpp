#include "umlk/http_api.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "umlk/codec.hpp"

namespace umlk {

using nlohmann::json;

int http_status(ServiceErrorCode code) {
  switch (code) {
    case ServiceErrorCode::ParseFailed:
    case ServiceErrorCode::InvalidExercise:
    case ServiceErrorCode::InvalidConfig:
    case ServiceErrorCode::PropNotOwned:
      return 400;
    case ServiceErrorCode::NotUnlocked: return 403;
    case ServiceErrorCode::UnknownExercise:
    case ServiceErrorCode::UnknownStudent:
      return 404;
    case ServiceErrorCode::AlreadyCompleted: return 409;
    case ServiceErrorCode::Storage: return 500;
  }
  return 500;
}

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& detail) {
  send(res, status, json{{"error", code}, {"detail", detail}});
}

void send_error(httplib::Response& res, const ServiceError& error) {
  json body{{"error", to_string(error.code)}, {"detail", error.detail}};
  if (error.parse) body["parseError"] = *error.parse;
  if (!error.issues.empty()) body["issues"] = error.issues;
  if (!error.problems.empty()) body["problems"] = error.problems;
  send(res, http_status(error.code), body);
}

json check_json(const CheckResponse& r) {
  json j{{"report", r.report},     {"recap", r.recap},     {"mood", r.mood},   {"obtainableXp", r.obtainableXp},
         {"baseXp", r.baseXp},     {"totalXp", r.totalXp}, {"level", r.level}, {"completion", nullptr}};
  if (r.completion) j["completion"] = *r.completion;
  return j;
}

json exercise_summary(const ExerciseSpec& e, const std::optional<StudentState>& viewer) {
  bool completed = false;
  if (viewer) {
    auto it = viewer->sessions.find(e.exerciseId);
    completed = it != viewer->sessions.end() && it->second.completed;
  }
  return json{{"exerciseId", e.exerciseId},
              {"title", e.title},
              {"statement", e.statement},
              {"baseXp", e.baseXp},
              {"boss", {{"iconId", e.boss.iconId}, {"taunt", e.boss.taunt}}},
              {"completed", completed}};
}

json profile_json(const StudentState& s, const CourseConfig& config) {
  json j = s;
  j["moodLabel"] = mood_label(s.mood);
  const auto& thresholds = config.levelThresholds;
  const auto next = static_cast<std::size_t>(s.level);
  j["nextLevelXp"] = next < thresholds.size() ? json(thresholds[next]) : json(nullptr);
  return j;
}

}  // namespace

struct HttpApi::Impl {
  CourseService& service;
  httplib::Server server;

  explicit Impl(CourseService& s) : service(s) {
    // The library default adds SO_REUSEPORT, which would let a second
    // server share a port that is already in use.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    routes();
  }

  std::optional<UserAccount> user(const httplib::Request& req, httplib::Response& res) {
    const std::string header = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    std::optional<UserAccount> account;
    if (header.size() > prefix.size() && header.compare(0, prefix.size(), prefix) == 0) {
      account = service.authenticate(std::string_view(header).substr(prefix.size()));
    }
    if (!account) send_error(res, 401, "UNAUTHENTICATED", "missing or unknown bearer token");
    return account;
  }

  std::optional<UserAccount> teacher(const httplib::Request& req, httplib::Response& res) {
    auto account = user(req, res);
    if (account && !account->isTeacher) {
      send_error(res, 403, "FORBIDDEN", "teacher token required");
      return std::nullopt;
    }
    return account;
  }

  std::optional<StudentState> viewer(const UserAccount& account) {
    if (account.isTeacher) return std::nullopt;
    auto state = service.student(account.userId);
    if (!state) return std::nullopt;
    return state.value();
  }

  void board(httplib::Response& res, const LeaderboardKind& kind) {
    auto entries = service.leaderboard(kind);
    if (!entries) return send_error(res, entries.error());
    send(res, 200, json{{"entries", entries.value()}});
  }

  void routes() {
    server.Post(R"(/api/exercises/([^/]+)/checks)", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      if (account->isTeacher) return send_error(res, 403, "FORBIDDEN", "checks are submitted by students");
      auto result = service.handle_check(account->userId, req.matches[1].str(), req.body);
      if (!result) return send_error(res, result.error());
      send(res, 200, check_json(result.value()));
    });

    server.Get("/api/exercises", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      const auto me = viewer(*account);
      json list = json::array();
      for (const auto& e : service.exercises()) list.push_back(exercise_summary(e, me));
      send(res, 200, json{{"exercises", list}});
    });

    server.Get(R"(/api/exercises/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      const std::string id = req.matches[1].str();
      auto exercise = service.exercise(id);
      if (!exercise) return send_error(res, exercise.error());
      json body = exercise_summary(exercise.value(), viewer(*account));
      auto entries = service.leaderboard(ExerciseScoreBoard{id});
      body["leaderboard"] = entries ? json(entries.value()) : json::array();
      send(res, 200, body);
    });

    server.Get(R"(/api/exercises/([^/]+)/solutions)", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      const std::string id = req.matches[1].str();
      if (account->isTeacher) {
        auto exercise = service.exercise(id);
        if (!exercise) return send_error(res, exercise.error());
        return send(res, 200, json{{"solutions", exercise->solutions}});
      }
      auto solutions = service.get_solution_view(account->userId, id);
      if (!solutions) return send_error(res, solutions.error());
      send(res, 200, json{{"solutions", solutions.value()}});
    });

    server.Get("/api/leaderboards/xp", [this](const httplib::Request& req, httplib::Response& res) {
      if (user(req, res)) board(res, XpLevelBoard{});
    });
    server.Get("/api/leaderboards/completed", [this](const httplib::Request& req, httplib::Response& res) {
      if (user(req, res)) board(res, CompletedCountBoard{});
    });
    server.Get(R"(/api/leaderboards/exercise/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (user(req, res)) board(res, ExerciseScoreBoard{req.matches[1].str()});
    });

    server.Get("/api/profile", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      if (account->isTeacher) {
        return send(res, 200, json{{"userId", account->userId}, {"displayName", account->displayName}, {"isTeacher", true}});
      }
      auto state = service.student(account->userId);
      if (!state) return send_error(res, state.error());
      send(res, 200, profile_json(state.value(), service.course().game));
    });

    server.Put("/api/profile/avatar", [this](const httplib::Request& req, httplib::Response& res) {
      auto account = user(req, res);
      if (!account) return;
      const json body = json::parse(req.body, nullptr, false);
      std::set<std::string> props;
      try {
        if (!body.is_object()) throw std::invalid_argument("body must be an object");
        props = body.at("equippedProps").get<std::set<std::string>>();
      } catch (const std::exception&) {
        return send_error(res, 400, "MALFORMED_INPUT", "expected {\"equippedProps\": [string, ...]}");
      }
      auto state = service.equip(account->userId, props);
      if (!state) return send_error(res, state.error());
      send(res, 200, profile_json(state.value(), service.course().game));
    });

    server.Put("/api/course/config", [this](const httplib::Request& req, httplib::Response& res) {
      if (!teacher(req, res)) return;
      auto course = service.update_course(req.body);
      if (!course) return send_error(res, course.error());
      send(res, 200, json{{"config", course->game}, {"users", course->users.size()}});
    });

    server.Post("/api/exercises", [this](const httplib::Request& req, httplib::Response& res) {
      if (!teacher(req, res)) return;
      auto exercise = service.put_exercise(req.body);
      if (!exercise) return send_error(res, exercise.error());
      send(res, 201, exercise_summary(exercise.value(), std::nullopt));
    });

    server.Put(R"(/api/exercises/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!teacher(req, res)) return;
      const std::string id = req.matches[1].str();
      auto exercise = service.put_exercise(req.body, std::string_view(id));
      if (!exercise) return send_error(res, exercise.error());
      send(res, 200, exercise_summary(exercise.value(), std::nullopt));
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string detail = "internal error";
      try {
        if (ep) std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        detail = e.what();
      } catch (...) {
      }
      send_error(res, 500, "INTERNAL", detail);
    });
  }
};

HttpApi::HttpApi(CourseService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpApi::~HttpApi() = default;

bool HttpApi::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
int HttpApi::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpApi::listen() { return impl_->server.listen_after_bind(); }
void HttpApi::stop() { impl_->server.stop(); }
void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace umlk
