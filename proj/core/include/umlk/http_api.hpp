#pragma once

#include <memory>
#include <string>

#include "umlk/service.hpp"

namespace umlk {

/// JSON-over-HTTP front end for a CourseService. Every request carries
/// `Authorization: Bearer <token>`.
///
///   POST /api/exercises/{id}/checks        student; body is the diagram document
///   GET  /api/exercises                    list with completed flags
///   GET  /api/exercises/{id}               statement, boss, baseXp, leaderboard
///   GET  /api/exercises/{id}/solutions     only after completion
///   GET  /api/leaderboards/xp
///   GET  /api/leaderboards/exercise/{id}
///   GET  /api/leaderboards/completed
///   GET  /api/profile
///   PUT  /api/profile/avatar               {"equippedProps": [...]}
///   PUT  /api/course/config                teacher
///   POST /api/exercises                    teacher; exercise file body
///   PUT  /api/exercises/{id}               teacher
class HttpApi {
 public:
  explicit HttpApi(CourseService& service);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// False when the address cannot be bound.
  bool bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_to_any_port(const std::string& host);
  /// Blocks until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for a service error.
int http_status(ServiceErrorCode code);

}  // namespace umlk
