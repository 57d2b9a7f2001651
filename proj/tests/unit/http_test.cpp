#include <doctest.h>
#include <httplib.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "fixtures.hpp"
#include "umlk/authoring.hpp"
#include "umlk/http_api.hpp"
#include "umlk/service.hpp"

using namespace umlk;
using nlohmann::json;

namespace {

struct Server {
  fx::TempDir dir;
  std::unique_ptr<CourseService> service;
  std::unique_ptr<HttpApi> api;
  std::thread thread;
  int port = 0;

  Server() {
    service = std::move(CourseService::open(dir.path())).value();
    CourseFile course;
    course.users = {{"t", "Teacher", "tt", true}, {"s1", "Ada", "a1", false}, {"s2", "Bo", "b2", false}};
    REQUIRE(service->update_course(course_file_text(course)).ok());
    REQUIRE(service->put_exercise(serialize_exercise(fx::exercise("shop", {fx::shop_reference()}))).ok());
    api = std::make_unique<HttpApi>(*service);
    port = api->bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { api->listen(); });
    api->wait_until_ready();
  }
  ~Server() {
    api->stop();
    thread.join();
  }

  httplib::Client client(const std::string& token) const {
    httplib::Client c("127.0.0.1", port);
    if (!token.empty()) c.set_bearer_token_auth(token);
    return c;
  }
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("http status mapping") {
  CHECK(http_status(ServiceErrorCode::ParseFailed) == 400);
  CHECK(http_status(ServiceErrorCode::InvalidExercise) == 400);
  CHECK(http_status(ServiceErrorCode::InvalidConfig) == 400);
  CHECK(http_status(ServiceErrorCode::PropNotOwned) == 400);
  CHECK(http_status(ServiceErrorCode::NotUnlocked) == 403);
  CHECK(http_status(ServiceErrorCode::UnknownExercise) == 404);
  CHECK(http_status(ServiceErrorCode::UnknownStudent) == 404);
  CHECK(http_status(ServiceErrorCode::AlreadyCompleted) == 409);
  CHECK(http_status(ServiceErrorCode::Storage) == 500);
}

TEST_CASE("authentication") {
  Server server;
  CHECK(server.client("").Get("/api/exercises")->status == 401);
  CHECK(server.client("nope").Get("/api/profile")->status == 401);
  auto r = server.client("a1").Get("/api/exercises");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type") == "application/json");
}

TEST_CASE("student check flow over http") {
  Server server;
  auto student = server.client("a1");

  auto bad = student.Post("/api/exercises/shop/checks", "{not json", "application/json");
  CHECK(bad->status == 400);
  CHECK(body_of(bad)["error"] == "PARSE_FAILED");
  CHECK(body_of(bad)["parseError"]["code"] == "MALFORMED_INPUT");

  CHECK(student.Post("/api/exercises/none/checks", "{}", "application/json")->status == 404);
  CHECK(student.Get("/api/exercises/shop/solutions")->status == 403);

  auto partial = student.Post("/api/exercises/shop/checks", fx::shop_violations()[6].diagram.text(), "application/json");
  REQUIRE(partial->status == 200);
  auto partial_body = body_of(partial);
  CHECK(partial_body["completion"].is_null());
  CHECK(partial_body["obtainableXp"] == 95);
  CHECK(partial_body["baseXp"] == 100);
  CHECK(partial_body["report"]["semantic"][0]["rule"] == "SEM_MISSING_RELATION");

  auto done = student.Post("/api/exercises/shop/checks", fx::shop_diagram().text(), "application/json");
  REQUIRE(done->status == 200);
  auto done_body = body_of(done);
  CHECK(done_body["completion"]["awardedXp"] == 125);
  CHECK(done_body["totalXp"] == 125);
  CHECK(done_body["level"] == 2);

  auto again = student.Post("/api/exercises/shop/checks", fx::shop_diagram().text(), "application/json");
  CHECK(again->status == 409);
  CHECK(body_of(again)["error"] == "ALREADY_COMPLETED");

  auto solutions = student.Get("/api/exercises/shop/solutions");
  REQUIRE(solutions->status == 200);
  CHECK(body_of(solutions)["solutions"].size() == 1);

  auto list = body_of(student.Get("/api/exercises"));
  REQUIRE(list["exercises"].size() == 1);
  CHECK(list["exercises"][0]["completed"] == true);
  CHECK(body_of(server.client("b2").Get("/api/exercises"))["exercises"][0]["completed"] == false);

  auto detail = body_of(student.Get("/api/exercises/shop"));
  CHECK(detail["exerciseId"] == "shop");
  CHECK(detail["leaderboard"][0]["studentId"] == "s1");
  CHECK(student.Get("/api/exercises/zzz")->status == 404);

  auto profile = body_of(student.Get("/api/profile"));
  CHECK(profile["totalXp"] == 125);
  CHECK(profile["moodLabel"] == "neutral");
  CHECK(profile["nextLevelXp"] == 250);
}

TEST_CASE("teacher routes") {
  Server server;
  auto teacher = server.client("tt");
  auto student = server.client("a1");

  CHECK(teacher.Post("/api/exercises/shop/checks", fx::shop_diagram().text(), "application/json")->status == 403);
  CHECK(body_of(teacher.Get("/api/exercises/shop/solutions"))["solutions"].size() == 1);
  CHECK(body_of(teacher.Get("/api/profile"))["isTeacher"] == true);

  const std::string lib = serialize_exercise(fx::exercise("lib", {fx::library_reference()}));
  CHECK(student.Post("/api/exercises", lib, "application/json")->status == 403);
  CHECK(teacher.Post("/api/exercises", lib, "application/json")->status == 201);
  CHECK(teacher.Put("/api/exercises/lib", lib, "application/json")->status == 200);
  CHECK(teacher.Put("/api/exercises/other", lib, "application/json")->status == 400);
  auto invalid = teacher.Post("/api/exercises", "{\"exerciseId\":\"x\"}", "application/json");
  CHECK(invalid->status == 400);
  CHECK(body_of(invalid)["error"] == "INVALID_EXERCISE");
  CHECK_FALSE(body_of(invalid)["issues"].empty());
  CHECK(body_of(student.Get("/api/exercises"))["exercises"].size() == 2);

  CourseFile course = server.service->course();
  course.users.push_back({"s3", "Cy", "c3", false});
  CHECK(student.Put("/api/course/config", course_file_text(course), "application/json")->status == 403);
  auto updated = teacher.Put("/api/course/config", course_file_text(course), "application/json");
  REQUIRE(updated->status == 200);
  CHECK(body_of(updated)["users"] == 4);
  CHECK(server.client("c3").Get("/api/profile")->status == 200);
  auto rejected = teacher.Put("/api/course/config", "{\"deductionFraction\":3}", "application/json");
  CHECK(rejected->status == 400);
  CHECK(body_of(rejected)["error"] == "INVALID_CONFIG");
}

TEST_CASE("avatar and leaderboards over http") {
  Server server;
  auto student = server.client("a1");
  auto equipped = student.Put("/api/profile/avatar", R"({"equippedProps":["cap"]})", "application/json");
  REQUIRE(equipped->status == 200);
  CHECK(body_of(equipped)["equippedProps"] == json::array({"cap"}));
  auto not_owned = student.Put("/api/profile/avatar", R"({"equippedProps":["crown"]})", "application/json");
  CHECK(not_owned->status == 400);
  CHECK(body_of(not_owned)["error"] == "PROP_NOT_OWNED");
  CHECK(student.Put("/api/profile/avatar", "[1]", "application/json")->status == 400);
  CHECK(student.Put("/api/profile/avatar", R"({"equippedProps":[1]})", "application/json")->status == 400);

  REQUIRE(server.client("b2").Post("/api/exercises/shop/checks", fx::shop_diagram().text(), "application/json")->status == 200);
  auto xp = body_of(student.Get("/api/leaderboards/xp"))["entries"];
  REQUIRE(xp.size() == 2);
  CHECK(xp[0]["studentId"] == "s2");
  CHECK(xp[1]["equippedProps"] == json::array({"cap"}));
  CHECK(body_of(student.Get("/api/leaderboards/completed"))["entries"][0]["score"] == 1.0);
  CHECK(body_of(student.Get("/api/leaderboards/exercise/shop"))["entries"].size() == 1);
  CHECK(student.Get("/api/leaderboards/exercise/zzz")->status == 404);
}
