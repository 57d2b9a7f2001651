#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>

#include <unistd.h>

#include "umlk/parser.hpp"

namespace fx {

using Json = nlohmann::ordered_json;

Doc::Doc() {
  root_ = Json{{"version", "3.0.0"}, {"type", "UseCaseDiagram"}, {"elements", Json::object()},
               {"relationships", Json::object()}};
}

Doc& Doc::element(const std::string& id, const char* type, const std::string& name, std::optional<std::string> owner) {
  root_["elements"][id] = Json{{"id", id},
                               {"name", name},
                               {"type", type},
                               {"owner", owner ? Json(*owner) : Json(nullptr)},
                               {"bounds", {{"x", 0}, {"y", 0}, {"width", 120}, {"height", 40}}}};
  return *this;
}

Doc& Doc::relation(const std::string& id, const char* type, const std::string& source, const std::string& target) {
  root_["relationships"][id] = Json{{"id", id},
                                    {"name", ""},
                                    {"type", type},
                                    {"source", {{"element", source}, {"direction", "Right"}}},
                                    {"target", {{"element", target}, {"direction", "Left"}}}};
  return *this;
}

Doc& Doc::actor(const std::string& id, const std::string& name, std::optional<std::string> owner) {
  return element(id, "UseCaseActor", name, std::move(owner));
}
Doc& Doc::usecase(const std::string& id, const std::string& name, std::optional<std::string> owner) {
  return element(id, "UseCase", name, std::move(owner));
}
Doc& Doc::system(const std::string& id, const std::string& name) { return element(id, "UseCaseSystem", name, {}); }
Doc& Doc::assoc(const std::string& id, const std::string& s, const std::string& t) {
  return relation(id, "UseCaseAssociation", s, t);
}
Doc& Doc::include(const std::string& id, const std::string& s, const std::string& t) {
  return relation(id, "UseCaseInclude", s, t);
}
Doc& Doc::extend(const std::string& id, const std::string& s, const std::string& t) {
  return relation(id, "UseCaseExtend", s, t);
}
Doc& Doc::generalization(const std::string& id, const std::string& child, const std::string& parent) {
  return relation(id, "UseCaseGeneralization", child, parent);
}

Doc& Doc::remove(const std::string& id) {
  root_["elements"].erase(id);
  root_["relationships"].erase(id);
  return *this;
}

Doc& Doc::set(const std::string& id, const std::string& field, Json value) {
  if (root_["elements"].contains(id)) {
    root_["elements"][id][field] = std::move(value);
  } else {
    root_["relationships"][id][field] = std::move(value);
  }
  return *this;
}

std::string Doc::text() const { return root_.dump(); }

umlk::DiagramDocument Doc::parse() const {
  auto doc = umlk::parse_document(text());
  if (!doc) throw std::runtime_error("fixture rejected: " + doc.error().detail);
  return std::move(doc).value();
}

Ref& Ref::actor(const std::string& refId, const std::string& name, std::vector<std::string> alternatives) {
  solution_.elements.push_back({refId, umlk::ElementKind::Actor, name, std::move(alternatives), false, std::nullopt});
  return *this;
}
Ref& Ref::usecase(const std::string& refId, const std::string& name, const std::string& owner,
                  std::vector<std::string> alternatives) {
  solution_.elements.push_back({refId, umlk::ElementKind::UseCase, name, std::move(alternatives), false, owner});
  return *this;
}
Ref& Ref::system(const std::string& refId, const std::string& name, bool external) {
  solution_.elements.push_back({refId, umlk::ElementKind::System, name, {}, external, std::nullopt});
  return *this;
}
Ref& Ref::performs(const std::string& actor, const std::string& useCase, bool supporting) {
  solution_.relations.push_back(umlk::ActorUseCase{actor, useCase, supporting});
  return *this;
}
Ref& Ref::inherits(const std::string& child, const std::string& parent) {
  solution_.relations.push_back(umlk::ActorActor{child, parent});
  return *this;
}
Ref& Ref::includes(const std::string& source, const std::string& target) {
  solution_.relations.push_back(umlk::UseCaseUseCase{source, target, umlk::UcFlavor::Include});
  return *this;
}
Ref& Ref::extends(const std::string& source, const std::string& target) {
  solution_.relations.push_back(umlk::UseCaseUseCase{source, target, umlk::UcFlavor::Extend});
  return *this;
}
Ref& Ref::forbid(const std::string& name) {
  solution_.forbiddenNames.push_back(name);
  return *this;
}

umlk::ExerciseSpec exercise(const std::string& id, std::vector<umlk::ReferenceSolution> solutions, umlk::Xp baseXp) {
  umlk::ExerciseSpec spec;
  spec.exerciseId = id;
  spec.title = "Exercise " + id;
  spec.statement = "Model the scenario.";
  spec.baseXp = baseXp;
  spec.boss = {"dragon", "Your diagram is no match for me!"};
  spec.solutions = std::move(solutions);
  return spec;
}

umlk::ReferenceSolution shop_reference() {
  return Ref("shop")
      .system("shop", "Online Shop")
      .system("bank", "Bank", true)
      .actor("customer", "Customer", {"Client"})
      .actor("member", "Member")
      .usecase("browse", "Browse Catalog", "shop")
      .usecase("order", "Place Order", "shop")
      .usecase("pay", "Pay", "shop", {"Make Payment"})
      .usecase("coupon", "Apply Coupon", "shop")
      .performs("customer", "browse")
      .performs("customer", "order")
      .performs("bank", "pay", true)
      .inherits("member", "customer")
      .includes("order", "pay")
      .extends("coupon", "order")
      .forbid("System")
      .get();
}

Doc shop_diagram() {
  return Doc()
      .system("s1", "Online Shop")
      .system("s2", "Bank")
      .actor("a1", "Customer")
      .actor("a2", "Member")
      .usecase("u1", "Browse Catalog", "s1")
      .usecase("u2", "Place Order", "s1")
      .usecase("u3", "Make payment", "s1")
      .usecase("u4", "Apply Coupon", "s1")
      .assoc("r1", "a1", "u1")
      .assoc("r2", "u2", "a1")
      .assoc("r3", "s2", "u3")
      .generalization("r4", "a2", "a1")
      .include("r5", "u2", "u3")
      .extend("r6", "u4", "u2");
}

umlk::ReferenceSolution library_reference() {
  return Ref("library")
      .system("lib", "Library")
      .actor("reader", "Reader", {"Borrower"})
      .actor("librarian", "Librarian")
      .usecase("search", "Search Book", "lib")
      .usecase("borrow", "Borrow Book", "lib")
      .usecase("return", "Return Book", "lib")
      .usecase("fine", "Pay Fine", "lib")
      .usecase("login", "Log In", "lib", {"Login", "Sign In"})
      .performs("reader", "search")
      .performs("reader", "borrow")
      .performs("reader", "return")
      .performs("librarian", "borrow")
      .includes("borrow", "login")
      .extends("fine", "return")
      .get();
}

Doc library_diagram() {
  return Doc()
      .system("sys", "library")
      .actor("A", "Borrower")
      .actor("B", "LIBRARIAN")
      .usecase("c", "Search book", "sys")
      .usecase("d", "Borrow Books", "sys")
      .usecase("e", "Return Book", "sys")
      .usecase("f", "Pay Fine", "sys")
      .usecase("g", "Sign in", "sys")
      .assoc("x1", "A", "c")
      .assoc("x2", "A", "d")
      .assoc("x3", "e", "A")
      .assoc("x4", "B", "d")
      .include("x5", "d", "g")
      .extend("x6", "f", "e");
}

umlk::ReferenceSolution clinic_reference() {
  return Ref("clinic")
      .system("clinic", "Clinic")
      .system("insurer", "Insurance Company", true)
      .actor("patient", "Patient")
      .actor("staff", "Staff")
      .actor("doctor", "Doctor")
      .actor("nurse", "Nurse")
      .usecase("book", "Book Appointment", "clinic")
      .usecase("treat", "Treat Patient", "clinic")
      .usecase("bill", "Bill Insurance", "clinic")
      .inherits("doctor", "staff")
      .inherits("nurse", "staff")
      .performs("patient", "book")
      .performs("doctor", "treat")
      .performs("insurer", "bill", true)
      .includes("treat", "bill")
      .get();
}

Doc clinic_diagram() {
  return Doc()
      .system("e01", "Clinic")
      .system("e02", "Insurance company")
      .actor("e03", "Patient")
      .actor("e04", "Staff")
      .actor("e05", "Doctor")
      .actor("e06", "Nurse")
      .usecase("e07", "Book Appointment", "e01")
      .usecase("e08", "Treat Patient", "e01")
      .usecase("e09", "Bill Insurance", "e01")
      .generalization("e10", "e05", "e04")
      .generalization("e11", "e06", "e04")
      .assoc("e12", "e03", "e07")
      .assoc("e13", "e05", "e08")
      .assoc("e14", "e09", "e02")
      .include("e15", "e08", "e09");
}

Doc minimal_diagram() {
  return Doc().system("shop", "Shop").usecase("buy", "Buy", "shop").actor("customer", "Customer").assoc(
      "r1", "customer", "buy");
}

std::vector<Violation> shop_violations() {
  using umlk::Rule;
  std::vector<Violation> out;
  out.push_back({"unnamed extra actor", Rule::SynMissingName, shop_diagram().actor("a3", "   ")});
  out.push_back({"second actor named Member", Rule::SynDuplicateName, shop_diagram().actor("a3", "member ")});
  out.push_back({"association between two actors", Rule::SynInvalidAssociation, shop_diagram().assoc("r7", "a2", "a1")});
  out.push_back({"actor inside the shop", Rule::SynActorInSystem, shop_diagram().set("a2", "owner", "s1")});
  out.push_back({"use case outside every system", Rule::SynUseCaseOutsideSystem,
                 shop_diagram().set("u4", "owner", nullptr)});
  out.push_back({"member actor missing", Rule::SemMissingElement, shop_diagram().remove("a2").remove("r4")});
  out.push_back({"customer does not browse", Rule::SemMissingRelation, shop_diagram().remove("r1")});
  out.push_back({"include instead of extend", Rule::SemWrongUcRelationType, shop_diagram().include("r6", "u4", "u2")});
  out.push_back({"include reversed", Rule::SemWrongUcRelationDirection, shop_diagram().include("r5", "u3", "u2")});
  out.push_back({"browse in another system", Rule::SemWrongSystem,
                 shop_diagram().system("s3", "Warehouse").set("u1", "owner", "s3")});
  out.push_back({"payment inside the external bank", Rule::SemWrongSystem, shop_diagram().set("u3", "owner", "s2")});
  out.push_back({"actor named like a forbidden word", Rule::SemForbiddenName, shop_diagram().actor("a3", "Systems")});
  out.push_back({"member also browses", Rule::SemExtraRelation, shop_diagram().assoc("r7", "a2", "u1")});
  out.push_back({"bank also helps ordering", Rule::SemExtraRelation, shop_diagram().assoc("r7", "u2", "s2")});
  return out;
}

std::vector<umlk::Rule> rules_of(const umlk::EvaluationReport& report) {
  std::vector<umlk::Rule> rules;
  for (const auto& d : report.syntactic) rules.push_back(d.rule);
  for (const auto& d : report.semantic) rules.push_back(d.rule);
  return rules;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device device;
  path_ = std::filesystem::temp_directory_path() /
          ("umlk-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
           std::to_string(device() % 100000));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace fx
