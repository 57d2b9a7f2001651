#pragma once

// Hand-built diagrams and reference solutions shared by unit and
// acceptance tests.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umlk/evaluator.hpp"
#include "umlk/model.hpp"

namespace fx {

/// Writes diagram documents in the on-disk map form.
class Doc {
 public:
  Doc();
  Doc& actor(const std::string& id, const std::string& name, std::optional<std::string> owner = std::nullopt);
  Doc& usecase(const std::string& id, const std::string& name, std::optional<std::string> owner);
  Doc& system(const std::string& id, const std::string& name);
  Doc& assoc(const std::string& id, const std::string& source, const std::string& target);
  Doc& include(const std::string& id, const std::string& source, const std::string& target);
  Doc& extend(const std::string& id, const std::string& source, const std::string& target);
  Doc& generalization(const std::string& id, const std::string& child, const std::string& parent);
  Doc& remove(const std::string& id);
  Doc& set(const std::string& id, const std::string& field, nlohmann::ordered_json value);

  std::string text() const;
  /// Parses text(); throws if the parser rejects it.
  umlk::DiagramDocument parse() const;

 private:
  Doc& element(const std::string& id, const char* type, const std::string& name, std::optional<std::string> owner);
  Doc& relation(const std::string& id, const char* type, const std::string& source, const std::string& target);
  nlohmann::ordered_json root_;
};

class Ref {
 public:
  explicit Ref(std::string label = "main") { solution_.label = std::move(label); }
  Ref& actor(const std::string& refId, const std::string& name, std::vector<std::string> alternatives = {});
  Ref& usecase(const std::string& refId, const std::string& name, const std::string& owner,
               std::vector<std::string> alternatives = {});
  Ref& system(const std::string& refId, const std::string& name, bool external = false);
  Ref& performs(const std::string& actor, const std::string& useCase, bool supporting = false);
  Ref& inherits(const std::string& child, const std::string& parent);
  Ref& includes(const std::string& source, const std::string& target);
  Ref& extends(const std::string& source, const std::string& target);
  Ref& forbid(const std::string& name);
  const umlk::ReferenceSolution& get() const { return solution_; }
  operator const umlk::ReferenceSolution&() const { return solution_; }

 private:
  umlk::ReferenceSolution solution_;
};

umlk::ExerciseSpec exercise(const std::string& id, std::vector<umlk::ReferenceSolution> solutions, umlk::Xp baseXp = 100);

// Three reference solutions with a clean transcription each.
umlk::ReferenceSolution shop_reference();
Doc shop_diagram();
umlk::ReferenceSolution library_reference();
Doc library_diagram();
umlk::ReferenceSolution clinic_reference();
Doc clinic_diagram();

/// Minimal three-element diagram: system Shop, use case Buy in it, actor
/// Customer, one association.
Doc minimal_diagram();

struct Violation {
  std::string name;
  umlk::Rule rule;
  Doc diagram;
};
/// Copies of shop_diagram() that each break exactly one rule.
std::vector<Violation> shop_violations();

std::vector<umlk::Rule> rules_of(const umlk::EvaluationReport& report);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fx
