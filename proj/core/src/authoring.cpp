#include "umlk/authoring.hpp"

#include <nlohmann/json.hpp>

namespace umlk {

namespace {

using Json = nlohmann::ordered_json;

struct FileError {
  std::string detail;
};

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw FileError{where + ": " + what}; }

const Json& field(const Json& object, const char* name, const std::string& where) {
  auto it = object.find(name);
  if (it == object.end()) bad(where, std::string("missing \"") + name + "\"");
  return *it;
}

std::string string_field(const Json& object, const char* name, const std::string& where) {
  const Json& value = field(object, name, where);
  if (!value.is_string()) bad(where, std::string("\"") + name + "\" must be a string");
  return value.get<std::string>();
}

std::vector<std::string> string_list(const Json& object, const char* name, const std::string& where) {
  auto it = object.find(name);
  if (it == object.end() || it->is_null()) return {};
  if (!it->is_array()) bad(where, std::string("\"") + name + "\" must be a list of strings");
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string()) bad(where, std::string("\"") + name + "\" must be a list of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

const Json& object_field(const Json& object, const char* name, const std::string& where) {
  const Json& value = field(object, name, where);
  if (!value.is_object()) bad(where, std::string("\"") + name + "\" must be an object");
  return value;
}

RefElement read_element(const Json& record, const std::string& where) {
  if (!record.is_object()) bad(where, "element must be an object");
  RefElement element;
  element.refId = string_field(record, "refId", where);
  const std::string kind = string_field(record, "kind", where);
  const auto parsed = element_kind_from_string(kind);
  if (!parsed) bad(where, "unknown element kind \"" + kind + "\"");
  element.kind = *parsed;
  element.name = string_field(record, "name", where);
  element.alternatives = string_list(record, "alternatives", where);
  if (auto it = record.find("external"); it != record.end() && !it->is_null()) {
    if (!it->is_boolean()) bad(where, "\"external\" must be a boolean");
    element.external = it->get<bool>();
  }
  if (auto it = record.find("owningSystem"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) bad(where, "\"owningSystem\" must be a refId or null");
    element.owningSystem = it->get<std::string>();
  }
  return element;
}

RefRelation read_relation(const Json& record, const std::string& where) {
  if (!record.is_object()) bad(where, "relation must be an object");
  const std::string kind = string_field(record, "kind", where);
  if (kind == "ActorUseCase") {
    ActorUseCase relation{string_field(record, "actor", where), string_field(record, "useCase", where), false};
    if (auto it = record.find("supporting"); it != record.end() && !it->is_null()) {
      if (!it->is_boolean()) bad(where, "\"supporting\" must be a boolean");
      relation.supporting = it->get<bool>();
    }
    return relation;
  }
  if (kind == "ActorActor") {
    return ActorActor{string_field(record, "child", where), string_field(record, "parent", where)};
  }
  if (kind == "UseCaseUseCase") {
    const std::string flavor = string_field(record, "flavor", where);
    if (flavor != "Include" && flavor != "Extend") bad(where, "flavor must be \"Include\" or \"Extend\"");
    return UseCaseUseCase{string_field(record, "source", where), string_field(record, "target", where),
                          flavor == "Include" ? UcFlavor::Include : UcFlavor::Extend};
  }
  bad(where, "unknown relation kind \"" + kind + "\"");
}

ReferenceSolution read_solution(const Json& record, const std::string& where) {
  if (!record.is_object()) bad(where, "solution must be an object");
  ReferenceSolution solution;
  if (auto it = record.find("label"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) bad(where, "\"label\" must be a string");
    solution.label = it->get<std::string>();
  }
  solution.forbiddenNames = string_list(record, "forbiddenNames", where);
  const Json& elements = field(record, "elements", where);
  if (!elements.is_array()) bad(where, "\"elements\" must be a list");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    solution.elements.push_back(read_element(elements[i], where + ".elements[" + std::to_string(i) + "]"));
  }
  if (auto it = record.find("relations"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) bad(where, "\"relations\" must be a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      solution.relations.push_back(read_relation((*it)[i], where + ".relations[" + std::to_string(i) + "]"));
    }
  }
  return solution;
}

ExerciseSpec read_exercise(const Json& root) {
  if (!root.is_object()) bad("exercise", "top level must be an object");
  ExerciseSpec exercise;
  exercise.exerciseId = string_field(root, "exerciseId", "exercise");
  if (exercise.exerciseId.empty()) bad("exercise", "\"exerciseId\" must not be empty");
  exercise.title = string_field(root, "title", "exercise");
  exercise.statement = string_field(root, "statement", "exercise");
  const Json& base = field(root, "baseXp", "exercise");
  if (!base.is_number_integer()) bad("exercise", "\"baseXp\" must be an integer");
  exercise.baseXp = base.get<Xp>();
  const Json& boss = object_field(root, "boss", "exercise");
  exercise.boss.iconId = string_field(boss, "iconId", "exercise.boss");
  exercise.boss.taunt = string_field(boss, "taunt", "exercise.boss");
  const Json& solutions = field(root, "solutions", "exercise");
  if (!solutions.is_array()) bad("exercise", "\"solutions\" must be a list");
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    exercise.solutions.push_back(read_solution(solutions[i], "solutions[" + std::to_string(i) + "]"));
  }
  return exercise;
}

Json element_json(const RefElement& e) {
  Json j = Json::object();
  j["refId"] = e.refId;
  j["kind"] = to_string(e.kind);
  j["name"] = e.name;
  j["alternatives"] = e.alternatives;
  j["external"] = e.external;
  j["owningSystem"] = e.owningSystem ? Json(*e.owningSystem) : Json(nullptr);
  return j;
}

Json relation_json(const RefRelation& relation) {
  Json j = Json::object();
  if (const auto* r = std::get_if<ActorUseCase>(&relation)) {
    j["kind"] = "ActorUseCase";
    j["actor"] = r->actor;
    j["useCase"] = r->useCase;
    j["supporting"] = r->supporting;
  } else if (const auto* r = std::get_if<ActorActor>(&relation)) {
    j["kind"] = "ActorActor";
    j["child"] = r->child;
    j["parent"] = r->parent;
  } else {
    const auto& u = std::get<UseCaseUseCase>(relation);
    j["kind"] = "UseCaseUseCase";
    j["source"] = u.source;
    j["target"] = u.target;
    j["flavor"] = to_string(u.flavor);
  }
  return j;
}

}  // namespace

Result<ExerciseSpec, std::vector<AuthoringIssue>> load_exercise(std::string_view input) {
  const Json root = Json::parse(input.begin(), input.end(), nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return std::vector<AuthoringIssue>{{IssueCode::MalformedInput, "", "exercise file is not valid JSON"}};
  }
  ExerciseSpec exercise;
  try {
    exercise = read_exercise(root);
  } catch (const FileError& e) {
    return std::vector<AuthoringIssue>{{IssueCode::MalformedInput, "", e.detail}};
  } catch (const std::exception& e) {
    return std::vector<AuthoringIssue>{{IssueCode::MalformedInput, "", e.what()}};
  }
  auto issues = validate_exercise(exercise);
  if (!issues.empty()) return issues;
  return exercise;
}

std::string serialize_exercise(const ExerciseSpec& exercise) {
  Json root = Json::object();
  root["exerciseId"] = exercise.exerciseId;
  root["title"] = exercise.title;
  root["statement"] = exercise.statement;
  root["baseXp"] = exercise.baseXp;
  root["boss"] = Json{{"iconId", exercise.boss.iconId}, {"taunt", exercise.boss.taunt}};
  Json solutions = Json::array();
  for (const auto& solution : exercise.solutions) {
    Json s = Json::object();
    s["label"] = solution.label;
    s["forbiddenNames"] = solution.forbiddenNames;
    Json elements = Json::array();
    for (const auto& element : solution.elements) elements.push_back(element_json(element));
    s["elements"] = std::move(elements);
    Json relations = Json::array();
    for (const auto& relation : solution.relations) relations.push_back(relation_json(relation));
    s["relations"] = std::move(relations);
    solutions.push_back(std::move(s));
  }
  root["solutions"] = std::move(solutions);
  return root.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

Result<ReferenceSolution, std::vector<AuthoringIssue>> derive_reference_from_diagram(const DiagramDocument& doc) {
  ReferenceSolution solution;
  solution.label = "drawn";
  std::vector<AuthoringIssue> issues;

  for (const auto& element : doc.elements) {
    RefElement ref;
    ref.refId = element.id;
    ref.kind = element.kind;
    ref.name = element.name;
    // Containment only carries meaning for use cases.
    if (element.kind == ElementKind::UseCase) ref.owningSystem = element.owner;
    solution.elements.push_back(std::move(ref));
  }

  for (const auto& relation : doc.relations) {
    const DiagramElement* source = doc.find_element(relation.source.element);
    const DiagramElement* target = doc.find_element(relation.target.element);
    if (source == nullptr || target == nullptr) {
      issues.push_back({IssueCode::UnknownRef, relation.id, "relationship endpoint does not exist"});
      continue;
    }
    switch (relation.kind) {
      case RelationKind::Association: {
        const DiagramElement* use_case = target->kind == ElementKind::UseCase ? target : source;
        const DiagramElement* participant = use_case == target ? source : target;
        if (use_case->kind != ElementKind::UseCase || participant->kind == ElementKind::UseCase) {
          issues.push_back({IssueCode::WrongRefKind, relation.id,
                            "association must connect a use case with an actor or system"});
          continue;
        }
        // Systems can only take part as supporting actors.
        solution.relations.push_back(
            ActorUseCase{participant->id, use_case->id, participant->kind == ElementKind::System});
        break;
      }
      case RelationKind::Generalization:
        solution.relations.push_back(ActorActor{source->id, target->id});
        break;
      case RelationKind::Include:
      case RelationKind::Extend:
        solution.relations.push_back(UseCaseUseCase{
            source->id, target->id, relation.kind == RelationKind::Include ? UcFlavor::Include : UcFlavor::Extend});
        break;
    }
  }

  for (auto& issue : validate_reference(solution)) issues.push_back(std::move(issue));
  if (!issues.empty()) return issues;
  return solution;
}

}  // namespace umlk
