#include "umlk/parser.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace umlk {
namespace {
using Json = nlohmann::ordered_json;
}  // namespace

std::string_view to_string(ParseErrorCode code) {
  switch (code) {
    case ParseErrorCode::MalformedInput: return "MALFORMED_INPUT";
    case ParseErrorCode::UnknownNotation: return "UNKNOWN_NOTATION";
    case ParseErrorCode::UnknownElementKind: return "UNKNOWN_ELEMENT_KIND";
    case ParseErrorCode::UnknownRelationKind: return "UNKNOWN_RELATION_KIND";
    case ParseErrorCode::DanglingReference: return "DANGLING_REFERENCE";
    case ParseErrorCode::DuplicateId: return "DUPLICATE_ID";
    case ParseErrorCode::SelfRelation: return "SELF_RELATION";
  }
  return "?";
}

namespace {

constexpr std::string_view kNotation = "UseCaseDiagram";

struct Failure {
  ParseError error;
};

[[noreturn]] void fail(ParseErrorCode code, std::string detail, std::optional<std::string> location = {}) {
  throw Failure{ParseError{code, std::move(detail), std::move(location)}};
}

std::optional<ElementKind> element_kind(std::string_view type) {
  if (type == "UseCaseActor") return ElementKind::Actor;
  if (type == "UseCase") return ElementKind::UseCase;
  if (type == "UseCaseSystem") return ElementKind::System;
  return std::nullopt;
}

std::string_view element_type_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Actor: return "UseCaseActor";
    case ElementKind::UseCase: return "UseCase";
    case ElementKind::System: return "UseCaseSystem";
  }
  return "";
}

std::optional<RelationKind> relation_kind(std::string_view type) {
  if (type == "UseCaseAssociation") return RelationKind::Association;
  if (type == "UseCaseInclude") return RelationKind::Include;
  if (type == "UseCaseExtend") return RelationKind::Extend;
  if (type == "UseCaseGeneralization") return RelationKind::Generalization;
  return std::nullopt;
}

std::string_view relation_type_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Association: return "UseCaseAssociation";
    case RelationKind::Include: return "UseCaseInclude";
    case RelationKind::Extend: return "UseCaseExtend";
    case RelationKind::Generalization: return "UseCaseGeneralization";
  }
  return "";
}

std::string dump(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

// Parses while rejecting duplicate object keys, which the DOM builder would
// otherwise silently collapse.
Json parse_strict(std::string_view input) {
  struct Frame {
    std::set<std::string> keys;
    std::string current_key;
  };
  std::vector<Frame> stack;
  std::optional<ParseError> duplicate;

  auto callback = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        stack.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case Json::parse_event_t::key: {
        if (stack.empty() || duplicate) break;
        auto key = parsed.get<std::string>();
        Frame& frame = stack.back();
        if (!frame.keys.insert(key).second) {
          const bool id_map = stack.size() == 2 && (stack[0].current_key == "elements" ||
                                                    stack[0].current_key == "relationships");
          duplicate = ParseError{id_map ? ParseErrorCode::DuplicateId : ParseErrorCode::MalformedInput,
                                 "duplicate key \"" + key + "\"", key};
        }
        frame.current_key = std::move(key);
        break;
      }
      default:
        break;
    }
    return true;
  };

  Json root = Json::parse(input.begin(), input.end(), callback, /*allow_exceptions=*/false);
  if (root.is_discarded()) fail(ParseErrorCode::MalformedInput, "input is not valid JSON");
  if (duplicate) throw Failure{*duplicate};
  return root;
}

std::string require_string(const Json& record, const char* field, const std::string& where) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    fail(ParseErrorCode::MalformedInput, where + ": field \"" + field + "\" must be a string", where);
  }
  return it->get<std::string>();
}

OpaqueFields collect_extra(const Json& record, std::initializer_list<std::string_view> known) {
  OpaqueFields extra;
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) != known.end()) continue;
    extra.emplace_back(it.key(), dump(it.value()));
  }
  return extra;
}

// Records keyed by their map key (or array position), sorted by key so the
// scan order is canonical.
std::vector<std::pair<std::string, const Json*>> records_of(const Json& root, const char* field) {
  std::vector<std::pair<std::string, const Json*>> records;
  auto it = root.find(field);
  if (it == root.end() || it->is_null()) return records;
  if (it->is_object()) {
    for (auto entry = it->begin(); entry != it->end(); ++entry) records.emplace_back(entry.key(), &entry.value());
  } else if (it->is_array()) {
    // Older exports use arrays of records; key them by their id field.
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& record = (*it)[i];
      std::string key = record.is_object() && record.contains("id") && record["id"].is_string()
                            ? record["id"].get<std::string>()
                            : std::string(field) + "[" + std::to_string(i) + "]";
      records.emplace_back(std::move(key), &record);
    }
  } else {
    fail(ParseErrorCode::MalformedInput, std::string("\"") + field + "\" must be an object");
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return records;
}

DiagramElement read_element(const std::string& key, const Json& record) {
  if (!record.is_object()) fail(ParseErrorCode::MalformedInput, "element " + key + " is not an object", key);
  DiagramElement element;
  element.id = require_string(record, "id", key);
  if (element.id != key) fail(ParseErrorCode::MalformedInput, "element key " + key + " differs from its id", key);
  const std::string type = require_string(record, "type", element.id);
  const auto kind = element_kind(type);
  if (!kind) fail(ParseErrorCode::UnknownElementKind, "element type \"" + type + "\" is not part of the use case notation", element.id);
  element.kind = *kind;

  if (auto it = record.find("name"); it != record.end()) {
    if (!it->is_string()) fail(ParseErrorCode::MalformedInput, element.id + ": \"name\" must be a string", element.id);
    element.name = it->get<std::string>();
  }
  if (auto it = record.find("owner"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) fail(ParseErrorCode::MalformedInput, element.id + ": \"owner\" must be a string or null", element.id);
    element.owner = it->get<std::string>();
  }
  element.extra = collect_extra(record, {"id", "type", "name", "owner"});
  return element;
}

RelationEnd read_end(const Json& record, const char* field, const std::string& id) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_object()) {
    fail(ParseErrorCode::MalformedInput, id + ": \"" + field + "\" must be an object", id);
  }
  RelationEnd end;
  end.element = require_string(*it, "element", id);
  end.extra = collect_extra(*it, {"element"});
  return end;
}

DiagramRelation read_relation(const std::string& key, const Json& record) {
  if (!record.is_object()) fail(ParseErrorCode::MalformedInput, "relationship " + key + " is not an object", key);
  DiagramRelation relation;
  relation.id = require_string(record, "id", key);
  if (relation.id != key) fail(ParseErrorCode::MalformedInput, "relationship key " + key + " differs from its id", key);
  const std::string type = require_string(record, "type", relation.id);
  const auto kind = relation_kind(type);
  if (!kind) fail(ParseErrorCode::UnknownRelationKind, "relationship type \"" + type + "\" is not part of the use case notation", relation.id);
  relation.kind = *kind;
  relation.source = read_end(record, "source", relation.id);
  relation.target = read_end(record, "target", relation.id);
  relation.extra = collect_extra(record, {"id", "type", "source", "target"});
  return relation;
}

DiagramDocument build(const Json& root) {
  if (!root.is_object()) fail(ParseErrorCode::MalformedInput, "top level must be an object");

  DiagramDocument doc;
  if (auto it = root.find("version"); it != root.end()) {
    if (!it->is_string()) fail(ParseErrorCode::MalformedInput, "\"version\" must be a string");
    doc.version = it->get<std::string>();
  }
  doc.notation = require_string(root, "type", "document");
  if (doc.notation != kNotation) {
    fail(ParseErrorCode::UnknownNotation, "diagram type \"" + doc.notation + "\" is not UseCaseDiagram");
  }

  for (const auto& [key, record] : records_of(root, "elements")) doc.elements.push_back(read_element(key, *record));
  std::sort(doc.elements.begin(), doc.elements.end(),
            [](const DiagramElement& a, const DiagramElement& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < doc.elements.size(); ++i) {
    if (doc.elements[i].id == doc.elements[i - 1].id) {
      fail(ParseErrorCode::DuplicateId, "element id used twice", doc.elements[i].id);
    }
  }
  for (const auto& element : doc.elements) {
    if (!element.owner) continue;
    const DiagramElement* owner = doc.find_element(*element.owner);
    if (owner == nullptr || owner == &element) {
      fail(ParseErrorCode::DanglingReference, "owner \"" + *element.owner + "\" does not exist", element.id);
    }
    if (owner->kind != ElementKind::System) {
      fail(ParseErrorCode::DanglingReference, "owner \"" + *element.owner + "\" is not a system", element.id);
    }
  }

  const auto relation_records = records_of(root, "relationships");
  std::vector<std::string> seen_relation_ids;
  for (const auto& [key, record] : relation_records) {
    DiagramRelation relation = read_relation(key, *record);
    if (doc.find_element(relation.id) != nullptr ||
        std::find(seen_relation_ids.begin(), seen_relation_ids.end(), relation.id) != seen_relation_ids.end()) {
      fail(ParseErrorCode::DuplicateId, "relationship id already in use", relation.id);
    }
    if (doc.find_element(relation.source.element) == nullptr) {
      fail(ParseErrorCode::DanglingReference, "source \"" + relation.source.element + "\" does not exist", relation.id);
    }
    if (doc.find_element(relation.target.element) == nullptr) {
      fail(ParseErrorCode::DanglingReference, "target \"" + relation.target.element + "\" does not exist", relation.id);
    }
    if (relation.source.element == relation.target.element) {
      fail(ParseErrorCode::SelfRelation, "relationship connects an element to itself", relation.id);
    }
    seen_relation_ids.push_back(relation.id);
    doc.relations.push_back(std::move(relation));
  }
  std::sort(doc.relations.begin(), doc.relations.end(),
            [](const DiagramRelation& a, const DiagramRelation& b) { return a.id < b.id; });

  doc.extra = collect_extra(root, {"version", "type", "elements", "relationships"});
  return doc;
}

void emit_extra(Json& record, const OpaqueFields& extra) {
  for (const auto& [key, text] : extra) record[key] = Json::parse(text);
}

}  // namespace

Result<DiagramDocument, ParseError> parse_document(std::string_view input) {
  try {
    return build(parse_strict(input));
  } catch (const Failure& failure) {
    return failure.error;
  } catch (const std::exception& e) {
    return ParseError{ParseErrorCode::MalformedInput, e.what(), std::nullopt};
  }
}

std::string serialize_document(const DiagramDocument& doc) {
  Json root = Json::object();
  root["version"] = doc.version;
  root["type"] = doc.notation;

  Json elements = Json::object();
  for (const auto& element : doc.elements) {
    Json record = Json::object();
    record["id"] = element.id;
    record["name"] = element.name;
    record["type"] = element_type_name(element.kind);
    record["owner"] = element.owner ? Json(*element.owner) : Json(nullptr);
    emit_extra(record, element.extra);
    elements[element.id] = std::move(record);
  }
  root["elements"] = std::move(elements);

  Json relationships = Json::object();
  for (const auto& relation : doc.relations) {
    Json record = Json::object();
    record["id"] = relation.id;
    record["type"] = relation_type_name(relation.kind);
    Json source = Json::object();
    source["element"] = relation.source.element;
    emit_extra(source, relation.source.extra);
    Json target = Json::object();
    target["element"] = relation.target.element;
    emit_extra(target, relation.target.extra);
    record["source"] = std::move(source);
    record["target"] = std::move(target);
    emit_extra(record, relation.extra);
    relationships[relation.id] = std::move(record);
  }
  root["relationships"] = std::move(relationships);

  emit_extra(root, doc.extra);
  return dump(root);
}

}  // namespace umlk
