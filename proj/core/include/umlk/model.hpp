#pragma once

// Domain types for use case diagrams: what a student draws (DiagramDocument)
// and what a teacher expects (ReferenceSolution / ExerciseSpec).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace umlk {

using Xp = std::int64_t;

enum class ElementKind { Actor, UseCase, System };
enum class RelationKind { Association, Include, Extend, Generalization };

std::string_view to_string(ElementKind kind);
std::string_view to_string(RelationKind kind);
std::optional<ElementKind> element_kind_from_string(std::string_view text);

/// Unrecognized record fields kept verbatim so documents round-trip.
/// Each entry is (key, compact JSON text of the value), in input order.
using OpaqueFields = std::vector<std::pair<std::string, std::string>>;

struct DiagramElement {
  std::string id;
  ElementKind kind = ElementKind::Actor;
  std::string name;
  std::optional<std::string> owner;
  OpaqueFields extra;

  bool operator==(const DiagramElement&) const = default;
};

struct RelationEnd {
  std::string element;
  OpaqueFields extra;

  bool operator==(const RelationEnd&) const = default;
};

struct DiagramRelation {
  std::string id;
  RelationKind kind = RelationKind::Association;
  RelationEnd source;
  RelationEnd target;
  OpaqueFields extra;

  bool operator==(const DiagramRelation&) const = default;
};

/// Elements and relations are kept in canonical order (ascending id).
struct DiagramDocument {
  std::string version;
  std::string notation = "UseCaseDiagram";
  std::vector<DiagramElement> elements;
  std::vector<DiagramRelation> relations;
  OpaqueFields extra;

  const DiagramElement* find_element(std::string_view id) const;

  bool operator==(const DiagramDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Reference solutions

struct RefElement {
  std::string refId;
  ElementKind kind = ElementKind::Actor;
  std::string name;
  std::vector<std::string> alternatives;
  bool external = false;                    // Systems only
  std::optional<std::string> owningSystem;  // UseCases only

  bool operator==(const RefElement&) const = default;
};

enum class UcFlavor { Include, Extend };
std::string_view to_string(UcFlavor flavor);

/// An actor (or a supporting external system) takes part in a use case.
struct ActorUseCase {
  std::string actor;
  std::string useCase;
  bool supporting = false;

  bool operator==(const ActorUseCase&) const = default;
};

/// Inheritance between two actors.
struct ActorActor {
  std::string child;
  std::string parent;

  bool operator==(const ActorActor&) const = default;
};

/// Directed include/extend between two use cases.
struct UseCaseUseCase {
  std::string source;
  std::string target;
  UcFlavor flavor = UcFlavor::Include;

  bool operator==(const UseCaseUseCase&) const = default;
};

using RefRelation = std::variant<ActorUseCase, ActorActor, UseCaseUseCase>;

/// Stable textual key for a reference relation, e.g.
/// "ActorUseCase(customer,buy)". Used as the relation's identity in reports.
std::string relation_key(const RefRelation& relation);

struct ReferenceSolution {
  std::string label;
  std::vector<RefElement> elements;
  std::vector<RefRelation> relations;
  std::vector<std::string> forbiddenNames;

  const RefElement* find_element(std::string_view refId) const;

  bool operator==(const ReferenceSolution&) const = default;
};

struct Boss {
  std::string iconId;
  std::string taunt;

  bool operator==(const Boss&) const = default;
};

struct ExerciseSpec {
  std::string exerciseId;
  std::string title;
  std::string statement;
  Xp baseXp = 0;
  Boss boss;
  std::vector<ReferenceSolution> solutions;

  bool operator==(const ExerciseSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Authoring validation

enum class IssueCode {
  MalformedInput,
  NoSolutions,
  InvalidBaseXp,
  NoElements,
  DuplicateRefId,
  EmptyName,
  DuplicateRefName,
  ExternalNotSystem,
  OwnerOnNonUseCase,
  UcNoOwner,
  OwnerNotSystem,
  UcInExternalSystem,
  UnknownRef,
  WrongRefKind,
  SupportingRequired,
  SelfRelation,
  DuplicateRefRelation,
  ForbiddenNameCollides,
};

std::string_view to_string(IssueCode code);

struct AuthoringIssue {
  IssueCode code = IssueCode::MalformedInput;
  std::string refId;  // offending reference id, empty when not applicable
  std::string detail;

  bool operator==(const AuthoringIssue&) const = default;
};

/// Checks every structural rule of a reference solution. An empty result
/// means the solution can be used for grading.
std::vector<AuthoringIssue> validate_reference(const ReferenceSolution& solution);

/// Exercise-level rules plus validate_reference on each solution. Issue
/// details are prefixed with the solution index.
std::vector<AuthoringIssue> validate_exercise(const ExerciseSpec& exercise);

}  // namespace umlk
