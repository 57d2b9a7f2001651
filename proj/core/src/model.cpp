#include "umlk/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "umlk/text.hpp"

namespace umlk {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Actor: return "Actor";
    case ElementKind::UseCase: return "UseCase";
    case ElementKind::System: return "System";
  }
  return "?";
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Association: return "Association";
    case RelationKind::Include: return "Include";
    case RelationKind::Extend: return "Extend";
    case RelationKind::Generalization: return "Generalization";
  }
  return "?";
}

std::optional<ElementKind> element_kind_from_string(std::string_view text) {
  if (text == "Actor") return ElementKind::Actor;
  if (text == "UseCase") return ElementKind::UseCase;
  if (text == "System") return ElementKind::System;
  return std::nullopt;
}

std::string_view to_string(UcFlavor flavor) {
  return flavor == UcFlavor::Include ? "Include" : "Extend";
}

std::string_view to_string(IssueCode code) {
  switch (code) {
    case IssueCode::MalformedInput: return "MALFORMED_INPUT";
    case IssueCode::NoSolutions: return "NO_SOLUTIONS";
    case IssueCode::InvalidBaseXp: return "INVALID_BASE_XP";
    case IssueCode::NoElements: return "NO_ELEMENTS";
    case IssueCode::DuplicateRefId: return "DUPLICATE_REF_ID";
    case IssueCode::EmptyName: return "EMPTY_NAME";
    case IssueCode::DuplicateRefName: return "DUPLICATE_REF_NAME";
    case IssueCode::ExternalNotSystem: return "EXTERNAL_NOT_SYSTEM";
    case IssueCode::OwnerOnNonUseCase: return "OWNER_ON_NON_USECASE";
    case IssueCode::UcNoOwner: return "UC_NO_OWNER";
    case IssueCode::OwnerNotSystem: return "OWNER_NOT_SYSTEM";
    case IssueCode::UcInExternalSystem: return "UC_IN_EXTERNAL_SYSTEM";
    case IssueCode::UnknownRef: return "UNKNOWN_REF";
    case IssueCode::WrongRefKind: return "WRONG_REF_KIND";
    case IssueCode::SupportingRequired: return "SUPPORTING_REQUIRED";
    case IssueCode::SelfRelation: return "SELF_RELATION";
    case IssueCode::DuplicateRefRelation: return "DUPLICATE_REF_RELATION";
    case IssueCode::ForbiddenNameCollides: return "FORBIDDEN_NAME_COLLIDES";
  }
  return "?";
}

const DiagramElement* DiagramDocument::find_element(std::string_view id) const {
  // elements are sorted by id
  auto it = std::lower_bound(elements.begin(), elements.end(), id,
                             [](const DiagramElement& e, std::string_view key) { return e.id < key; });
  if (it != elements.end() && it->id == id) return &*it;
  return nullptr;
}

const RefElement* ReferenceSolution::find_element(std::string_view refId) const {
  for (const auto& element : elements) {
    if (element.refId == refId) return &element;
  }
  return nullptr;
}

std::string relation_key(const RefRelation& relation) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ActorUseCase>) {
          return "ActorUseCase(" + r.actor + "," + r.useCase + ")";
        } else if constexpr (std::is_same_v<T, ActorActor>) {
          return "ActorActor(" + r.child + "," + r.parent + ")";
        } else {
          return "UseCaseUseCase(" + r.source + "," + r.target + "," + std::string(to_string(r.flavor)) + ")";
        }
      },
      relation);
}

namespace {

class IssueSink {
 public:
  void add(IssueCode code, std::string refId, std::string detail) {
    issues_.push_back({code, std::move(refId), std::move(detail)});
  }
  std::vector<AuthoringIssue> take() { return std::move(issues_); }

 private:
  std::vector<AuthoringIssue> issues_;
};

void check_elements(const ReferenceSolution& solution, IssueSink& sink) {
  std::set<std::string> seen_ids;
  for (const auto& element : solution.elements) {
    if (element.refId.empty()) {
      sink.add(IssueCode::MalformedInput, "", "element \"" + element.name + "\" has an empty refId");
    } else if (!seen_ids.insert(element.refId).second) {
      sink.add(IssueCode::DuplicateRefId, element.refId, "refId used by more than one element");
    }

    if (normalize_name(element.name).empty()) {
      sink.add(IssueCode::EmptyName, element.refId, "element has an empty name");
    }
    for (const auto& alternative : element.alternatives) {
      if (normalize_name(alternative).empty()) {
        sink.add(IssueCode::EmptyName, element.refId, "\"" + element.name + "\" has an empty alternative name");
      }
    }

    if (element.external && element.kind != ElementKind::System) {
      sink.add(IssueCode::ExternalNotSystem, element.refId,
               "\"" + element.name + "\" is marked external but is not a system");
    }
    if (element.owningSystem && element.kind != ElementKind::UseCase) {
      sink.add(IssueCode::OwnerOnNonUseCase, element.refId,
               "\"" + element.name + "\" has an owning system but is not a use case");
    }
    if (element.kind != ElementKind::UseCase) continue;

    if (!element.owningSystem) {
      sink.add(IssueCode::UcNoOwner, element.refId, "use case \"" + element.name + "\" has no owning system");
      continue;
    }
    const RefElement* owner = solution.find_element(*element.owningSystem);
    if (owner == nullptr) {
      sink.add(IssueCode::UnknownRef, element.refId,
               "use case \"" + element.name + "\" is owned by unknown refId " + *element.owningSystem);
    } else if (owner->kind != ElementKind::System) {
      sink.add(IssueCode::OwnerNotSystem, element.refId,
               "use case \"" + element.name + "\" is owned by \"" + owner->name + "\", which is not a system");
    } else if (owner->external) {
      sink.add(IssueCode::UcInExternalSystem, element.refId,
               "use case \"" + element.name + "\" is placed in external system \"" + owner->name + "\"");
    }
  }
}

void check_name_uniqueness(const ReferenceSolution& solution, IssueSink& sink) {
  // (kind, normalized name) -> refId of first element using it
  std::map<std::pair<ElementKind, std::string>, std::string> owners;
  for (const auto& element : solution.elements) {
    std::set<std::string> names;
    names.insert(normalize_name(element.name));
    for (const auto& alternative : element.alternatives) names.insert(normalize_name(alternative));
    names.erase("");
    for (const auto& name : names) {
      auto [it, inserted] = owners.emplace(std::pair{element.kind, name}, element.refId);
      if (!inserted && it->second != element.refId) {
        sink.add(IssueCode::DuplicateRefName, element.refId,
                 std::string(to_string(element.kind)) + " name \"" + name + "\" is also used by " + it->second);
      }
    }
  }
}

void check_relations(const ReferenceSolution& solution, IssueSink& sink) {
  auto resolve = [&](const std::string& refId, std::string_view role) -> const RefElement* {
    const RefElement* element = solution.find_element(refId);
    if (element == nullptr) {
      sink.add(IssueCode::UnknownRef, refId, "relation " + std::string(role) + " refers to unknown refId");
    }
    return element;
  };
  auto expect_kind = [&](const RefElement& element, ElementKind kind, const std::string& key) {
    if (element.kind == kind) return true;
    sink.add(IssueCode::WrongRefKind, element.refId,
             key + ": \"" + element.name + "\" is a " + std::string(to_string(element.kind)) + ", expected " +
                 std::string(to_string(kind)));
    return false;
  };

  std::set<std::string> seen_pairs;
  for (const auto& relation : solution.relations) {
    const std::string key = relation_key(relation);
    std::string pair_key;
    if (const auto* r = std::get_if<ActorUseCase>(&relation)) {
      const RefElement* actor = resolve(r->actor, "actor");
      const RefElement* use_case = resolve(r->useCase, "use case");
      if (actor != nullptr) {
        if (actor->kind == ElementKind::System) {
          if (!r->supporting) {
            sink.add(IssueCode::SupportingRequired, actor->refId,
                     key + ": system \"" + actor->name + "\" can only take part as a supporting actor");
          }
        } else {
          expect_kind(*actor, ElementKind::Actor, key);
        }
      }
      if (use_case != nullptr) expect_kind(*use_case, ElementKind::UseCase, key);
      pair_key = "AU:" + r->actor + "|" + r->useCase;
    } else if (const auto* r = std::get_if<ActorActor>(&relation)) {
      const RefElement* child = resolve(r->child, "child");
      const RefElement* parent = resolve(r->parent, "parent");
      if (child != nullptr) expect_kind(*child, ElementKind::Actor, key);
      if (parent != nullptr) expect_kind(*parent, ElementKind::Actor, key);
      if (r->child == r->parent) sink.add(IssueCode::SelfRelation, r->child, key + " relates an actor to itself");
      pair_key = "AA:" + std::min(r->child, r->parent) + "|" + std::max(r->child, r->parent);
    } else {
      const auto& u = std::get<UseCaseUseCase>(relation);
      const RefElement* source = resolve(u.source, "source");
      const RefElement* target = resolve(u.target, "target");
      if (source != nullptr) expect_kind(*source, ElementKind::UseCase, key);
      if (target != nullptr) expect_kind(*target, ElementKind::UseCase, key);
      if (u.source == u.target) sink.add(IssueCode::SelfRelation, u.source, key + " relates a use case to itself");
      pair_key = "UU:" + std::min(u.source, u.target) + "|" + std::max(u.source, u.target);
    }
    if (!seen_pairs.insert(pair_key).second) {
      sink.add(IssueCode::DuplicateRefRelation, "", key + " duplicates another relation between the same elements");
    }
  }
}

void check_forbidden_names(const ReferenceSolution& solution, IssueSink& sink) {
  for (const auto& forbidden : solution.forbiddenNames) {
    if (normalize_name(forbidden).empty()) {
      sink.add(IssueCode::EmptyName, "", "forbidden name list contains an empty entry");
      continue;
    }
    for (const auto& element : solution.elements) {
      bool collides = is_similar(forbidden, element.name);
      for (const auto& alternative : element.alternatives) collides = collides || is_similar(forbidden, alternative);
      if (collides) {
        sink.add(IssueCode::ForbiddenNameCollides, element.refId,
                 "forbidden name \"" + forbidden + "\" is too close to \"" + element.name + "\"");
      }
    }
  }
}

}  // namespace

std::vector<AuthoringIssue> validate_reference(const ReferenceSolution& solution) {
  IssueSink sink;
  if (solution.elements.empty()) {
    sink.add(IssueCode::NoElements, "", "solution \"" + solution.label + "\" has no elements");
  }
  check_elements(solution, sink);
  check_name_uniqueness(solution, sink);
  check_relations(solution, sink);
  check_forbidden_names(solution, sink);
  return sink.take();
}

std::vector<AuthoringIssue> validate_exercise(const ExerciseSpec& exercise) {
  std::vector<AuthoringIssue> issues;
  if (exercise.baseXp <= 0) {
    issues.push_back({IssueCode::InvalidBaseXp, "", "baseXp must be positive"});
  }
  if (exercise.solutions.empty()) {
    issues.push_back({IssueCode::NoSolutions, "", "exercise has no reference solutions"});
  }
  for (std::size_t i = 0; i < exercise.solutions.size(); ++i) {
    for (auto& issue : validate_reference(exercise.solutions[i])) {
      issue.detail = "solution " + std::to_string(i) + ": " + issue.detail;
      issues.push_back(std::move(issue));
    }
  }
  return issues;
}

}  // namespace umlk
