#include "umlk/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "umlk/text.hpp"

namespace umlk {

std::string_view to_string(Severity severity) {
  return severity == Severity::Syntactic ? "Syntactic" : "Semantic";
}

namespace {

constexpr std::pair<Rule, std::string_view> kRuleNames[] = {
    {Rule::SynMissingName, "SYN_MISSING_NAME"},
    {Rule::SynDuplicateName, "SYN_DUPLICATE_NAME"},
    {Rule::SynInvalidAssociation, "SYN_INVALID_ASSOCIATION"},
    {Rule::SynActorInSystem, "SYN_ACTOR_IN_SYSTEM"},
    {Rule::SynUseCaseOutsideSystem, "SYN_USECASE_OUTSIDE_SYSTEM"},
    {Rule::SemMissingElement, "SEM_MISSING_ELEMENT"},
    {Rule::SemMissingRelation, "SEM_MISSING_RELATION"},
    {Rule::SemWrongUcRelationType, "SEM_WRONG_UC_RELATION_TYPE"},
    {Rule::SemWrongUcRelationDirection, "SEM_WRONG_UC_RELATION_DIRECTION"},
    {Rule::SemWrongSystem, "SEM_WRONG_SYSTEM"},
    {Rule::SemForbiddenName, "SEM_FORBIDDEN_NAME"},
    {Rule::SemExtraRelation, "SEM_EXTRA_RELATION"},
};

std::string quoted(std::string_view name) { return "\"" + std::string(name) + "\""; }

std::string kind_label(ElementKind kind) {
  switch (kind) {
    case ElementKind::Actor: return "actor";
    case ElementKind::UseCase: return "use case";
    case ElementKind::System: return "system";
  }
  return "element";
}

std::string element_label(const DiagramElement& element) {
  if (normalize_name(element.name).empty()) return "unnamed " + kind_label(element.kind) + " (id " + element.id + ")";
  return kind_label(element.kind) + " " + quoted(element.name);
}

bool between(const DiagramRelation& relation, std::string_view a, std::string_view b) {
  return (relation.source.element == a && relation.target.element == b) ||
         (relation.source.element == b && relation.target.element == a);
}

// Allowed (relation kind, endpoint kinds) combinations of the notation.
bool is_allowed(const DiagramRelation& relation, const DiagramDocument& doc) {
  const DiagramElement* source = doc.find_element(relation.source.element);
  const DiagramElement* target = doc.find_element(relation.target.element);
  if (source == nullptr || target == nullptr) return false;
  const ElementKind s = source->kind;
  const ElementKind t = target->kind;
  switch (relation.kind) {
    case RelationKind::Association: {
      auto participant = [](ElementKind k) { return k == ElementKind::Actor || k == ElementKind::System; };
      return (participant(s) && t == ElementKind::UseCase) || (s == ElementKind::UseCase && participant(t));
    }
    case RelationKind::Generalization:
      return s == ElementKind::Actor && t == ElementKind::Actor;
    case RelationKind::Include:
    case RelationKind::Extend:
      return s == ElementKind::UseCase && t == ElementKind::UseCase;
  }
  return false;
}

RelationKind kind_for(UcFlavor flavor) {
  return flavor == UcFlavor::Include ? RelationKind::Include : RelationKind::Extend;
}

const std::string& name_of(const DiagramDocument& doc, std::string_view id) {
  static const std::string kEmpty;
  const DiagramElement* element = doc.find_element(id);
  return element != nullptr ? element->name : kEmpty;
}

// Diagram ids of both endpoints of a reference relation, when matched.
std::optional<std::pair<std::string, std::string>> matched_endpoints(const RefRelation& relation,
                                                                     const ElementMatching& matching) {
  auto lookup = [&](const std::string& a, const std::string& b) -> std::optional<std::pair<std::string, std::string>> {
    const std::string* left = matching.match_of(a);
    const std::string* right = matching.match_of(b);
    if (left == nullptr || right == nullptr) return std::nullopt;
    return std::pair{*left, *right};
  };
  return std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ActorUseCase>) return lookup(r.actor, r.useCase);
        else if constexpr (std::is_same_v<T, ActorActor>) return lookup(r.child, r.parent);
        else return lookup(r.source, r.target);
      },
      relation);
}

bool satisfies(const RefRelation& relation, const DiagramRelation& candidate, const std::string& first,
               const std::string& second) {
  if (const auto* r = std::get_if<UseCaseUseCase>(&relation)) {
    return candidate.kind == kind_for(r->flavor) && candidate.source.element == first &&
           candidate.target.element == second;
  }
  if (std::holds_alternative<ActorActor>(relation)) {
    return candidate.kind == RelationKind::Generalization && candidate.source.element == first &&
           candidate.target.element == second;
  }
  return candidate.kind == RelationKind::Association && between(candidate, first, second);
}

std::string relation_display(const RefRelation& relation, const std::string& first, const std::string& second) {
  if (std::holds_alternative<ActorUseCase>(relation)) return first + " -- " + second;
  if (std::holds_alternative<ActorActor>(relation)) return first + " --|> " + second;
  const auto& u = std::get<UseCaseUseCase>(relation);
  return first + " -" + std::string(u.flavor == UcFlavor::Include ? "include" : "extend") + "-> " + second;
}

Diagnostic make(Rule rule, std::vector<std::string> ids, std::vector<std::string> names, std::string message,
                std::optional<std::string> refId = std::nullopt) {
  return Diagnostic{severity_of(rule), rule, std::move(ids), std::move(names), std::move(refId), std::move(message)};
}

}  // namespace

std::string_view to_string(Rule rule) {
  for (const auto& [value, name] : kRuleNames) {
    if (value == rule) return name;
  }
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view text) {
  for (const auto& [value, name] : kRuleNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

Severity severity_of(Rule rule) {
  return static_cast<int>(rule) <= static_cast<int>(Rule::SynUseCaseOutsideSystem) ? Severity::Syntactic
                                                                                   : Severity::Semantic;
}

const std::string* ElementMatching::match_of(std::string_view refId) const {
  auto it = pairs.find(std::string(refId));
  return it == pairs.end() ? nullptr : &it->second;
}

const std::string* ElementMatching::ref_of(std::string_view elementId) const {
  for (const auto& [ref, element] : pairs) {
    if (element == elementId) return &ref;
  }
  return nullptr;
}

ElementMatching match_elements(const ReferenceSolution& ref, const DiagramDocument& doc) {
  ElementMatching result;
  std::set<std::string> consumed;
  for (const auto& expected : ref.elements) {
    bool found = false;
    for (const auto& element : doc.elements) {
      if (element.kind != expected.kind || consumed.contains(element.id)) continue;
      double best = similarity(expected.name, element.name);
      for (const auto& alternative : expected.alternatives) best = std::max(best, similarity(alternative, element.name));
      if (best < kMatchThreshold) continue;
      result.pairs.emplace(expected.refId, element.id);
      result.similarityUsed.emplace(expected.refId, best);
      consumed.insert(element.id);
      found = true;
      break;
    }
    if (!found) result.unmatchedRefs.push_back(expected.refId);
  }
  return result;
}

RelationMatching match_relations(const ReferenceSolution& ref, const DiagramDocument& doc,
                                 const ElementMatching& matching) {
  RelationMatching result;
  for (std::size_t i = 0; i < ref.relations.size(); ++i) {
    const RefRelation& relation = ref.relations[i];
    const auto endpoints = matched_endpoints(relation, matching);
    const DiagramRelation* hit = nullptr;
    if (endpoints) {
      for (const auto& candidate : doc.relations) {
        if (satisfies(relation, candidate, endpoints->first, endpoints->second)) {
          hit = &candidate;
          break;
        }
      }
    }
    if (hit != nullptr) {
      result.matched.push_back(i);
      result.pairs.emplace(i, hit->id);
    } else {
      result.unmatched.push_back(i);
    }
  }
  return result;
}

std::vector<Diagnostic> check_syntax(const DiagramDocument& doc) {
  std::vector<Diagnostic> out;

  std::map<std::pair<ElementKind, std::string>, std::vector<const DiagramElement*>> by_name;
  for (const auto& element : doc.elements) {
    const std::string normalized = normalize_name(element.name);
    if (normalized.empty()) {
      out.push_back(make(Rule::SynMissingName, {element.id}, {element.name},
                         "The " + element_label(element) + " has no name"));
    } else {
      by_name[{element.kind, normalized}].push_back(&element);
    }

    if (element.kind == ElementKind::Actor && element.owner) {
      out.push_back(make(Rule::SynActorInSystem, {element.id}, {element.name},
                         "The " + element_label(element) + " is placed inside system " +
                             quoted(name_of(doc, *element.owner)) + "; actors belong outside systems"));
    }
    if (element.kind == ElementKind::UseCase && !element.owner) {
      out.push_back(make(Rule::SynUseCaseOutsideSystem, {element.id}, {element.name},
                         "The " + element_label(element) + " is not inside any system"));
    }
  }

  for (const auto& [key, group] : by_name) {
    if (group.size() < 2) continue;
    std::vector<std::string> ids;
    std::vector<std::string> names;
    for (const auto* element : group) {
      ids.push_back(element->id);
      names.push_back(element->name);
    }
    out.push_back(make(Rule::SynDuplicateName, std::move(ids), std::move(names),
                       std::to_string(group.size()) + " " + kind_label(key.first) + " elements share the name " +
                           quoted(group.front()->name)));
  }

  for (const auto& relation : doc.relations) {
    if (is_allowed(relation, doc)) continue;
    const DiagramElement* source = doc.find_element(relation.source.element);
    const DiagramElement* target = doc.find_element(relation.target.element);
    out.push_back(make(Rule::SynInvalidAssociation, {relation.id, source->id, target->id},
                       {source->name, target->name},
                       "A " + std::string(to_string(relation.kind)) + " from the " + element_label(*source) +
                           " to the " + element_label(*target) + " is not allowed"));
  }

  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_semantics(const ReferenceSolution& ref, const DiagramDocument& doc,
                                        const ElementMatching& matching, const RelationMatching& relations) {
  std::vector<Diagnostic> out;

  for (const auto& refId : matching.unmatchedRefs) {
    const RefElement* expected = ref.find_element(refId);
    if (expected == nullptr) continue;
    out.push_back(make(Rule::SemMissingElement, {}, {expected->name},
                       "The diagram is missing the " + kind_label(expected->kind) + " " + quoted(expected->name),
                       refId));
  }

  // Diagram relations accounted for by some reference relation, either as a
  // match or as the subject of a more specific diagnostic.
  std::set<std::string> accounted;
  for (const auto& [index, relationId] : relations.pairs) accounted.insert(relationId);

  for (const std::size_t index : relations.unmatched) {
    const RefRelation& relation = ref.relations[index];
    const auto endpoints = matched_endpoints(relation, matching);
    if (!endpoints) continue;
    const auto& [first, second] = *endpoints;
    const std::string& first_name = name_of(doc, first);
    const std::string& second_name = name_of(doc, second);
    const std::string key = relation_key(relation);

    if (const auto* uc = std::get_if<UseCaseUseCase>(&relation)) {
      const DiagramRelation* wrong_type = nullptr;
      const DiagramRelation* reversed = nullptr;
      for (const auto& candidate : doc.relations) {
        if (!between(candidate, first, second)) continue;
        if (candidate.kind != RelationKind::Include && candidate.kind != RelationKind::Extend) continue;
        if (candidate.kind != kind_for(uc->flavor)) {
          if (wrong_type == nullptr) wrong_type = &candidate;
        } else if (reversed == nullptr) {
          reversed = &candidate;
        }
      }
      if (wrong_type != nullptr) {
        accounted.insert(wrong_type->id);
        out.push_back(make(Rule::SemWrongUcRelationType, {wrong_type->id, first, second}, {first_name, second_name},
                           "The relationship between use cases " + quoted(first_name) + " and " + quoted(second_name) +
                               " should be an " + std::string(to_string(uc->flavor)) + ", not an " +
                               std::string(to_string(wrong_type->kind)),
                           key));
        continue;
      }
      if (reversed != nullptr) {
        accounted.insert(reversed->id);
        out.push_back(make(Rule::SemWrongUcRelationDirection, {reversed->id, first, second}, {first_name, second_name},
                           "The " + std::string(to_string(uc->flavor)) + " between " + quoted(first_name) + " and " +
                               quoted(second_name) + " points the wrong way; it should go from " + quoted(first_name) +
                               " to " + quoted(second_name),
                           key));
        continue;
      }
    }
    out.push_back(make(Rule::SemMissingRelation, {first, second}, {first_name, second_name},
                       "The diagram is missing the relationship " + relation_display(relation, quoted(first_name), quoted(second_name)),
                       key));
  }

  for (const auto& expected : ref.elements) {
    if (expected.kind != ElementKind::UseCase || !expected.owningSystem) continue;
    const std::string* element_id = matching.match_of(expected.refId);
    if (element_id == nullptr) continue;
    const DiagramElement* element = doc.find_element(*element_id);
    if (element == nullptr || !element->owner) continue;
    const std::string* expected_owner = matching.match_of(*expected.owningSystem);
    if (expected_owner != nullptr && *expected_owner == *element->owner) continue;
    if (expected_owner == nullptr && matching.ref_of(*element->owner) == nullptr) continue;

    const RefElement* owning = ref.find_element(*expected.owningSystem);
    const std::string& actual_name = name_of(doc, *element->owner);
    out.push_back(make(Rule::SemWrongSystem, {element->id, *element->owner}, {element->name, actual_name},
                       "The use case " + quoted(element->name) + " is placed in system " + quoted(actual_name) +
                           " but belongs to " + quoted(owning != nullptr ? owning->name : *expected.owningSystem),
                       expected.refId));
  }

  for (const auto& element : doc.elements) {
    if (normalize_name(element.name).empty()) continue;
    for (const auto& forbidden : ref.forbiddenNames) {
      if (!is_similar(forbidden, element.name)) continue;
      out.push_back(make(Rule::SemForbiddenName, {element.id}, {element.name},
                         "The name " + quoted(element.name) + " of the " + kind_label(element.kind) +
                             " is not allowed in this exercise"));
      break;
    }
  }

  for (const auto& relation : doc.relations) {
    if (accounted.contains(relation.id)) continue;
    if (matching.ref_of(relation.source.element) == nullptr || matching.ref_of(relation.target.element) == nullptr) continue;
    // Relations that break the notation are reported once, by check_syntax.
    if (!is_allowed(relation, doc)) continue;
    const std::string& source_name = name_of(doc, relation.source.element);
    const std::string& target_name = name_of(doc, relation.target.element);
    out.push_back(make(Rule::SemExtraRelation, {relation.id, relation.source.element, relation.target.element},
                       {source_name, target_name},
                       "The " + std::string(to_string(relation.kind)) + " between " + quoted(source_name) + " and " +
                           quoted(target_name) + " is not part of the expected model"));
  }

  sort_diagnostics(out);
  return out;
}

CompletenessMetrics completeness(const ReferenceSolution& ref, const ElementMatching& matching,
                                 const RelationMatching& relations) {
  CompletenessMetrics metrics;
  for (const auto& element : ref.elements) {
    KindCount& bucket = element.kind == ElementKind::Actor     ? metrics.actor
                        : element.kind == ElementKind::UseCase ? metrics.useCase
                                                               : metrics.system;
    ++bucket.total;
    if (matching.match_of(element.refId) != nullptr) ++bucket.matched;
  }
  metrics.relation.total = ref.relations.size();
  metrics.relation.matched = relations.matched.size();
  const std::size_t total = metrics.total_items();
  metrics.overall = total == 0 ? 0.0 : static_cast<double>(metrics.matched_items()) / static_cast<double>(total);
  return metrics;
}

EvaluationReport evaluate(const ReferenceSolution& solution, const DiagramDocument& doc) {
  EvaluationReport report;
  report.matching = match_elements(solution, doc);
  report.relationMatching = match_relations(solution, doc, report.matching);
  report.completeness = completeness(solution, report.matching, report.relationMatching);
  report.syntactic = check_syntax(doc);
  report.semantic = check_semantics(solution, doc, report.matching, report.relationMatching);

  for (const auto& expected : solution.elements) {
    const std::string* element_id = report.matching.match_of(expected.refId);
    if (element_id == nullptr) continue;
    report.matchedList.push_back({*element_id, expected.refId, name_of(doc, *element_id)});
  }
  for (const std::size_t index : report.relationMatching.matched) {
    const RefRelation& relation = solution.relations[index];
    const auto endpoints = matched_endpoints(relation, report.matching);
    report.matchedList.push_back({report.relationMatching.pairs.at(index), relation_key(relation),
                                  relation_display(relation, name_of(doc, endpoints->first),
                                                   name_of(doc, endpoints->second))});
  }
  return report;
}

EvaluationReport evaluate_exercise(const ExerciseSpec& exercise, const DiagramDocument& doc) {
  EvaluationReport best;
  bool have_best = false;
  for (std::size_t i = 0; i < exercise.solutions.size(); ++i) {
    EvaluationReport report = evaluate(exercise.solutions[i], doc);
    report.solutionIndex = i;
    // Compare matched/total ratios exactly by cross-multiplication.
    const auto better = [](const CompletenessMetrics& a, const CompletenessMetrics& b) {
      return a.matched_items() * b.total_items() > b.matched_items() * a.total_items();
    };
    if (!have_best || better(report.completeness, best.completeness)) {
      best = std::move(report);
      have_best = true;
    }
  }
  return best;
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  static const std::string kNone;
  std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    const std::string& a_name = a.subjectNames.empty() ? kNone : a.subjectNames.front();
    const std::string& b_name = b.subjectNames.empty() ? kNone : b.subjectNames.front();
    return std::tie(a.severity, a.rule, a_name, a.subjectIds, a.refId, a.message) <
           std::tie(b.severity, b.rule, b_name, b.subjectIds, b.refId, b.message);
  });
}

}  // namespace umlk
