#pragma once

// Grades a student diagram against reference solutions: greedy name
// matching, relation matching, completeness and the two diagnostic catalogs.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umlk/model.hpp"

namespace umlk {

struct ElementMatching {
  std::map<std::string, std::string> pairs;  // refId -> diagram element id
  std::vector<std::string> unmatchedRefs;    // authored order
  std::map<std::string, double> similarityUsed;

  const std::string* match_of(std::string_view refId) const;
  /// refId matched to a diagram element, if any.
  const std::string* ref_of(std::string_view elementId) const;

  bool operator==(const ElementMatching&) const = default;
};

struct RelationMatching {
  std::vector<std::size_t> matched;    // indices into ReferenceSolution::relations
  std::vector<std::size_t> unmatched;
  std::map<std::size_t, std::string> pairs;  // matched index -> diagram relation id

  bool operator==(const RelationMatching&) const = default;
};

enum class Severity { Syntactic, Semantic };
std::string_view to_string(Severity severity);

enum class Rule {
  SynMissingName,
  SynDuplicateName,
  SynInvalidAssociation,
  SynActorInSystem,
  SynUseCaseOutsideSystem,
  SemMissingElement,
  SemMissingRelation,
  SemWrongUcRelationType,
  SemWrongUcRelationDirection,
  SemWrongSystem,
  SemForbiddenName,
  SemExtraRelation,
};
std::string_view to_string(Rule rule);
std::optional<Rule> rule_from_string(std::string_view text);
Severity severity_of(Rule rule);

struct Diagnostic {
  Severity severity = Severity::Syntactic;
  Rule rule = Rule::SynMissingName;
  std::vector<std::string> subjectIds;    // diagram element/relation ids
  std::vector<std::string> subjectNames;  // display names of the involved elements
  std::optional<std::string> refId;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct KindCount {
  std::size_t matched = 0;
  std::size_t total = 0;

  bool operator==(const KindCount&) const = default;
};

struct CompletenessMetrics {
  KindCount actor;
  KindCount useCase;
  KindCount system;
  KindCount relation;
  double overall = 0.0;

  std::size_t matched_items() const { return actor.matched + useCase.matched + system.matched + relation.matched; }
  std::size_t total_items() const { return actor.total + useCase.total + system.total + relation.total; }

  bool operator==(const CompletenessMetrics&) const = default;
};

struct MatchedItem {
  std::string elementId;  // diagram element id, or diagram relation id
  std::string refId;      // RefElement::refId, or relation_key() for relations
  std::string displayName;

  bool operator==(const MatchedItem&) const = default;
};

struct EvaluationReport {
  std::size_t solutionIndex = 0;
  ElementMatching matching;
  RelationMatching relationMatching;
  CompletenessMetrics completeness;
  std::vector<Diagnostic> syntactic;
  std::vector<Diagnostic> semantic;
  std::vector<MatchedItem> matchedList;

  bool operator==(const EvaluationReport&) const = default;
};

ElementMatching match_elements(const ReferenceSolution& ref, const DiagramDocument& doc);

RelationMatching match_relations(const ReferenceSolution& ref, const DiagramDocument& doc,
                                 const ElementMatching& matching);

/// Reference-independent structural rules.
std::vector<Diagnostic> check_syntax(const DiagramDocument& doc);

/// Reference-dependent rules; expects matchings computed on the same inputs.
std::vector<Diagnostic> check_semantics(const ReferenceSolution& ref, const DiagramDocument& doc,
                                        const ElementMatching& matching, const RelationMatching& relations);

CompletenessMetrics completeness(const ReferenceSolution& ref, const ElementMatching& matching,
                                 const RelationMatching& relations);

EvaluationReport evaluate(const ReferenceSolution& solution, const DiagramDocument& doc);

/// Evaluates against every solution and keeps the most complete report;
/// ties go to the lowest solution index.
EvaluationReport evaluate_exercise(const ExerciseSpec& exercise, const DiagramDocument& doc);

/// Orders diagnostics by (severity, rule, first subject name) with the
/// remaining fields as tie-breakers.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

}  // namespace umlk
