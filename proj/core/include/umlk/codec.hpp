#pragma once

// JSON forms of reports and game state. Field names follow the C++ member
// names; maps are emitted with sorted keys so output is reproducible.

#include <nlohmann/json.hpp>

#include "umlk/evaluator.hpp"
#include "umlk/game.hpp"
#include "umlk/model.hpp"
#include "umlk/parser.hpp"

namespace umlk {

void to_json(nlohmann::json& j, const Diagnostic& d);
void to_json(nlohmann::json& j, const MatchedItem& item);
void to_json(nlohmann::json& j, const ElementMatching& m);
void to_json(nlohmann::json& j, const RelationMatching& m);
void to_json(nlohmann::json& j, const CompletenessMetrics& c);
void to_json(nlohmann::json& j, const EvaluationReport& r);
void to_json(nlohmann::json& j, const ParseError& e);
void to_json(nlohmann::json& j, const AuthoringIssue& issue);

void to_json(nlohmann::json& j, const RefElement& e);
void to_json(nlohmann::json& j, const RefRelation& r);
void to_json(nlohmann::json& j, const ReferenceSolution& s);
void to_json(nlohmann::json& j, const ExerciseSpec& e);

void to_json(nlohmann::json& j, const CourseConfig& c);
void from_json(const nlohmann::json& j, CourseConfig& c);
void to_json(nlohmann::json& j, const ErrorFingerprint& f);
void from_json(const nlohmann::json& j, ErrorFingerprint& f);
void to_json(nlohmann::json& j, const CheckSummary& s);
void from_json(const nlohmann::json& j, CheckSummary& s);
void to_json(nlohmann::json& j, const ExerciseSession& s);
void from_json(const nlohmann::json& j, ExerciseSession& s);
void to_json(nlohmann::json& j, const MoodState& m);
void to_json(nlohmann::json& j, const StudentState& s);
void from_json(const nlohmann::json& j, StudentState& s);
void to_json(nlohmann::json& j, const Recap& r);
void to_json(nlohmann::json& j, const CompletionResult& r);
void to_json(nlohmann::json& j, const LeaderboardEntry& e);

/// Canonical snapshot text of a student (pretty-printed, sorted keys).
std::string snapshot_text(const StudentState& state);

}  // namespace umlk
