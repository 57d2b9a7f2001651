#include "umlk/codec.hpp"

namespace umlk {

using nlohmann::json;

void to_json(json& j, const Diagnostic& d) {
  j = json{{"severity", to_string(d.severity)},
           {"rule", to_string(d.rule)},
           {"subjectIds", d.subjectIds},
           {"subjectNames", d.subjectNames},
           {"refId", d.refId ? json(*d.refId) : json(nullptr)},
           {"message", d.message}};
}

void to_json(json& j, const MatchedItem& item) {
  j = json{{"elementId", item.elementId}, {"refId", item.refId}, {"displayName", item.displayName}};
}

void to_json(json& j, const ElementMatching& m) {
  j = json{{"pairs", m.pairs}, {"unmatchedRefs", m.unmatchedRefs}, {"similarityUsed", m.similarityUsed}};
}

void to_json(json& j, const RelationMatching& m) {
  json pairs = json::object();
  for (const auto& [index, id] : m.pairs) pairs[std::to_string(index)] = id;
  j = json{{"matched", m.matched}, {"unmatched", m.unmatched}, {"pairs", std::move(pairs)}};
}

namespace {
json count_json(const KindCount& c) { return json{{"matched", c.matched}, {"total", c.total}}; }
}  // namespace

void to_json(json& j, const CompletenessMetrics& c) {
  j = json{{"perKind",
            {{"Actor", count_json(c.actor)},
             {"UseCase", count_json(c.useCase)},
             {"System", count_json(c.system)},
             {"Relation", count_json(c.relation)}}},
           {"overall", c.overall}};
}

void to_json(json& j, const EvaluationReport& r) {
  j = json{{"solutionIndex", r.solutionIndex},
           {"matching", r.matching},
           {"relationMatching", r.relationMatching},
           {"completeness", r.completeness},
           {"syntactic", r.syntactic},
           {"semantic", r.semantic},
           {"matchedList", r.matchedList}};
}

void to_json(json& j, const ParseError& e) {
  j = json{{"code", to_string(e.code)},
           {"detail", e.detail},
           {"location", e.location ? json(*e.location) : json(nullptr)}};
}

void to_json(json& j, const AuthoringIssue& issue) {
  j = json{{"code", to_string(issue.code)}, {"refId", issue.refId}, {"detail", issue.detail}};
}

void to_json(json& j, const RefElement& e) {
  j = json{{"refId", e.refId},
           {"kind", to_string(e.kind)},
           {"name", e.name},
           {"alternatives", e.alternatives},
           {"external", e.external},
           {"owningSystem", e.owningSystem ? json(*e.owningSystem) : json(nullptr)}};
}

void to_json(json& j, const RefRelation& r) {
  std::visit(
      [&](const auto& rel) {
        using T = std::decay_t<decltype(rel)>;
        if constexpr (std::is_same_v<T, ActorUseCase>) {
          j = json{{"kind", "ActorUseCase"}, {"actor", rel.actor}, {"useCase", rel.useCase}, {"supporting", rel.supporting}};
        } else if constexpr (std::is_same_v<T, ActorActor>) {
          j = json{{"kind", "ActorActor"}, {"child", rel.child}, {"parent", rel.parent}};
        } else {
          j = json{{"kind", "UseCaseUseCase"}, {"source", rel.source}, {"target", rel.target}, {"flavor", to_string(rel.flavor)}};
        }
      },
      r);
}

void to_json(json& j, const ReferenceSolution& s) {
  j = json{{"label", s.label}, {"forbiddenNames", s.forbiddenNames}, {"elements", s.elements}, {"relations", s.relations}};
}

void to_json(json& j, const ExerciseSpec& e) {
  j = json{{"exerciseId", e.exerciseId},
           {"title", e.title},
           {"statement", e.statement},
           {"baseXp", e.baseXp},
           {"boss", {{"iconId", e.boss.iconId}, {"taunt", e.boss.taunt}}},
           {"solutions", e.solutions}};
}

void to_json(json& j, const CourseConfig& c) {
  json multipliers = json::array();
  for (const auto& m : c.multipliers) multipliers.push_back({{"maxChecks", m.maxChecks}, {"factor", m.factor}});
  json props = json::array();
  for (const auto& p : c.propUnlocks) props.push_back({{"propId", p.propId}, {"unlockLevel", p.unlockLevel}});
  j = json{{"levelThresholds", c.levelThresholds},
           {"deductionFraction", c.deductionFraction},
           {"floorFraction", c.floorFraction},
           {"multipliers", std::move(multipliers)},
           {"propUnlocks", std::move(props)}};
}

// Missing fields keep their defaults so teachers can write partial files.
void from_json(const json& j, CourseConfig& c) {
  if (j.contains("levelThresholds")) j.at("levelThresholds").get_to(c.levelThresholds);
  if (j.contains("deductionFraction")) j.at("deductionFraction").get_to(c.deductionFraction);
  if (j.contains("floorFraction")) j.at("floorFraction").get_to(c.floorFraction);
  if (j.contains("multipliers")) {
    c.multipliers.clear();
    for (const auto& m : j.at("multipliers")) {
      c.multipliers.push_back({m.at("maxChecks").get<int>(), m.at("factor").get<double>()});
    }
  }
  if (j.contains("propUnlocks")) {
    c.propUnlocks.clear();
    for (const auto& p : j.at("propUnlocks")) {
      c.propUnlocks.push_back({p.at("propId").get<std::string>(), p.at("unlockLevel").get<int>()});
    }
  }
}

void to_json(json& j, const ErrorFingerprint& f) { j = json{{"rule", f.rule}, {"anchor", f.anchor}}; }

void from_json(const json& j, ErrorFingerprint& f) {
  j.at("rule").get_to(f.rule);
  j.at("anchor").get_to(f.anchor);
}

void to_json(json& j, const CheckSummary& s) {
  j = json{{"completeness", s.completeness}, {"fingerprints", s.fingerprints}};
}

void from_json(const json& j, CheckSummary& s) {
  j.at("completeness").get_to(s.completeness);
  s.fingerprints.clear();
  for (const auto& f : j.at("fingerprints")) s.fingerprints.insert(f.get<ErrorFingerprint>());
}

void to_json(json& j, const ExerciseSession& s) {
  json deductions = json::array();
  for (const auto& [fingerprint, amount] : s.deductions) {
    deductions.push_back({{"rule", fingerprint.rule}, {"anchor", fingerprint.anchor}, {"amount", amount}});
  }
  j = json{{"exerciseId", s.exerciseId},
           {"checksUsed", s.checksUsed},
           {"deductions", std::move(deductions)},
           {"activeErrors", s.activeErrors},
           {"lastCompleteness", s.lastCompleteness},
           {"lastObtainable", s.lastObtainable},
           {"bestCompleteness", s.bestCompleteness},
           {"completed", s.completed}};
}

void from_json(const json& j, ExerciseSession& s) {
  j.at("exerciseId").get_to(s.exerciseId);
  j.at("checksUsed").get_to(s.checksUsed);
  s.deductions.clear();
  for (const auto& d : j.at("deductions")) {
    s.deductions.emplace(ErrorFingerprint{d.at("rule").get<std::string>(), d.at("anchor").get<std::string>()},
                         d.at("amount").get<Xp>());
  }
  s.activeErrors.clear();
  for (const auto& f : j.at("activeErrors")) s.activeErrors.insert(f.get<ErrorFingerprint>());
  j.at("lastCompleteness").get_to(s.lastCompleteness);
  j.at("lastObtainable").get_to(s.lastObtainable);
  j.at("bestCompleteness").get_to(s.bestCompleteness);
  j.at("completed").get_to(s.completed);
}

void to_json(json& j, const MoodState& m) {
  j = json{{"index", m.index}, {"label", mood_label(m)}};
}

void to_json(json& j, const StudentState& s) {
  j = json{{"studentId", s.studentId},
           {"displayName", s.displayName},
           {"totalXp", s.totalXp},
           {"level", s.level},
           {"mood", s.mood},
           {"ownedProps", s.ownedProps},
           {"equippedProps", s.equippedProps},
           {"sessions", s.sessions}};
}

void from_json(const json& j, StudentState& s) {
  j.at("studentId").get_to(s.studentId);
  j.at("displayName").get_to(s.displayName);
  j.at("totalXp").get_to(s.totalXp);
  j.at("level").get_to(s.level);
  s.mood.index = j.at("mood").at("index").get<int>();
  j.at("ownedProps").get_to(s.ownedProps);
  j.at("equippedProps").get_to(s.equippedProps);
  s.sessions.clear();
  for (const auto& [id, session] : j.at("sessions").items()) s.sessions.emplace(id, session.get<ExerciseSession>());
}

void to_json(json& j, const Recap& r) {
  j = json{{"newErrors", r.newErrors},
           {"fixedErrors", r.fixedErrors},
           {"deltaXp", r.deltaXp},
           {"deltaCompleteness", r.deltaCompleteness},
           {"obtainableXp", r.obtainableXp},
           {"completeness", r.completeness}};
}

void to_json(json& j, const CompletionResult& r) {
  j = json{{"awardedXp", r.awardedXp},
           {"multiplierApplied", r.multiplierApplied},
           {"newLevel", r.newLevel},
           {"unlockedProps", r.unlockedProps},
           {"solutionViewUnlocked", r.solutionViewUnlocked}};
}

void to_json(json& j, const LeaderboardEntry& e) {
  j = json{{"rank", e.rank},
           {"studentId", e.studentId},
           {"displayName", e.displayName},
           {"score", e.score},
           {"level", e.level},
           {"totalXp", e.totalXp},
           {"equippedProps", e.equippedProps}};
}

std::string snapshot_text(const StudentState& state) { return json(state).dump(2) + "\n"; }

}  // namespace umlk
