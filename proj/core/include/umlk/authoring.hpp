#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "umlk/model.hpp"
#include "umlk/result.hpp"

namespace umlk {

/// Reads an exercise file. All-or-nothing: any parse problem or failed
/// reference rule returns the complete issue list instead of an exercise.
Result<ExerciseSpec, std::vector<AuthoringIssue>> load_exercise(std::string_view input);

/// Pretty-printed exercise file text accepted by load_exercise.
std::string serialize_exercise(const ExerciseSpec& exercise);

/// Turns a drawn diagram into a reference solution. Element ids become
/// refIds; systems start non-external and without alternatives, to be
/// refined by the teacher afterwards.
Result<ReferenceSolution, std::vector<AuthoringIssue>> derive_reference_from_diagram(const DiagramDocument& doc);

}  // namespace umlk
