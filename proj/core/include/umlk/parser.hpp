#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "umlk/model.hpp"
#include "umlk/result.hpp"

namespace umlk {

enum class ParseErrorCode {
  MalformedInput,
  UnknownNotation,
  UnknownElementKind,
  UnknownRelationKind,
  DanglingReference,
  DuplicateId,
  SelfRelation,
};

std::string_view to_string(ParseErrorCode code);

struct ParseError {
  ParseErrorCode code = ParseErrorCode::MalformedInput;
  std::string detail;
  std::optional<std::string> location;  // offending element/relation id

  bool operator==(const ParseError&) const = default;
};

/// Reads an Apollon-style use case diagram export.
///
/// Checks run in a fixed order (JSON syntax, top-level shape, elements in
/// id order, id uniqueness, owners, relations in id order) and the first
/// failure is reported. Never throws.
Result<DiagramDocument, ParseError> parse_document(std::string_view input);

/// Compact single-line serialization; parse_document reproduces `doc`.
std::string serialize_document(const DiagramDocument& doc);

}  // namespace umlk
