#pragma once

// Hand-rolled random generators for property tests. Every generator takes
// an explicit engine so failures can be reproduced from the printed seed.

#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umlk/game.hpp"
#include "umlk/model.hpp"

namespace gen {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);
bool coin(Rng& rng, double p = 0.5);

/// Random UTF-8 text over ASCII letters, digits, spaces and a few
/// multi-byte letters (accented Latin-1, Greek, CJK).
std::string text(Rng& rng, int minLen, int maxLen);

/// Random name-like string from lower-case letters.
std::string word(Rng& rng, int minLen, int maxLen);

/// Random JSON value used as an opaque field (objects, arrays, numbers,
/// strings with escapes and unicode, booleans, null).
nlohmann::ordered_json opaque_value(Rng& rng, int depth = 2);

/// Structurally valid diagram text in map or array form, with opaque
/// fields sprinkled on the document, elements, relations and ends.
std::string document_text(Rng& rng);

/// Diagram that is free of syntactic diagnostics: unique names per kind,
/// actors outside systems, use cases inside, only allowed relation kinds,
/// at most one relation per unordered pair.
std::string clean_document_text(Rng& rng);

/// Fingerprint universe used for XP property tests.
umlk::ErrorFingerprint fingerprint(int n);

}  // namespace gen
