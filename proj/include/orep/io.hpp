#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "orep/errors.hpp"
#include "orep/ontology.hpp"

namespace orep {

// Text format, whitespace-insensitive, '#' starts a comment to end of line:
//
//   Statement := "SubClassOf(" Concept Concept ")"
//              | "ClassAssertion(" Concept Ind ")"
//              | "PropertyAssertion(" Role Ind Ind ")"
//   Concept   := Name | "Top" | "Bottom" | "Not(" Concept ")"
//              | "And(" Concept+ ")" | "Or(" Concept+ ")"
//              | "All(" Role Concept ")" | "Some(" Role Concept ")"
//
// Identifiers match [A-Za-z_][A-Za-z0-9_]*; the construct keywords are
// reserved and so is the "__fresh_" prefix (used internally for the
// individuals introduced by subsumption checks). N-ary And/Or are desugared
// left-associatively; serialization re-emits the binary form.

Ontology parse_ontology(std::string_view text, std::vector<std::string>* warnings = nullptr);
Concept parse_concept(std::string_view text);
Axiom parse_axiom(std::string_view text);

std::string serialize_concept(Concept c);
std::string serialize_axiom(const Axiom& ax);
// One statement per line, in axiom order; empty ontology serializes to "".
std::string serialize_ontology(const Ontology& o);

std::ostream& operator<<(std::ostream& os, Concept c);
std::ostream& operator<<(std::ostream& os, const Axiom& ax);

}  // namespace orep
