#pragma once

#include <stdexcept>
#include <string>

namespace orep {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input text does not conform to the ontology grammar.
struct ParseError : Error {
    ParseError(int line, int column, const std::string& what)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// A reasoning task exceeded its configured work budget. Never silently
/// converted into a consistency verdict.
struct ResourceLimitError : Error {
    using Error::Error;
};

/// An enumeration (model search, maximal-consistent-subset listing) would
/// exceed its configured cap.
struct CapExceededError : Error {
    using Error::Error;
};

/// Operation requires a consistent ontology but was handed an inconsistent
/// one, or vice versa.
struct ConsistencyPreconditionError : Error {
    using Error::Error;
};

/// Axiom kind not supported by the requested operation (role assertions
/// cannot be weakened).
struct UnsupportedAxiomError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

struct TooFewSamplesError : Error {
    using Error::Error;
};

struct InjectionError : Error {
    using Error::Error;
};

}  // namespace orep
