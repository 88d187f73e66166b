#pragma once

#include <stdexcept>
#include <string>

namespace spmdlens {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (syntax or wrong field type).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a structural or value invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An analysis step whose preconditions do not hold for the given data.
class AnalysisError : public Error {
public:
    using Error::Error;
};

} // namespace spmdlens
