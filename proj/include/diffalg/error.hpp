#pragma once

#include <stdexcept>
#include <string>

namespace diffalg {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- arithmetic ----------------------------------------------------------

class DivisionByZero : public Error {
public:
    using Error::Error;
};

// Comparison asked a question the truncation window cannot answer.
class IndeterminateOrder : public Error {
public:
    using Error::Error;
};

// A result's leading term (or a queried coefficient) lies beyond the window.
class InsufficientTruncation : public Error {
public:
    using Error::Error;
};

// ---- expressions ---------------------------------------------------------

// Pow would give a differential-carrying base a non-integer grade.
class NonIntegerGrade : public Error {
public:
    using Error::Error;
};

class SubstitutionError : public Error {
public:
    using Error::Error;
};

// ---- differential engine -------------------------------------------------

class UnsupportedDifferential : public Error {
public:
    using Error::Error;
};

class OrderGuardExceeded : public Error {
public:
    using Error::Error;
};

class VaryVarNotArgument : public Error {
public:
    using Error::Error;
};

// ---- declarations and parsing --------------------------------------------

class CyclicDependency : public Error {
public:
    using Error::Error;
};

class DuplicateDeclaration : public Error {
public:
    using Error::Error;
};

class UnknownFunction : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::size_t line, std::size_t column,
               std::string expected, std::string found);

    std::size_t offset;
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based
    std::string expected;
    std::string found;
};

// ---- evaluation ----------------------------------------------------------

class UnboundVariable : public Error {
public:
    using Error::Error;
};

class UnboundFunction : public Error {
public:
    using Error::Error;
};

// Exact rational arithmetic cannot represent the requested power.
class NonRationalPower : public Error {
public:
    using Error::Error;
};

class UnknownIdentity : public Error {
public:
    using Error::Error;
};

}  // namespace diffalg
