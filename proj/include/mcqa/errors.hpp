#pragma once

#include <stdexcept>
#include <string>

namespace mcqa {

/// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structurally malformed input record (missing field, wrong arity, bad JSON).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A category string outside a variable's closed vocabulary.
class VocabularyError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// A character span that is empty, reversed or outside its passage.
class SpanError : public Error {
 public:
  using Error::Error;
};

/// An annotation refers to an MCQ that does not exist (or is duplicated).
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// A record that is well-formed but cannot be scored.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcqa
