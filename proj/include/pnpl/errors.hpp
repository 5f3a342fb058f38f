#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnpl {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text did not conform to a grammar (formula or model file).
// Positions are 1-based; column counts bytes.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

// An identifier used in a formula is not a declared feature.
class UndeclaredFeatureError : public ParseError {
 public:
  UndeclaredFeatureError(std::string feature, int line, int column)
      : ParseError("undeclared feature: " + feature, line, column),
        feature_(std::move(feature)) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

// A model failed structural validation at load time.
class ModelError : public Error {
 public:
  using Error::Error;
};

// An assignment is not a valid configuration of the feature model.
class InvalidConfigurationError : public Error {
 public:
  using Error::Error;
};

// Firing was requested for a transition that is not token-enabled.
class NotEnabledError : public Error {
 public:
  using Error::Error;
};

enum class LimitKind { States, TokensPerPlace, Features };

// An exploration or enumeration guard tripped.
class LimitExceededError : public Error {
 public:
  LimitExceededError(LimitKind kind, std::size_t limit, std::size_t observed)
      : Error(describe(kind, limit, observed)), kind_(kind), limit_(limit), observed_(observed) {}

  LimitKind kind() const { return kind_; }
  std::size_t limit() const { return limit_; }
  std::size_t observed() const { return observed_; }

 private:
  static std::string describe(LimitKind kind, std::size_t limit, std::size_t observed) {
    switch (kind) {
      case LimitKind::States:
        return "state limit exceeded: " + std::to_string(observed) + " states (limit " +
               std::to_string(limit) + ")";
      case LimitKind::TokensPerPlace:
        return "token limit exceeded: " + std::to_string(observed) + " tokens in one place (limit " +
               std::to_string(limit) + ")";
      case LimitKind::Features:
        return "feature count " + std::to_string(observed) + " exceeds enumeration limit " +
               std::to_string(limit);
    }
    return "limit exceeded";
  }

  LimitKind kind_;
  std::size_t limit_;
  std::size_t observed_;
};

}  // namespace pnpl
