#pragma once

#include <stdexcept>
#include <string>

namespace dispersal {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed model: bad probabilities, overlapping guards, etc.
class ModelError : public Error {
  public:
    using Error::Error;
};

/// A variable left its declared range during state-space exploration.
class ExplorationError : public Error {
  public:
    ExplorationError(std::string variable, int value, const std::string& what)
        : Error(what), variable_(std::move(variable)), value_(value) {}
    const std::string& variable() const { return variable_; }
    int value() const { return value_; }

  private:
    std::string variable_;
    int value_;
};

class CompositionError : public Error {
  public:
    using Error::Error;
};

class ParameterError : public Error {
  public:
    using Error::Error;
};

/// A precondition of an abstraction or oracle does not hold; the operation refuses.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

class QueryError : public Error {
  public:
    using Error::Error;
};

class SolverError : public Error {
  public:
    SolverError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Config file problems. `field` names the offending JSON path when known.
class ConfigError : public Error {
  public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

}  // namespace dispersal
