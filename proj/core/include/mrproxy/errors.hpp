#pragma once

#include <stdexcept>
#include <string>

namespace mrproxy {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph: cycle, duplicate edge or label, self-loop, bad text line.
class DagError : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& label)
      : Error("unknown node '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class ConfigError : public Error {
 public:
  // `field` is a dotted path such as "scm.parent.outcome_noise_sd".
  ConfigError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(field),
        message_(message) {}
  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }

 private:
  std::string field_;
  std::string message_;
};

// Instrument has a single level or zero variance.
class DegenerateInstrument : public Error {
 public:
  using Error::Error;
};

// Gene-exposure contrast is below the weak-instrument threshold.
class WeakInstrument : public Error {
 public:
  using Error::Error;
};

class NonMonotoneExposure : public Error {
 public:
  using Error::Error;
};

// Bootstrap statistic failed in more than 10% of replicates.
class EstimatorUnstable : public Error {
 public:
  using Error::Error;
};

}  // namespace mrproxy
