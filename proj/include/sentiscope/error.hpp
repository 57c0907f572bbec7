#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentiscope {

enum class ErrorKind {
  FileNotFound,
  SchemaError,
  EmptyCorpus,
  InvalidRange,
  InvalidN,
  EmptyInput,
  TiedTrend,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::InvalidN: return "InvalidN";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TiedTrend: return "TiedTrend";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Base of every error raised by the library. `kind()` identifies the
/// failure class so callers (and the CLI exit-code mapping) can dispatch
/// without catching each concrete type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
 public:
  explicit KindError(const std::string& what) : Error(K, what) {}
};

using FileNotFound = KindError<ErrorKind::FileNotFound>;
using SchemaError = KindError<ErrorKind::SchemaError>;
using EmptyCorpus = KindError<ErrorKind::EmptyCorpus>;
using InvalidRange = KindError<ErrorKind::InvalidRange>;
using InvalidN = KindError<ErrorKind::InvalidN>;
using EmptyInput = KindError<ErrorKind::EmptyInput>;
using TiedTrend = KindError<ErrorKind::TiedTrend>;
using ConfigError = KindError<ErrorKind::ConfigError>;

/// An Error re-raised by the pipeline with the stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace sentiscope
