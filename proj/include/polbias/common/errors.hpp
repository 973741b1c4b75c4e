#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polbias {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kStageFailure = 2,
  kIntegrity = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kStageFailure; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kValidation; }
};

class IntegrityError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kIntegrity; }
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A live call failed after every retry. Carries one line per attempt.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::vector<std::string> attempts)
      : Error(what), attempts_(std::move(attempts)) {}
  const std::vector<std::string>& attempts() const noexcept { return attempts_; }

 private:
  std::vector<std::string> attempts_;
};

// Replay mode asked for an envelope the bundle does not contain.
class MissingArtifactError : public Error {
 public:
  explicit MissingArtifactError(std::string key)
      : Error("missing recorded artifact for cache key " + key), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, ExitCode code = ExitCode::kStageFailure)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)), code_(code) {}
  const std::string& stage() const noexcept { return stage_; }
  ExitCode exit_code() const noexcept override { return code_; }

 private:
  std::string stage_;
  ExitCode code_;
};

}  // namespace polbias
