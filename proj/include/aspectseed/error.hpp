#pragma once

#include <stdexcept>
#include <string>

namespace aspectseed {

enum class ErrorCode {
  Config,
  Data,
  Stage,
  InvalidArgument,
  EmptyCorpus,
  UnknownBackend,
  EmptyVocabulary,
  UnknownAspect,
  EmptyPriorKnowledge,
  EmptyBank,
  EmptySentence,
  Diverged,
  LengthMismatch,
  NoTerms,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Process exit contract: 1 = config error, 2 = data error, 3 = stage failure.
  int exit_code() const noexcept {
    switch (code_) {
      case ErrorCode::Config:
      case ErrorCode::InvalidArgument:
        return 1;
      case ErrorCode::Stage:
      case ErrorCode::Diverged:
        return 3;
      default:
        return 2;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace aspectseed
