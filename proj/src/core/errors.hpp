#pragma once

#include <stdexcept>
#include <string>

namespace vc {

enum class ErrorCode {
  Internal = 1,
  FileNotFound,
  UnsupportedFormat,
  CorruptHeader,
  IoError,
  EmptyClip,
  EmptyInput,
  SignalTooShort,
  SampleRateMismatch,
  DegenerateFilter,
  ShapeMismatch,
  ConfigInvalid,
  TooManySamples,
  SampleTooShort,
  LabelOutOfRange,
  DatasetTooSmall,
  DuplicateSpeaker,
  ZeroVector,
  LengthMismatch,
  EmptyStore,
  StoreMismatch,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace vc
