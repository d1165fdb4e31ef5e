#pragma once

#include <stdexcept>
#include <string>

namespace chorale {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VoiceCountError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeatureError : public Error {
 public:
  explicit UnsupportedFeatureError(std::string element)
      : Error("unsupported MusicXML element: " + element), element_(std::move(element)) {}

  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

// A score that parsed but violates a chorale invariant (ordering, note count, ...).
class InvalidChoraleError : public Error {
 public:
  using Error::Error;
};

class FeatureUndefinedError : public Error {
 public:
  using Error::Error;
};

class SupportMismatchError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

class ProfileBuildError : public Error {
 public:
  using Error::Error;
};

class DegenerateProfileError : public Error {
 public:
  using Error::Error;
};

// Profile file unreadable, wrong metric convention, or hash mismatch.
class ProfileFormatError : public Error {
 public:
  using Error::Error;
};

class RationalOverflowError : public Error {
 public:
  RationalOverflowError() : Error("rational arithmetic overflow") {}
};

}  // namespace chorale
