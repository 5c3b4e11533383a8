#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace reqdsl {

enum class ErrorCode {
  EmptySupportSet,
  InvalidSupportSet,
  UnknownSupportSet,
  Timeout,
  TransportError,
  BackendRejected,
  ReplayMiss,
  MalformedRecord,
  DuplicateId,
  UnknownId,
  UnknownClass,
  DanglingReference,
  DisjointnessViolation,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the failures a generation backend can raise.
constexpr bool is_backend_error(ErrorCode code) noexcept {
  return code == ErrorCode::Timeout || code == ErrorCode::TransportError ||
         code == ErrorCode::BackendRejected || code == ErrorCode::ReplayMiss;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A fixture or corpus record that could not be decoded.
class MalformedRecordError : public Error {
 public:
  MalformedRecordError(std::string file, std::size_t line, std::string field,
                       const std::string& reason);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

/// Minimal value-or-error holder for operations whose failure is an
/// ordinary outcome (parsing) rather than an exceptional one.
template <class T, class E>
class Result {
 public:
  Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : storage_(std::in_place_index<1>, std::move(error)) {}

  bool has_value() const noexcept { return storage_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const { return std::get<0>(storage_); }
  const E& error() const { return std::get<1>(storage_); }

  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, E> storage_;
};

}  // namespace reqdsl
