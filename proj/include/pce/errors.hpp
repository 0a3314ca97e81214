// Copyright 2026 The PCE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pce {

enum class ErrorCode {
  Domain,
  Unsupported,
  Config,
  Parse,
  Validation,
  Capacity,
  Decode,
  Compile,
  Encoding,
  Address,
  Underflow,
  Routing,
  Scheduling,
  Instrumentation,
  IncompleteRecord,
  Comparison,
  Io,
};

const char* error_code_name(ErrorCode code);

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define PCE_DEFINE_ERROR(Name, Code)                                                 \
  class Name : public Error {                                                        \
   public:                                                                           \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  }

PCE_DEFINE_ERROR(DomainError, Domain);
PCE_DEFINE_ERROR(UnsupportedOperation, Unsupported);
PCE_DEFINE_ERROR(ConfigError, Config);
PCE_DEFINE_ERROR(ParseError, Parse);
PCE_DEFINE_ERROR(ValidationError, Validation);
PCE_DEFINE_ERROR(CompileError, Compile);
PCE_DEFINE_ERROR(EncodingError, Encoding);
PCE_DEFINE_ERROR(AddressError, Address);
PCE_DEFINE_ERROR(UnderflowError, Underflow);
PCE_DEFINE_ERROR(RoutingError, Routing);
PCE_DEFINE_ERROR(SchedulingError, Scheduling);
PCE_DEFINE_ERROR(InstrumentationError, Instrumentation);
PCE_DEFINE_ERROR(IncompleteRecordError, IncompleteRecord);
PCE_DEFINE_ERROR(ComparisonError, Comparison);
PCE_DEFINE_ERROR(IoError, Io);

#undef PCE_DEFINE_ERROR

/// Raised when a qubit's phase-word list exceeds a parameter bank.
class CapacityError : public Error {
 public:
  CapacityError(std::uint32_t qubit, std::size_t count, const std::string& where);
  /// Capacity failure not tied to a qubit (definition tables, bank index).
  explicit CapacityError(const std::string& what);
  /// Rebuilds an error from an already formatted message.
  CapacityError(const std::string& what, std::uint32_t qubit, std::size_t count);
  std::uint32_t qubit() const noexcept { return qubit_; }
  std::size_t count() const noexcept { return count_; }

 private:
  std::uint32_t qubit_;
  std::size_t count_;
};

/// Raised by every binary decoder; carries the byte (or word) offset at which
/// decoding stopped.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Throws the concrete error type matching `code`.
[[noreturn]] void throw_error(ErrorCode code, const std::string& what);

/// Rethrows `e` as the same concrete type with `context` prefixed.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace pce
