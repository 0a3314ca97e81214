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

#include "pce/errors.hpp"

namespace pce {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Unsupported: return "unsupported-operation";
    case ErrorCode::Config: return "configuration";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Decode: return "decode";
    case ErrorCode::Compile: return "compile";
    case ErrorCode::Encoding: return "encoding";
    case ErrorCode::Address: return "address";
    case ErrorCode::Underflow: return "underflow";
    case ErrorCode::Routing: return "routing";
    case ErrorCode::Scheduling: return "scheduling";
    case ErrorCode::Instrumentation: return "instrumentation";
    case ErrorCode::IncompleteRecord: return "incomplete-record";
    case ErrorCode::Comparison: return "comparison";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

CapacityError::CapacityError(std::uint32_t qubit, std::size_t count, const std::string& where)
    : Error(ErrorCode::Capacity, where + ": qubit " + std::to_string(qubit) + " holds " +
                                     std::to_string(count) + " phase words, bank limit is 2048"),
      qubit_(qubit),
      count_(count) {}

CapacityError::CapacityError(const std::string& what)
    : Error(ErrorCode::Capacity, what), qubit_(0xFFFFFFFFu), count_(0) {}

CapacityError::CapacityError(const std::string& what, std::uint32_t qubit, std::size_t count)
    : Error(ErrorCode::Capacity, what), qubit_(qubit), count_(count) {}

DecodeError::DecodeError(std::size_t offset, const std::string& what)
    : Error(ErrorCode::Decode, what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

void throw_error(ErrorCode code, const std::string& msg) {
  switch (code) {
    case ErrorCode::Domain: throw DomainError(msg);
    case ErrorCode::Unsupported: throw UnsupportedOperation(msg);
    case ErrorCode::Config: throw ConfigError(msg);
    case ErrorCode::Parse: throw ParseError(msg);
    case ErrorCode::Validation: throw ValidationError(msg);
    case ErrorCode::Compile: throw CompileError(msg);
    case ErrorCode::Encoding: throw EncodingError(msg);
    case ErrorCode::Address: throw AddressError(msg);
    case ErrorCode::Underflow: throw UnderflowError(msg);
    case ErrorCode::Routing: throw RoutingError(msg);
    case ErrorCode::Scheduling: throw SchedulingError(msg);
    case ErrorCode::Instrumentation: throw InstrumentationError(msg);
    case ErrorCode::IncompleteRecord: throw IncompleteRecordError(msg);
    case ErrorCode::Comparison: throw ComparisonError(msg);
    case ErrorCode::Io: throw IoError(msg);
    case ErrorCode::Capacity: throw CapacityError(msg);
    case ErrorCode::Decode: throw DecodeError(0, msg);
  }
  throw Error(code, msg);
}

void rethrow_with_context(const Error& e, const std::string& context) {
  if (e.code() == ErrorCode::Capacity) {
    const auto* cap = dynamic_cast<const CapacityError*>(&e);
    if (cap != nullptr) throw CapacityError(context + ": " + e.what(), cap->qubit(), cap->count());
  }
  if (e.code() == ErrorCode::Decode) {
    const auto* dec = dynamic_cast<const DecodeError*>(&e);
    if (dec != nullptr) throw DecodeError(dec->offset(), context + ": " + e.what());
  }
  throw_error(e.code(), context + ": " + e.what());
}

}  // namespace pce
