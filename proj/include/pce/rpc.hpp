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

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "pce/control.hpp"
#include "pce/errors.hpp"
#include "pce/param_blob.hpp"
#include "pce/profiling.hpp"

namespace pce {

// Frame: u32 length (= 2 + payload bytes) | u16 type | payload, little-endian.
enum class MsgType : std::uint16_t {
  LoadCircuit = 1,
  LoadParams = 2,
  LoadDefs = 3,
  Run = 4,
  GetData = 5,
  Data = 6,
  Ack = 7,
  Error = 8,
};

inline constexpr std::size_t kFrameHeaderSize = 6;
inline constexpr std::size_t kMaxEnvelopeWords = 4096;
inline constexpr std::size_t kMaxFrequencyWords = 64;

struct LoadCircuitMsg {
  std::uint32_t index = 0;
  MachineProgram program;
  friend bool operator==(const LoadCircuitMsg&, const LoadCircuitMsg&) = default;
};

struct LoadParamsMsg {
  std::uint32_t index = 0;
  std::vector<std::vector<std::uint32_t>> banks;  // words per bank, at most 8 banks
  friend bool operator==(const LoadParamsMsg&, const LoadParamsMsg&) = default;
};

struct LoadDefsMsg {
  std::vector<std::uint32_t> envelope;
  std::vector<std::uint32_t> frequency;
  friend bool operator==(const LoadDefsMsg&, const LoadDefsMsg&) = default;
};

struct RunMsg {
  std::uint32_t shots = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const RunMsg&, const RunMsg&) = default;
};

struct GetDataMsg {
  friend bool operator==(const GetDataMsg&, const GetDataMsg&) = default;
};

struct DataMsg {
  ShotData data;
  std::uint64_t cycle_count = 0;
  std::uint64_t timeline_ns = 0;
  std::uint64_t stitch_requests = 0;
  friend bool operator==(const DataMsg&, const DataMsg&) = default;
};

struct AckMsg {
  friend bool operator==(const AckMsg&, const AckMsg&) = default;
};

struct ErrorMsg {
  ErrorCode code = ErrorCode::Validation;
  std::uint32_t qubit = 0;   // capacity errors
  std::uint64_t count = 0;   // capacity errors
  std::uint64_t offset = 0;  // decode errors
  std::string message;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;

  static ErrorMsg from(const Error& e);
  [[noreturn]] void raise() const;
};

using Message = std::variant<LoadCircuitMsg, LoadParamsMsg, LoadDefsMsg, RunMsg, GetDataMsg, DataMsg, AckMsg, ErrorMsg>;

MsgType message_type(const Message& m);
const char* message_type_name(MsgType t);

std::vector<std::uint8_t> rpc_encode(const Message& m);
/// Decodes exactly one frame. Throws DecodeError on truncation, a length
/// field that disagrees with the buffer, an unknown type, or a bad payload.
Message rpc_decode(std::span<const std::uint8_t> frame);

/// Total frame size announced by a header (needs at least 4 bytes).
std::size_t frame_length(std::span<const std::uint8_t> header);

struct DefinitionMemory {
  std::vector<std::uint32_t> envelope;
  std::vector<std::uint32_t> frequency;
};

/// Control-side RPC endpoint: command buffer, definition memories, parameter
/// memory, stitch and executor. Not thread-safe; one request at a time.
class ControlServer {
 public:
  using TraceSink = std::function<void(std::uint32_t index, const ExecutionResult&)>;

  explicit ControlServer(TimingConfig timing = {});

  /// Decodes a request frame and returns the response frame. Failures become
  /// ERROR frames; this never throws.
  std::vector<std::uint8_t> handle(std::span<const std::uint8_t> frame);
  /// Typed entry point behind handle(); throws on failure.
  Message dispatch(const Message& request);

  void set_trace_sink(TraceSink sink) { sink_ = std::move(sink); }
  /// Stages below Run on Host recorded while serving requests.
  const ProfileRecord& profile() const { return profile_; }
  std::uint64_t last_handle_ns() const { return last_handle_ns_.load(std::memory_order_acquire); }

  const std::vector<std::uint64_t>& command_buffer() const { return command_buffer_; }
  const DefinitionMemory& definitions() const { return defs_; }
  const ParameterMemory& memory() const { return memory_; }
  const TimingConfig& timing() const { return timing_; }

  std::uint64_t load_circuit_calls() const { return load_circuit_calls_; }
  std::uint64_t load_params_calls() const { return load_params_calls_; }

 private:
  Message on_load_circuit(const LoadCircuitMsg& m);
  Message on_load_params(const LoadParamsMsg& m);
  Message on_load_defs(const LoadDefsMsg& m);
  Message on_run(const RunMsg& m);
  Message on_get_data();

  TimingConfig timing_;
  ProfileRecord profile_;
  Profiler profiler_;
  std::atomic<std::uint64_t> last_handle_ns_{0};
  std::vector<std::uint64_t> command_buffer_;
  std::optional<MachineProgram> program_;
  DefinitionMemory defs_;
  ParameterMemory memory_;
  std::array<std::uint32_t, kParamBanks> loaded_counts_{};
  std::uint32_t current_index_ = 0;
  std::optional<DataMsg> pending_;
  TraceSink sink_;
  std::uint64_t load_circuit_calls_ = 0;
  std::uint64_t load_params_calls_ = 0;
};

/// Byte transport between a host session and a ControlServer.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual std::vector<std::uint8_t> transact(std::span<const std::uint8_t> frame) = 0;
  /// Time the last transact spent moving bytes, server handling excluded.
  virtual std::uint64_t last_transport_ns() const = 0;
  virtual ControlServer& server() = 0;
};

/// Hands frames to the server by copying them across an in-memory boundary.
class InProcessChannel : public Channel {
 public:
  explicit InProcessChannel(ControlServer& server) : server_(&server) {}
  std::vector<std::uint8_t> transact(std::span<const std::uint8_t> frame) override;
  std::uint64_t last_transport_ns() const override { return transport_ns_; }
  ControlServer& server() override { return *server_; }

 private:
  ControlServer* server_;
  std::uint64_t transport_ns_ = 0;
};

/// Runs the server on its own thread behind a local stream socket pair.
class SocketChannel : public Channel {
 public:
  explicit SocketChannel(ControlServer& server);
  ~SocketChannel() override;
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;

  std::vector<std::uint8_t> transact(std::span<const std::uint8_t> frame) override;
  std::uint64_t last_transport_ns() const override { return transport_ns_; }
  ControlServer& server() override { return *server_; }

 private:
  void serve();

  ControlServer* server_;
  int client_fd_ = -1;
  int server_fd_ = -1;
  std::thread thread_;
  std::uint64_t transport_ns_ = 0;
};

/// Host end of the RPC link. ERROR responses are rethrown as typed errors.
class Session {
 public:
  explicit Session(Channel& channel) : channel_(&channel) {}

  Message call(const Message& request);
  template <typename Reply>
  Reply call_expect(const Message& request);

  Channel& channel() { return *channel_; }
  std::uint64_t transport_ns() const { return transport_ns_; }
  std::uint64_t bytes_sent() const { return bytes_sent_; }
  std::uint64_t bytes_received() const { return bytes_received_; }
  std::uint64_t calls() const { return calls_; }

 private:
  Channel* channel_;
  std::uint64_t transport_ns_ = 0;
  std::uint64_t bytes_sent_ = 0;
  std::uint64_t bytes_received_ = 0;
  std::uint64_t calls_ = 0;
};

template <typename Reply>
Reply Session::call_expect(const Message& request) {
  Message reply = call(request);
  if (auto* r = std::get_if<Reply>(&reply)) return std::move(*r);
  throw SchedulingError(std::string("unexpected ") + message_type_name(message_type(reply)) + " reply to " +
                        message_type_name(message_type(request)));
}

struct CircuitRun {
  ShotData data;
  std::uint64_t cycle_count = 0;
  std::uint64_t timeline_ns = 0;
  std::uint64_t stitch_requests = 0;

  friend bool operator==(const CircuitRun&, const CircuitRun&) = default;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint32_t shots = 0;  // 0: each program's own shot count
  std::optional<LoadDefsMsg> definitions;
};

struct RunResult {
  std::vector<CircuitRun> runs;  // by circuit index
  std::uint64_t load_circuit_calls = 0;
  std::uint64_t load_params_calls = 0;
};

/// Seed for circuit `index` of a batch run.
std::uint64_t circuit_seed(std::uint64_t seed, std::uint32_t index);

/// Deft scheduling: walks the blob's order, loads a program only at each
/// group's representative, loads parameters for every circuit, runs and
/// collects data. Throws SchedulingError when `uniques` and the blob's
/// report disagree.
RunResult deft_run(const std::map<std::uint32_t, MachineProgram>& uniques, const DecodedBlob& blob, Session& session,
                   const RunOptions& options);
RunResult deft_run(const std::map<std::uint32_t, MachineProgram>& uniques, std::span<const std::uint8_t> blob,
                   Session& session, const RunOptions& options);

/// Conventional execution: one program load per circuit, no parameter memory.
RunResult baseline_run(std::span<const MachineProgram> programs, Session& session, const RunOptions& options);

}  // namespace pce
