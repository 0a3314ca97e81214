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

#include "pce/rpc.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "pce/bytes.hpp"
#include "pce/rng.hpp"

namespace pce {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ns_since(Clock::time_point t0) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

void put_words(ByteWriter& w, const std::vector<std::uint32_t>& words) {
  w.u32(static_cast<std::uint32_t>(words.size()));
  for (auto x : words) w.u32(x);
}

std::vector<std::uint32_t> get_words(ByteReader& r) {
  const std::uint32_t n = r.u32();
  r.need(std::size_t{n} * 4);
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = r.u32();
  return v;
}

void encode_payload(ByteWriter& w, const LoadCircuitMsg& m) {
  w.u32(m.index);
  const auto file = write_machine_file(m.program);
  w.u32(static_cast<std::uint32_t>(file.size()));
  w.bytes(file);
}

void encode_payload(ByteWriter& w, const LoadParamsMsg& m) {
  if (m.banks.size() > 255) throw EncodingError("LOAD_PARAMS carries more than 255 banks");
  w.u32(m.index);
  w.u8(static_cast<std::uint8_t>(m.banks.size()));
  for (const auto& b : m.banks) put_words(w, b);
}

void encode_payload(ByteWriter& w, const LoadDefsMsg& m) {
  put_words(w, m.envelope);
  put_words(w, m.frequency);
}

void encode_payload(ByteWriter& w, const RunMsg& m) {
  w.u32(m.shots);
  w.u64(m.seed);
}

void encode_payload(ByteWriter&, const GetDataMsg&) {}
void encode_payload(ByteWriter&, const AckMsg&) {}

void encode_payload(ByteWriter& w, const DataMsg& m) {
  const ShotData& d = m.data;
  w.u16(static_cast<std::uint16_t>(d.qubits.size()));
  for (auto q : d.qubits) w.u16(q);
  w.u32(static_cast<std::uint32_t>(d.bits.size()));
  const std::size_t row = (d.qubits.size() + 7) / 8;
  for (const auto& shot : d.bits) {
    if (shot.size() != d.qubits.size()) throw EncodingError("shot row width differs from measured qubit count");
    std::vector<std::uint8_t> packed(row, 0);
    for (std::size_t i = 0; i < shot.size(); ++i)
      if (shot[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    w.bytes(packed);
  }
  w.u64(m.cycle_count);
  w.u64(m.timeline_ns);
  w.u64(m.stitch_requests);
}

void encode_payload(ByteWriter& w, const ErrorMsg& m) {
  w.u16(static_cast<std::uint16_t>(m.code));
  w.u32(m.qubit);
  w.u64(m.count);
  w.u64(m.offset);
  w.str(m.message);
}

Message decode_payload(MsgType type, ByteReader& r) {
  switch (type) {
    case MsgType::LoadCircuit: {
      LoadCircuitMsg m;
      m.index = r.u32();
      const std::uint32_t n = r.u32();
      const std::size_t at = r.offset();
      try {
        m.program = read_machine_file(r.bytes(n));
      } catch (const DecodeError& e) {
        throw DecodeError(at + e.offset(), std::string("embedded machine file: ") + e.what());
      } catch (const Error& e) {
        throw DecodeError(at, std::string("embedded machine file: ") + e.what());
      }
      return m;
    }
    case MsgType::LoadParams: {
      LoadParamsMsg m;
      m.index = r.u32();
      const std::uint8_t nb = r.u8();
      m.banks.resize(nb);
      for (auto& b : m.banks) b = get_words(r);
      return m;
    }
    case MsgType::LoadDefs: {
      LoadDefsMsg m;
      m.envelope = get_words(r);
      m.frequency = get_words(r);
      return m;
    }
    case MsgType::Run: {
      RunMsg m;
      m.shots = r.u32();
      m.seed = r.u64();
      return m;
    }
    case MsgType::GetData: return GetDataMsg{};
    case MsgType::Ack: return AckMsg{};
    case MsgType::Data: {
      DataMsg m;
      const std::uint16_t nq = r.u16();
      m.data.qubits.resize(nq);
      for (auto& q : m.data.qubits) q = r.u16();
      const std::uint32_t shots = r.u32();
      const std::size_t row = (std::size_t{nq} + 7) / 8;
      r.need(row * shots);
      m.data.bits.resize(shots);
      for (auto& shot : m.data.bits) {
        auto packed = r.bytes(row);
        shot.resize(nq);
        for (std::size_t i = 0; i < nq; ++i) shot[i] = (packed[i / 8] >> (i % 8)) & 1u;
        if (nq % 8 != 0 && row > 0 && (packed[row - 1] >> (nq % 8)) != 0) {
          throw DecodeError(r.offset() - 1, "padding bits set in shot row");
        }
      }
      m.cycle_count = r.u64();
      m.timeline_ns = r.u64();
      m.stitch_requests = r.u64();
      return m;
    }
    case MsgType::Error: {
      ErrorMsg m;
      const std::size_t at = r.offset();
      const std::uint16_t code = r.u16();
      if (code > static_cast<std::uint16_t>(ErrorCode::Io)) throw DecodeError(at, "unknown error code");
      m.code = static_cast<ErrorCode>(code);
      m.qubit = r.u32();
      m.count = r.u64();
      m.offset = r.u64();
      m.message = r.str();
      return m;
    }
  }
  throw DecodeError(4, "unknown message type " + std::to_string(static_cast<unsigned>(type)));
}

}  // namespace

ErrorMsg ErrorMsg::from(const Error& e) {
  ErrorMsg m;
  m.code = e.code();
  m.message = e.what();
  if (const auto* cap = dynamic_cast<const CapacityError*>(&e)) {
    m.qubit = cap->qubit();
    m.count = cap->count();
  }
  if (const auto* dec = dynamic_cast<const DecodeError*>(&e)) m.offset = dec->offset();
  return m;
}

void ErrorMsg::raise() const {
  if (code == ErrorCode::Capacity) throw CapacityError(message, qubit, static_cast<std::size_t>(count));
  if (code == ErrorCode::Decode) throw DecodeError(static_cast<std::size_t>(offset), "remote: " + message);
  throw_error(code, message);
}

MsgType message_type(const Message& m) {
  static constexpr MsgType kTypes[] = {MsgType::LoadCircuit, MsgType::LoadParams, MsgType::LoadDefs, MsgType::Run,
                                       MsgType::GetData,     MsgType::Data,       MsgType::Ack,      MsgType::Error};
  return kTypes[m.index()];
}

const char* message_type_name(MsgType t) {
  switch (t) {
    case MsgType::LoadCircuit: return "LOAD_CIRCUIT";
    case MsgType::LoadParams: return "LOAD_PARAMS";
    case MsgType::LoadDefs: return "LOAD_DEFS";
    case MsgType::Run: return "RUN";
    case MsgType::GetData: return "GET_DATA";
    case MsgType::Data: return "DATA";
    case MsgType::Ack: return "ACK";
    case MsgType::Error: return "ERROR";
  }
  return "?";
}

std::vector<std::uint8_t> rpc_encode(const Message& m) {
  ByteWriter w;
  w.u32(0);
  w.u16(static_cast<std::uint16_t>(message_type(m)));
  std::visit([&](const auto& msg) { encode_payload(w, msg); }, m);
  auto out = w.take();
  const std::uint64_t length = out.size() - 4;
  if (length > 0xFFFFFFFFull) throw EncodingError("RPC frame exceeds 4 GiB");
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(length >> (8 * i));
  return out;
}

std::size_t frame_length(std::span<const std::uint8_t> header) {
  ByteReader r(header);
  return std::size_t{r.u32()} + 4;
}

Message rpc_decode(std::span<const std::uint8_t> frame) {
  ByteReader r(frame);
  const std::uint32_t length = r.u32();
  if (length < 2) throw DecodeError(0, "frame length " + std::to_string(length) + " is below the type field");
  if (length != r.remaining()) {
    throw DecodeError(0, "frame length " + std::to_string(length) + " disagrees with buffer of " +
                             std::to_string(r.remaining()) + " bytes");
  }
  const std::uint16_t type = r.u16();
  if (type < 1 || type > 8) throw DecodeError(4, "unknown message type " + std::to_string(type));
  Message m = decode_payload(static_cast<MsgType>(type), r);
  if (r.remaining() != 0) throw DecodeError(r.offset(), "trailing bytes after payload");
  return m;
}

// ---------------------------------------------------------------------------

ControlServer::ControlServer(TimingConfig timing) : timing_(timing), profiler_(profile_, Stage::RunOnHost) {}

std::vector<std::uint8_t> ControlServer::handle(std::span<const std::uint8_t> frame) {
  const auto t0 = Clock::now();
  std::vector<std::uint8_t> out;
  try {
    out = rpc_encode(dispatch(rpc_decode(frame)));
  } catch (const Error& e) {
    out = rpc_encode(ErrorMsg::from(e));
  } catch (const std::exception& e) {
    ErrorMsg m;
    m.code = ErrorCode::Validation;
    m.message = std::string("internal: ") + e.what();
    out = rpc_encode(m);
  }
  last_handle_ns_.store(ns_since(t0), std::memory_order_release);
  return out;
}

Message ControlServer::dispatch(const Message& request) {
  return std::visit(
      [&](const auto& m) -> Message {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LoadCircuitMsg>) return on_load_circuit(m);
        if constexpr (std::is_same_v<T, LoadParamsMsg>) return on_load_params(m);
        if constexpr (std::is_same_v<T, LoadDefsMsg>) return on_load_defs(m);
        if constexpr (std::is_same_v<T, RunMsg>) return on_run(m);
        if constexpr (std::is_same_v<T, GetDataMsg>) return on_get_data();
        throw ValidationError(std::string(message_type_name(message_type(request))) + " is not a request");
      },
      request);
}

Message ControlServer::on_load_circuit(const LoadCircuitMsg& m) {
  auto batch = profiler_.scope(Stage::LoadBatch);
  auto load = profiler_.scope(Stage::LoadCircuit);
  disassemble(m.program);
  command_buffer_ = m.program.words;
  program_ = m.program;
  loaded_counts_.fill(0);
  current_index_ = m.index;
  pending_.reset();
  ++load_circuit_calls_;
  return AckMsg{};
}

Message ControlServer::on_load_params(const LoadParamsMsg& m) {
  auto para = profiler_.scope(Stage::LoadPara);
  if (m.banks.size() > kParamBanks) {
    throw AddressError("LOAD_PARAMS names " + std::to_string(m.banks.size()) + " banks, memory has 8");
  }
  loaded_counts_.fill(0);
  for (std::size_t b = 0; b < m.banks.size(); ++b) {
    memory_.write_params(b, m.banks[b]);
    loaded_counts_[b] = static_cast<std::uint32_t>(m.banks[b].size());
  }
  current_index_ = m.index;
  ++load_params_calls_;
  return AckMsg{};
}

Message ControlServer::on_load_defs(const LoadDefsMsg& m) {
  auto batch = profiler_.scope(Stage::LoadBatch);
  auto def = profiler_.scope(Stage::LoadDefinition);
  {
    auto env = profiler_.scope(Stage::LoadEnv);
    if (m.envelope.size() > kMaxEnvelopeWords) {
      throw CapacityError("envelope table of " + std::to_string(m.envelope.size()) + " words exceeds " +
                          std::to_string(kMaxEnvelopeWords));
    }
    defs_.envelope = m.envelope;
  }
  {
    auto freq = profiler_.scope(Stage::LoadFreq);
    if (m.frequency.size() > kMaxFrequencyWords) {
      throw CapacityError("frequency table of " + std::to_string(m.frequency.size()) + " words exceeds " +
                          std::to_string(kMaxFrequencyWords));
    }
    defs_.frequency = m.frequency;
  }
  {
    auto zero = profiler_.scope(Stage::LoadZero);
    std::fill(command_buffer_.begin(), command_buffer_.end(), 0);
    program_.reset();
    pending_.reset();
  }
  return AckMsg{};
}

Message ControlServer::on_run(const RunMsg& m) {
  std::uint64_t start_run_ns = 0;
  std::uint64_t requests = 0;
  {
    auto batch = profiler_.scope(Stage::RunBatch);
    if (!program_) throw SchedulingError("RUN with no circuit loaded");
    StitchConfig cfg;
    cfg.shots = m.shots == 0 ? 1 : m.shots;
    for (std::size_t q = 0; q < kParamBanks; ++q) {
      const std::uint32_t want = q < program_->param_counts.size() ? program_->param_counts[q] : 0;
      if (want != loaded_counts_[q]) {
        throw SchedulingError("circuit " + std::to_string(current_index_) + " qubit " + std::to_string(q) +
                              " requests " + std::to_string(want) + " parameters but " +
                              std::to_string(loaded_counts_[q]) + " are loaded");
      }
      cfg.banks[q].param_count = want;
    }
    for (std::size_t q = kParamBanks; q < program_->param_counts.size(); ++q) {
      if (program_->param_counts[q] != 0) {
        throw RoutingError("qubit " + std::to_string(q) + " has no parameter bank");
      }
    }
    Stitch stitch(memory_, cfg);
    const auto t0 = Clock::now();
    ExecutionResult res;
    {
      auto start = profiler_.scope(Stage::StartRun);
      res = execute(*program_, &stitch, m.shots, m.seed, timing_);
    }
    start_run_ns = ns_since(t0);
    requests = res.stitch_requests;
    if (sink_) sink_(current_index_, res);
    pending_ = DataMsg{std::move(res.data), res.cycle_count, res.timeline_ns, res.stitch_requests};
  }
  if (requests != 0) {
    profile_.carve(Stage::Stitch, std::min(requests * 2 * timing_.ns_per_cycle, start_run_ns),
                   {Stage::StartRun, Stage::RunBatch});
  }
  return AckMsg{};
}

Message ControlServer::on_get_data() {
  auto batch = profiler_.scope(Stage::RunBatch);
  auto get = profiler_.scope(Stage::GetData);
  if (!pending_) throw SchedulingError("GET_DATA with no completed run");
  DataMsg d = std::move(*pending_);
  pending_.reset();
  return d;
}

// ---------------------------------------------------------------------------

std::vector<std::uint8_t> InProcessChannel::transact(std::span<const std::uint8_t> frame) {
  auto t0 = Clock::now();
  const std::vector<std::uint8_t> inbound(frame.begin(), frame.end());
  std::uint64_t moved = ns_since(t0);
  auto reply = server_->handle(inbound);
  t0 = Clock::now();
  std::vector<std::uint8_t> outbound(reply.begin(), reply.end());
  moved += ns_since(t0);
  transport_ns_ = moved;
  return outbound;
}

namespace {

void write_all(int fd, const std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    const ssize_t k = ::send(fd, p, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("socket write: ") + std::strerror(errno));
    }
    p += k;
    n -= static_cast<std::size_t>(k);
  }
}

// False on a clean end-of-stream before any byte was read.
bool read_all(int fd, std::uint8_t* p, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t k = ::recv(fd, p + got, n - got, 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("socket read: ") + std::strerror(errno));
    }
    if (k == 0) {
      if (got == 0) return false;
      throw IoError("socket closed mid-frame");
    }
    got += static_cast<std::size_t>(k);
  }
  return true;
}

bool read_frame(int fd, std::vector<std::uint8_t>& out) {
  out.resize(4);
  if (!read_all(fd, out.data(), 4)) return false;
  const std::size_t total = frame_length(out);
  out.resize(total);
  if (total > 4 && !read_all(fd, out.data() + 4, total - 4)) throw IoError("socket closed mid-frame");
  return true;
}

}  // namespace

SocketChannel::SocketChannel(ControlServer& server) : server_(&server) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw IoError(std::string("socketpair: ") + std::strerror(errno));
  }
  client_fd_ = fds[0];
  server_fd_ = fds[1];
  thread_ = std::thread([this] { serve(); });
}

SocketChannel::~SocketChannel() {
  ::shutdown(client_fd_, SHUT_WR);
  if (thread_.joinable()) thread_.join();
  ::close(client_fd_);
  ::close(server_fd_);
}

void SocketChannel::serve() {
  std::vector<std::uint8_t> frame;
  try {
    while (read_frame(server_fd_, frame)) {
      const auto reply = server_->handle(frame);
      write_all(server_fd_, reply.data(), reply.size());
    }
  } catch (const std::exception&) {
    ::shutdown(server_fd_, SHUT_RDWR);
  }
}

std::vector<std::uint8_t> SocketChannel::transact(std::span<const std::uint8_t> frame) {
  const auto t0 = Clock::now();
  write_all(client_fd_, frame.data(), frame.size());
  std::vector<std::uint8_t> reply;
  if (!read_frame(client_fd_, reply)) throw IoError("control server closed the connection");
  const std::uint64_t round_trip = ns_since(t0);
  const std::uint64_t handled = server_->last_handle_ns();
  transport_ns_ = round_trip > handled ? round_trip - handled : 0;
  return reply;
}

// ---------------------------------------------------------------------------

Message Session::call(const Message& request) {
  const auto frame = rpc_encode(request);
  const auto reply_bytes = channel_->transact(frame);
  ++calls_;
  bytes_sent_ += frame.size();
  bytes_received_ += reply_bytes.size();
  transport_ns_ += channel_->last_transport_ns();
  Message reply = rpc_decode(reply_bytes);
  if (const auto* err = std::get_if<ErrorMsg>(&reply)) err->raise();
  return reply;
}

std::uint64_t circuit_seed(std::uint64_t seed, std::uint32_t index) { return derive_seed(seed, {index}); }

namespace {

CircuitRun run_loaded(Session& s, std::uint32_t shots, std::uint64_t seed) {
  s.call_expect<AckMsg>(RunMsg{shots, seed});
  DataMsg d = s.call_expect<DataMsg>(GetDataMsg{});
  return CircuitRun{std::move(d.data), d.cycle_count, d.timeline_ns, d.stitch_requests};
}

std::uint32_t shots_for(const RunOptions& o, const MachineProgram& p) { return o.shots != 0 ? o.shots : p.shots; }

}  // namespace

RunResult deft_run(const std::map<std::uint32_t, MachineProgram>& uniques, const DecodedBlob& blob, Session& session,
                   const RunOptions& options) {
  const EquivalenceReport& report = blob.report;
  const auto flags = report.unique_flags();
  const auto group_of = report.group_of();
  for (const auto& [idx, prog] : uniques) {
    if (idx >= flags.size() || !flags[idx]) {
      throw SchedulingError("program supplied for circuit " + std::to_string(idx) + ", which is not a representative");
    }
  }
  if (options.definitions) session.call_expect<AckMsg>(*options.definitions);

  RunResult out;
  out.runs.resize(report.circuit_count());
  const MachineProgram* current = nullptr;
  std::uint32_t current_group = 0;
  for (std::uint32_t idx : report.order()) {
    if (flags[idx]) {
      auto it = uniques.find(idx);
      if (it == uniques.end()) throw SchedulingError("no program for representative circuit " + std::to_string(idx));
      session.call_expect<AckMsg>(LoadCircuitMsg{idx, it->second});
      ++out.load_circuit_calls;
      current = &it->second;
      current_group = group_of[idx];
    } else if (current == nullptr || group_of[idx] != current_group) {
      throw SchedulingError("circuit " + std::to_string(idx) + " scheduled before its representative");
    }
    LoadParamsMsg params{idx, {}};
    const QubitWords& words = blob.table.circuits.at(idx);
    std::size_t used = words.size();
    while (used > 0 && words[used - 1].empty()) --used;
    params.banks.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(used));
    session.call_expect<AckMsg>(params);
    ++out.load_params_calls;
    out.runs[idx] = run_loaded(session, shots_for(options, *current), circuit_seed(options.seed, idx));
  }
  return out;
}

RunResult deft_run(const std::map<std::uint32_t, MachineProgram>& uniques, std::span<const std::uint8_t> blob,
                   Session& session, const RunOptions& options) {
  return deft_run(uniques, debinarize(blob), session, options);
}

RunResult baseline_run(std::span<const MachineProgram> programs, Session& session, const RunOptions& options) {
  if (options.definitions) session.call_expect<AckMsg>(*options.definitions);
  RunResult out;
  out.runs.resize(programs.size());
  for (std::uint32_t idx = 0; idx < programs.size(); ++idx) {
    session.call_expect<AckMsg>(LoadCircuitMsg{idx, programs[idx]});
    ++out.load_circuit_calls;
    out.runs[idx] = run_loaded(session, shots_for(options, programs[idx]), circuit_seed(options.seed, idx));
  }
  return out;
}

}  // namespace pce
