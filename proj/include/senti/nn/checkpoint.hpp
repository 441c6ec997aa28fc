#pragma once

// Binary checkpoint, little-endian throughout:
//
//   "SENTLSTM"  u32 version  u32 scalar_bytes (4 or 8)
//   u64 V  u64 E  u64 H  u64 C  u64 max_len
//   f64 lstm_dropout  u8 lstm_dropout_enabled  f64 fc_dropout
//   7 x { u64 count, count scalars }   embedding, w_ih, w_hh, b_ih, b_hh, fc.w, fc.b
//   u8 has_adam  [u64 t, 7 x { u64 count, f64 m... }, 7 x { u64 count, f64 v... }]
//   3 x { u64 length, bytes }          vocabulary, vocabulary metadata, run config

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "senti/error.hpp"
#include "senti/nn/adam.hpp"
#include "senti/nn/model.hpp"

namespace senti::nn {

inline constexpr char kCheckpointMagic[8] = {'S', 'E', 'N', 'T', 'L', 'S', 'T', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public InputError {
 public:
  using InputError::InputError;
};

template <class T>
struct Checkpoint {
  ModelParams<T> params;
  std::optional<AdamState> adam;
  std::string vocab;
  std::string vocab_meta;
  std::string config;
};

namespace detail {

class Writer {
 public:
  void u8(std::uint8_t x) { buf_.push_back(static_cast<char>(x)); }
  void u32(std::uint32_t x) {
    for (int b = 0; b < 4; ++b) u8(static_cast<std::uint8_t>(x >> (8 * b)));
  }
  void u64(std::uint64_t x) {
    for (int b = 0; b < 8; ++b) u8(static_cast<std::uint8_t>(x >> (8 * b)));
  }
  void f32(float x) { u32(std::bit_cast<std::uint32_t>(x)); }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void bytes(const std::string& s) {
    u64(s.size());
    buf_ += s;
  }
  template <class T>
  void scalar(T x) {
    if constexpr (sizeof(T) == 4) f32(static_cast<float>(x));
    else f64(static_cast<double>(x));
  }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string data) : buf_(std::move(data)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t x = 0;
    for (int b = 0; b < 4; ++b) x |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf_[pos_++])) << (8 * b);
    return x;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int b = 0; b < 8; ++b) x |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf_[pos_++])) << (8 * b);
    return x;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  double scalar(std::uint32_t width) { return width == 4 ? static_cast<double>(f32()) : f64(); }
  std::string bytes() {
    const auto n = u64();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == buf_.size(); }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > buf_.size() - pos_) throw CheckpointError("checkpoint is truncated");
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class T>
std::string checkpoint_serialize(const Checkpoint<T>& ck) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  detail::Writer w;
  for (char c : kCheckpointMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kCheckpointVersion);
  w.u32(sizeof(T));
  const auto& cfg = ck.params.config;
  for (auto d : {cfg.vocab_size, cfg.embed_dim, cfg.hidden_dim, cfg.num_classes, cfg.max_len}) w.u64(d);
  w.f64(cfg.lstm_dropout);
  w.u8(cfg.lstm_dropout_enabled ? 1 : 0);
  w.f64(cfg.fc_dropout);
  for (auto arr : ck.params.arrays()) {
    w.u64(arr.size());
    for (T x : arr) w.scalar(x);
  }
  w.u8(ck.adam ? 1 : 0);
  if (ck.adam) {
    w.u64(ck.adam->t);
    for (const auto* moments : {&ck.adam->m, &ck.adam->v})
      for (const auto& arr : *moments) {
        w.u64(arr.size());
        for (double x : arr) w.f64(x);
      }
  }
  w.bytes(ck.vocab);
  w.bytes(ck.vocab_meta);
  w.bytes(ck.config);
  return w.str();
}

// Parses a checkpoint, converting stored scalars to T. When `expect` is given
// its dimensions must match the header.
template <class T>
Checkpoint<T> checkpoint_deserialize(std::string data, const ModelConfig* expect = nullptr) {
  detail::Reader r(std::move(data));
  if (r.raw(8) != std::string(kCheckpointMagic, 8)) throw CheckpointError("not a checkpoint file (bad magic)");
  const auto version = r.u32();
  if (version != kCheckpointVersion)
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  const auto width = r.u32();
  if (width != 4 && width != 8) throw CheckpointError("checkpoint scalar width must be 4 or 8");
  ModelConfig cfg;
  cfg.vocab_size = r.u64();
  cfg.embed_dim = r.u64();
  cfg.hidden_dim = r.u64();
  cfg.num_classes = r.u64();
  cfg.max_len = r.u64();
  cfg.lstm_dropout = r.f64();
  cfg.lstm_dropout_enabled = r.u8() != 0;
  cfg.fc_dropout = r.f64();
  if (expect) {
    auto dims = [](const ModelConfig& c) {
      return std::array{c.vocab_size, c.embed_dim, c.hidden_dim, c.num_classes};
    };
    if (dims(cfg) != dims(*expect))
      throw CheckpointError("checkpoint dimension mismatch: file has V=" + std::to_string(cfg.vocab_size) +
                            " E=" + std::to_string(cfg.embed_dim) + " H=" + std::to_string(cfg.hidden_dim) +
                            " C=" + std::to_string(cfg.num_classes));
  }
  // Reject impossible headers before allocating for them.
  const std::uint64_t limit = r.remaining() / width;
  for (auto d : {cfg.vocab_size, cfg.embed_dim, cfg.hidden_dim, cfg.num_classes})
    if (d == 0 || d > limit) throw CheckpointError("checkpoint is truncated or has a corrupt header");
  if (count_parameters(cfg.vocab_size, cfg.embed_dim, cfg.hidden_dim, cfg.num_classes) > limit)
    throw CheckpointError("checkpoint is truncated");
  Checkpoint<T> ck;
  ck.params = ModelParams<T>::zeros(cfg);
  auto arrays = ck.params.arrays();
  for (std::size_t a = 0; a < kNumArrays; ++a) {
    const auto n = r.u64();
    if (n != arrays[a].size())
      throw CheckpointError(std::string("checkpoint dimension mismatch in ") + kArrayNames[a] + ": header implies " +
                            std::to_string(arrays[a].size()) + " values, file has " + std::to_string(n));
    for (auto& x : arrays[a]) x = static_cast<T>(r.scalar(width));
  }
  if (r.u8() != 0) {
    AdamState st = AdamState::for_params(ck.params);
    st.t = r.u64();
    for (auto* moments : {&st.m, &st.v})
      for (std::size_t a = 0; a < kNumArrays; ++a) {
        if (r.u64() != (*moments)[a].size())
          throw CheckpointError(std::string("checkpoint optimizer state mismatch in ") + kArrayNames[a]);
        for (auto& x : (*moments)[a]) x = r.f64();
      }
    ck.adam = std::move(st);
  }
  ck.vocab = r.bytes();
  ck.vocab_meta = r.bytes();
  ck.config = r.bytes();
  if (!r.at_end()) throw CheckpointError("checkpoint has trailing bytes");
  return ck;
}

template <class T>
void checkpoint_save(const std::string& path, const Checkpoint<T>& ck) {
  const auto bytes = checkpoint_serialize(ck);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing checkpoint: " + path);
}

template <class T>
Checkpoint<T> checkpoint_load(const std::string& path, const ModelConfig* expect = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_deserialize<T>(ss.str(), expect);
}

}  // namespace senti::nn
