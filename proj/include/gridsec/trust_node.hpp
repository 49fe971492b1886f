#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "gridsec/secure_channel.hpp"

namespace gridsec {

using NodeId = std::array<std::uint8_t, 16>;

/// Values burned into a node at manufacture and shared with the authority.
struct NodePersonalisation {
  NodeId id{};
  Key enc_key{};
  Key mac_key{};
  AeState default_state;  // used for initialisation messages under the long-term keys
  SampleScale scale;

  KeySet long_term() const { return KeySet(enc_key, mac_key); }
};

/// Distinct ids, keys, nonces and counters for `count` nodes.
std::vector<NodePersonalisation> personalise_fleet(std::size_t count, std::mt19937_64& rng);

/// Cyclic buffer of the most recent 15-bit samples.
class SampleBuffer {
 public:
  void push(std::uint16_t code);
  std::size_t size() const noexcept { return size_; }
  bool full() const noexcept { return size_ == kHistoryDepth; }
  /// Newest first; slots beyond size() are zero.
  std::array<std::uint16_t, kHistoryDepth> newest_first() const noexcept;

 private:
  std::array<std::uint16_t, kHistoryDepth> ring_{};
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

enum class NodeReplyKind { report, nack };

struct NodeReply {
  NodeReplyKind kind = NodeReplyKind::nack;
  CipherMessage msg;  // meaningful for reports only
};

/// Emulated secure measurement node: samples into a cyclic buffer, runs a
/// delegated threshold check, and answers initialisation and report requests.
class TrustNode {
 public:
  explicit TrustNode(NodePersonalisation personalisation);

  /// One sampling step: quantise `value` into the buffer and advance the clock.
  void push_sample(double value);

  NodeReply handle_init(const CipherMessage& msg);
  NodeReply handle_request(const CipherMessage& msg);

  /// Delegated threshold on the buffer mean, or no valid authority contact
  /// for more than dos_timeout steps.
  bool local_alarm_check() const;
  bool threshold_alarm() const;
  bool dos_suspected() const noexcept;

  bool has_session() const noexcept { return session_.has_value(); }
  const NodeId& id() const noexcept { return personal_.id; }
  const SampleScale& scale() const noexcept { return personal_.scale; }
  const SampleBuffer& buffer() const noexcept { return buffer_; }
  std::uint32_t clock() const noexcept { return clock_; }
  const NodeModelParams& model_params() const noexcept { return params_; }
  std::uint16_t model_controls() const noexcept { return controls_; }
  /// Downlink offset used by the last accepted request (0 when in step).
  int last_request_offset() const noexcept { return last_offset_; }

  /// Session keys, for agreement checks in tests.
  std::optional<KeySet> session_keys() const;
  std::optional<AeState> downlink_state() const;
  std::optional<AeState> uplink_state() const;

 private:
  struct Session {
    KeySet keys;
    AeState down;
    AeState up;
  };

  CipherMessage build_report();
  double buffer_mean() const;
  double recent_mean() const;

  NodePersonalisation personal_;
  KeySet long_term_;
  std::optional<Session> session_;
  SampleBuffer buffer_;
  NodeModelParams params_;
  std::uint16_t controls_ = 0;
  std::uint32_t clock_ = 0;
  long samples_ = 0;
  long steps_since_contact_ = 0;
  bool resync_pending_ = false;
  bool dos_flag_ = false;  // latched for the next report
  int last_offset_ = 0;
  std::deque<Block> recent_inits_;
};

}  // namespace gridsec
