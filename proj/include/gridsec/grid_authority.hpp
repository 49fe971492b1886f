#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/secure_channel.hpp"
#include "gridsec/trust_node.hpp"

namespace gridsec {

struct AuthorityConfig {
  int resync_threshold = 3;    // consecutive failed exchanges before re-initialisation
  int timestamp_skew = 2;      // accepted |T - hour|
  int missing_timeout = 3;     // hours without a verified report before a node is flagged
  std::uint16_t model_controls = 0;
  NodeModelParams default_params;

  void validate() const;
};

enum class SessionPhase { none, awaiting_confirmation, established };

/// Authority-side view of one node.
struct AuthoritySession {
  std::size_t node = 0;
  NodeId node_id{};
  KeySet long_term;
  AeState init_state;
  SampleScale scale;
  std::optional<KeySet> session_keys;
  AeState down;
  AeState up;
  SessionPhase phase = SessionPhase::none;
  int last_verified_hour = -1;
  int consecutive_failures = 0;
  bool resync_due = false;
  NodeModelParams params;
  std::uint32_t last_alarm_status = 0;
  std::uint32_t last_metrics = 0;
  std::map<int, std::uint16_t> archive;  // verified samples by hour

  explicit AuthoritySession(const NodePersonalisation& p, std::size_t index);
};

/// Draws fresh (r_s, n_s, c_s), installs the derived session on the
/// authority side and returns the initialisation message under the node's
/// long-term keys and default counter.
CipherMessage dynamic_init(AuthoritySession& session, std::mt19937_64& rng, InitPlain* drawn = nullptr);

/// Encrypts a report request on the downlink stream.
CipherMessage request_report(AuthoritySession& session, std::uint16_t model_controls,
                             const NodeModelParams& params, std::uint32_t time);

struct VerifiedReport {
  std::size_t node = 0;
  NodeId node_id{};
  ReportPlain report;
  int receive_hour = 0;
};

enum class IngestStatus { verified, verification_failed, stale_timestamp, malformed, no_session };

struct IngestOutcome {
  IngestStatus status = IngestStatus::verification_failed;
  int counter_offset = -1;
  int recovered_samples = 0;  // archive entries for earlier hours filled from the history
  std::optional<VerifiedReport> report;
};

/// Tries the uplink counter offsets {0, +2, +4, +6} (only 0 for a pending
/// confirmation). A verified report fast-forwards the counter and fills the
/// sample archive from its history.
IngestOutcome ingest_reply(AuthoritySession& session, const CipherMessage& msg, int hour,
                           const AuthorityConfig& config);

std::string to_string(IngestStatus s);

struct ProtocolEvent {
  int hour = 0;
  std::size_t node = 0;
  std::string exchange;  // init | request | reply | nack
  int counter_offset = -1;
  std::string result;
  std::string action;
  int recovered_samples = 0;
};

enum class OutboundKind { init, request };

struct Outbound {
  OutboundKind kind = OutboundKind::request;
  CipherMessage msg;
};

struct PublishedMeasurements {
  Eigen::VectorXd z;
  std::vector<bool> present;
};

/// Runs one session per node and turns verified reports into measurement
/// vectors.
class GridAuthority {
 public:
  GridAuthority(const std::vector<NodePersonalisation>& fleet, std::uint64_t seed, AuthorityConfig config = {});

  Outbound outbound(std::size_t node, int hour);
  IngestOutcome ingest(std::size_t node, int hour, const CipherMessage& msg);
  void ingest_nack(std::size_t node, int hour);
  /// Closes the exchange window for `hour`: nodes without a verified reply
  /// accumulate a failure and may be scheduled for re-initialisation.
  void end_exchange(int hour);

  PublishedMeasurements publish(int hour) const;
  std::vector<std::size_t> missing_nodes(int hour) const;

  void set_params(std::size_t node, const NodeModelParams& params);
  std::size_t node_count() const noexcept { return sessions_.size(); }
  const AuthoritySession& session(std::size_t node) const { return sessions_.at(node); }
  const std::vector<ProtocolEvent>& events() const noexcept { return events_; }
  const AuthorityConfig& config() const noexcept { return config_; }

 private:
  std::vector<AuthoritySession> sessions_;
  std::vector<int> verified_hour_;  // hour of the latest verified reply per node
  std::vector<int> attempted_hour_;
  AuthorityConfig config_;
  std::mt19937_64 rng_;
  std::vector<ProtocolEvent> events_;
};

}  // namespace gridsec
