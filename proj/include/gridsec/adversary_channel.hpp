#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridsec/secure_channel.hpp"

namespace gridsec {

enum class Direction { downlink, uplink };  // authority -> node, node -> authority
enum class MessageKind { init, request, report, nack };

/// A 40-byte wire message in flight between one node and the authority.
struct Envelope {
  std::size_t node = 0;
  Direction direction = Direction::downlink;
  MessageKind kind = MessageKind::request;
  WireBytes bytes{};
  int sent_step = 0;

  bool operator==(const Envelope&) const = default;
};

enum class ActionType { eavesdrop, drop, modify, replay, reorder, delay, dos, fake };

/// One scripted adversary action, active on steps [step, end_step].
/// Unset `node` / `direction` match every node / both directions.
struct ChannelAction {
  ActionType type = ActionType::eavesdrop;
  int step = 0;
  int end_step = 0;
  std::optional<std::size_t> node;
  std::optional<Direction> direction;
  WireBytes pattern{};      // modify: XOR mask; all-zero means flip `random_bits` random bits
  int random_bits = 1;
  int replay_from = 0;      // replay: step whose message is re-sent
  int delay_steps = 1;      // delay
  int window = 2;           // reorder: steps collected before release in reverse order
  WireBytes forged{};       // fake
  MessageKind forged_kind = MessageKind::report;
};

struct ChannelScript {
  std::vector<ChannelAction> actions;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdversaryLogEntry {
  int step = 0;
  std::size_t node = 0;
  Direction direction = Direction::downlink;
  MessageKind kind = MessageKind::request;
  std::string action;
  WireBytes bytes{};
};

std::string to_string(Direction d);
std::string to_string(MessageKind k);
std::string to_string(ActionType t);
ActionType action_from_string(const std::string& s);
std::string hex(const WireBytes& bytes);
WireBytes wire_from_hex(const std::string& s);

ChannelScript script_from_json(const nlohmann::json& j);
nlohmann::json script_to_json(const ChannelScript& s);

/// Scripted, deterministic network between the nodes and the authority.
class AdversaryChannel {
 public:
  explicit AdversaryChannel(ChannelScript script = {});

  /// Applies the actions scheduled for `step` to the messages sent in
  /// `direction` and returns what reaches the receivers, in delivery order.
  std::vector<Envelope> deliver(int step, Direction direction, std::vector<Envelope> in_flight);

  const std::vector<AdversaryLogEntry>& log() const noexcept { return log_; }
  const ChannelScript& script() const noexcept { return script_; }

 private:
  bool matches(const ChannelAction& a, int step, const Envelope& e) const;
  void record(int step, const Envelope& e, const std::string& action);

  ChannelScript script_;
  std::mt19937_64 rng_;
  std::vector<AdversaryLogEntry> log_;
  std::map<std::tuple<std::size_t, Direction, int>, Envelope> seen_;  // (node, direction, step)
  std::vector<std::pair<int, Envelope>> delayed_;                      // release step, message
  std::map<std::size_t, std::vector<Envelope>> reorder_buffer_;        // action index
};

}  // namespace gridsec
