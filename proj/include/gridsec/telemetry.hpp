#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/adversary_channel.hpp"
#include "gridsec/grid_authority.hpp"
#include "gridsec/trust_node.hpp"

namespace gridsec {

struct TelemetryStep {
  PublishedMeasurements published;
  std::vector<std::size_t> missing_nodes;  // authority-side silence flags
  std::vector<bool> node_alarm;           // node-side local alarms
  int verified = 0;
  int rejected = 0;
};

/// Nodes, authority and channel stepped together once per hour: every node
/// samples, the authority solicits a report (or re-initialises), the channel
/// carries both legs, and the authority publishes what it verified.
class TelemetryNetwork {
 public:
  TelemetryNetwork(const std::vector<NodePersonalisation>& fleet, std::uint64_t authority_seed,
                   AuthorityConfig config = {}, ChannelScript script = {});

  TelemetryStep step(int hour, const Eigen::VectorXd& samples);

  const std::vector<TrustNode>& nodes() const noexcept { return nodes_; }
  TrustNode& node(std::size_t i) { return nodes_.at(i); }
  GridAuthority& authority() noexcept { return authority_; }
  const GridAuthority& authority() const noexcept { return authority_; }
  const AdversaryChannel& channel() const noexcept { return channel_; }

 private:
  std::vector<TrustNode> nodes_;
  GridAuthority authority_;
  AdversaryChannel channel_;
};

}  // namespace gridsec
