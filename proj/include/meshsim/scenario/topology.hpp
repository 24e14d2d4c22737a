#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/radio/channel.hpp"
#include "meshsim/radio/phy.hpp"

namespace meshsim {

struct PlacedNode {
  int id = 0;  // label from the document
  int floor = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Radio parameters that turn a topology into a LinkModel.
struct RadioParams {
  double tx_power_dbm = 0.0;
  PathLossParams path_loss;
  double shadowing_db = 4.0;
  double capture_db = 10.0;
  double sensitivity_1m_dbm = -90.0;
  double sensitivity_2m_dbm = -85.0;
  /// Margin above 1M sensitivity for a link to count as a connectivity edge.
  double link_margin_db = 5.0;
};

/// Node set given either by coordinates (with floors) or by an explicit loss
/// matrix. Internally nodes are indexed 0..N-1 in document order.
class Topology {
 public:
  static Topology from_coordinates(std::vector<PlacedNode> nodes, double floor_attenuation_db = 15.0,
                                   double floor_height_m = 3.0);
  static Topology from_matrix(std::size_t n, std::vector<double> loss_db);

  std::size_t size() const { return size_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  bool has_coordinates() const { return !placed_.empty(); }
  const std::vector<PlacedNode>& placed() const { return placed_; }
  double floor_attenuation_db() const { return floor_attenuation_db_; }
  double floor_height_m() const { return floor_height_m_; }
  /// Document label of node `index`.
  int label(NodeId index) const;

  /// Path loss between two nodes under `params` (matrix entries are returned
  /// verbatim). Zero on the diagonal.
  double loss_db(NodeId a, NodeId b, const PathLossParams& params = {}) const;

  LinkModel link_model(const RadioParams& radio) const;

 private:
  std::string name_;
  std::size_t size_ = 0;
  std::vector<PlacedNode> placed_;
  std::vector<double> matrix_;
  double floor_attenuation_db_ = 15.0;
  double floor_height_m_ = 3.0;
};

/// Parses the line-oriented topology format. All problems found are reported
/// together in one ConfigError, each prefixed with its line number.
Topology load_topology(std::string_view document);
Topology load_topology_file(const std::string& path);

/// Undirected connectivity: an edge exists iff P_max - loss >= sensitivity +
/// margin, with no shadowing. adjacency[a] lists neighbours in index order.
std::vector<std::vector<NodeId>> connectivity(const Topology& topology, const RadioParams& radio);

/// Shortest hop count, or empty when unreachable.
std::optional<std::size_t> hop_distance(const Topology& topology, const RadioParams& radio, NodeId a, NodeId b);

/// All-pairs hop counts where intermediate nodes must be relays
/// (relay_mask empty = every node relays). Unreachable = nullopt.
std::vector<std::vector<std::optional<std::size_t>>> hop_matrix(const Topology& topology, const RadioParams& radio,
                                                                const std::vector<bool>& relay_mask = {});

}  // namespace meshsim
