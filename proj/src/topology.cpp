#include "meshsim/scenario/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

bool parse_double(const std::string& text, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_int(const std::string& text, long long& out) {
  try {
    std::size_t used = 0;
    out = std::stoll(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

double distance(const PlacedNode& a, const PlacedNode& b, double floor_height) {
  const double dz = (a.floor - b.floor) * floor_height;
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dz * dz);
}

}  // namespace

Topology Topology::from_coordinates(std::vector<PlacedNode> nodes, double floor_attenuation_db, double floor_height_m) {
  if (nodes.size() < 2) throw ConfigError("topology needs at least 2 nodes");
  if (floor_attenuation_db < 0.0) throw ConfigError("floor attenuation must be non-negative");
  if (floor_height_m < 0.0) throw ConfigError("floor height must be non-negative");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[i].id == nodes[j].id) throw ConfigError("duplicate node id " + std::to_string(nodes[i].id));
      if (distance(nodes[i], nodes[j], floor_height_m) <= 0.0) {
        throw ConfigError("nodes " + std::to_string(nodes[i].id) + " and " + std::to_string(nodes[j].id) +
                          " share a position");
      }
    }
  }
  Topology t;
  t.size_ = nodes.size();
  t.placed_ = std::move(nodes);
  t.floor_attenuation_db_ = floor_attenuation_db;
  t.floor_height_m_ = floor_height_m;
  return t;
}

Topology Topology::from_matrix(std::size_t n, std::vector<double> loss_db) {
  if (n < 2) throw ConfigError("topology needs at least 2 nodes");
  if (loss_db.size() != n * n) throw ConfigError("loss matrix must have n*n entries");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (loss_db[a * n + b] != loss_db[b * n + a]) {
        throw ConfigError("loss matrix asymmetric between " + std::to_string(a) + " and " + std::to_string(b));
      }
    }
  }
  Topology t;
  t.size_ = n;
  t.matrix_ = std::move(loss_db);
  return t;
}

int Topology::label(NodeId index) const {
  if (index >= size_) throw ConfigError("node index " + std::to_string(index) + " out of range");
  return placed_.empty() ? static_cast<int>(index) : placed_[index].id;
}

double Topology::loss_db(NodeId a, NodeId b, const PathLossParams& params) const {
  if (a >= size_ || b >= size_) throw ConfigError("node index out of range");
  if (a == b) return 0.0;
  if (!matrix_.empty()) return matrix_[static_cast<std::size_t>(a) * size_ + b];
  const PlacedNode& pa = placed_[a];
  const PlacedNode& pb = placed_[b];
  return path_loss_db(distance(pa, pb, floor_height_m_), params) +
         std::abs(pa.floor - pb.floor) * floor_attenuation_db_;
}

LinkModel Topology::link_model(const RadioParams& radio) const {
  LinkModel m;
  m.node_count = size_;
  m.loss_db.resize(size_ * size_);
  for (NodeId a = 0; a < size_; ++a) {
    for (NodeId b = 0; b < size_; ++b) m.loss_db[a * size_ + b] = loss_db(a, b, radio.path_loss);
  }
  m.shadowing_db = radio.shadowing_db;
  m.capture_db = radio.capture_db;
  m.sensitivity_1m_dbm = radio.sensitivity_1m_dbm;
  m.sensitivity_2m_dbm = radio.sensitivity_2m_dbm;
  m.validate();
  return m;
}

Topology load_topology(std::string_view document) {
  std::vector<std::string> errors;
  auto fail = [&](std::size_t line, const std::string& what) {
    errors.push_back("line " + std::to_string(line) + ": " + what);
  };

  std::istringstream in{std::string(document)};
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::string name;
  double floor_att = 15.0;
  double floor_height = 3.0;
  std::vector<PlacedNode> nodes;
  std::map<int, std::size_t> node_lines;
  std::size_t matrix_n = 0;
  std::size_t matrix_line = 0;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const std::vector<std::string> w = split_words(line);
    if (!header_seen) {
      header_seen = true;
      if (w.size() != 2 || w[0] != "meshsim-topology") {
        fail(line_no, "expected header 'meshsim-topology 1'");
        break;
      }
      if (w[1] != "1") {
        fail(line_no, "unsupported topology version " + w[1]);
        break;
      }
      continue;
    }
    if (matrix_n != 0 && rows.size() < matrix_n && w[0] != "loss" && w[0] != "node") {
      std::vector<double> row;
      bool ok = true;
      for (const std::string& cell : w) {
        double v = 0.0;
        if (!parse_double(cell, v) || v < 0.0) {
          fail(line_no, "invalid loss value '" + cell + "'");
          ok = false;
        }
        row.push_back(v);
      }
      if (ok && row.size() != matrix_n) {
        fail(line_no, "loss row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(matrix_n));
      }
      rows.push_back(std::move(row));
      row_lines.push_back(line_no);
      continue;
    }
    const std::string& key = w[0];
    if (key == "name") {
      name = trim(line.substr(4));
    } else if (key == "floor_attenuation_db" || key == "floor_height_m") {
      double v = 0.0;
      if (w.size() != 2 || !parse_double(w[1], v) || v < 0.0) {
        fail(line_no, key + " needs one non-negative number");
      } else {
        (key == "floor_attenuation_db" ? floor_att : floor_height) = v;
      }
    } else if (key == "node") {
      long long id = 0;
      long long floor = 0;
      double x = 0.0;
      double y = 0.0;
      if (w.size() != 5 || !parse_int(w[1], id) || !parse_int(w[2], floor) || !parse_double(w[3], x) ||
          !parse_double(w[4], y)) {
        fail(line_no, "expected 'node <id> <floor> <x> <y>'");
        continue;
      }
      if (id < 0 || id > 0x7FFE) {
        fail(line_no, "node id " + w[1] + " out of range");
        continue;
      }
      auto [it, fresh] = node_lines.emplace(static_cast<int>(id), line_no);
      if (!fresh) {
        fail(line_no, "duplicate node id " + w[1] + " (first defined on line " + std::to_string(it->second) + ")");
        continue;
      }
      nodes.push_back({static_cast<int>(id), static_cast<int>(floor), x, y});
    } else if (key == "loss") {
      long long n = 0;
      if (matrix_n != 0) {
        fail(line_no, "second loss matrix");
      } else if (w.size() != 2 || !parse_int(w[1], n) || n < 1) {
        fail(line_no, "expected 'loss <n>'");
      } else {
        matrix_n = static_cast<std::size_t>(n);
        matrix_line = line_no;
      }
    } else {
      fail(line_no, "unknown directive '" + key + "'");
    }
  }

  if (!header_seen) errors.push_back("line 1: missing header 'meshsim-topology 1'");
  if (!nodes.empty() && matrix_n != 0) {
    errors.push_back("line " + std::to_string(matrix_line) + ": node lines and a loss matrix cannot be mixed");
  }
  if (matrix_n != 0) {
    if (rows.size() != matrix_n) {
      errors.push_back("line " + std::to_string(matrix_line) + ": loss matrix declares " + std::to_string(matrix_n) +
                       " rows but " + std::to_string(rows.size()) + " were given");
    }
    const bool square = rows.size() == matrix_n &&
                        std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return r.size() == matrix_n; });
    if (square) {
      for (std::size_t a = 0; a < matrix_n; ++a) {
        if (rows[a][a] != 0.0) {
          errors.push_back("line " + std::to_string(row_lines[a]) + ": diagonal entry of node " + std::to_string(a) +
                           " must be 0");
        }
        for (std::size_t b = a + 1; b < matrix_n; ++b) {
          if (rows[a][b] != rows[b][a]) {
            errors.push_back("line " + std::to_string(row_lines[b]) + ": loss(" + std::to_string(a) + "," +
                             std::to_string(b) + ") != loss(" + std::to_string(b) + "," + std::to_string(a) + ")");
          }
        }
      }
    }
  }
  const std::size_t count = matrix_n != 0 ? matrix_n : nodes.size();
  if (header_seen && count < 2) errors.push_back("line " + std::to_string(line_no) + ": topology needs at least 2 nodes");
  if (!nodes.empty()) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (distance(nodes[i], nodes[j], floor_height) <= 0.0) {
          errors.push_back("line " + std::to_string(node_lines[nodes[j].id]) + ": node " + std::to_string(nodes[j].id) +
                           " shares the position of node " + std::to_string(nodes[i].id));
        }
      }
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid topology:";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }

  Topology t;
  if (matrix_n != 0) {
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    t = Topology::from_matrix(matrix_n, std::move(flat));
  } else {
    t = Topology::from_coordinates(std::move(nodes), floor_att, floor_height);
  }
  t.set_name(name);
  return t;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_topology(buf.str());
}

std::vector<std::vector<NodeId>> connectivity(const Topology& topology, const RadioParams& radio) {
  const std::size_t n = topology.size();
  std::vector<std::vector<NodeId>> adj(n);
  const double threshold = radio.sensitivity_1m_dbm + radio.link_margin_db;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a != b && radio.tx_power_dbm - topology.loss_db(a, b, radio.path_loss) >= threshold) adj[a].push_back(b);
    }
  }
  return adj;
}

std::vector<std::vector<std::optional<std::size_t>>> hop_matrix(const Topology& topology, const RadioParams& radio,
                                                                const std::vector<bool>& relay_mask) {
  const std::size_t n = topology.size();
  if (!relay_mask.empty() && relay_mask.size() != n) throw ConfigError("relay mask size mismatch");
  const auto adj = connectivity(topology, radio);
  std::vector<std::vector<std::optional<std::size_t>>> hops(n, std::vector<std::optional<std::size_t>>(n));
  for (NodeId src = 0; src < n; ++src) {
    auto& row = hops[src];
    row[src] = 0;
    std::deque<NodeId> frontier{src};
    while (!frontier.empty()) {
      const NodeId v = frontier.front();
      frontier.pop_front();
      if (v != src && !relay_mask.empty() && !relay_mask[v]) continue;
      for (NodeId w : adj[v]) {
        if (row[w]) continue;
        row[w] = *row[v] + 1;
        frontier.push_back(w);
      }
    }
  }
  return hops;
}

std::optional<std::size_t> hop_distance(const Topology& topology, const RadioParams& radio, NodeId a, NodeId b) {
  if (a >= topology.size() || b >= topology.size()) throw ConfigError("node index out of range");
  return hop_matrix(topology, radio)[a][b];
}

}  // namespace meshsim
