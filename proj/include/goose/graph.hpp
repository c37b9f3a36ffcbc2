#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "goose/node_set.hpp"

namespace goose {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Directed graph over embedded decision points with positive edge costs.
class DecisionGraph {
 public:
  struct Arc {
    int to = 0;
    double cost = 1.0;
  };

  DecisionGraph() = default;
  // One node per row of `points`.
  explicit DecisionGraph(Eigen::MatrixXd points);

  int num_nodes() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(int i) const { return points_.row(i); }

  int num_edges() const { return num_edges_; }
  void add_edge(int u, int v, double cost = 1.0);
  bool has_edge(int u, int v) const;

  const std::vector<Arc>& out(int u) const {
    return out_[static_cast<size_t>(u)];
  }
  const std::vector<Arc>& in(int v) const {
    return in_[static_cast<size_t>(v)];
  }

  // One-hop neighbors (either edge direction) of every node in `s`,
  // including `s` itself.
  NodeSet grow_by_neighbors(const NodeSet& s) const;

  // Plain-text persistence: `u v cost` per line for edges,
  // `id x1 ... xd` per line for nodes. Extra per-node columns (e.g. a
  // constraint value) are handled by the optional `extra` slot.
  void save_edges(std::ostream& os) const;
  void save_nodes(std::ostream& os,
                  const Eigen::VectorXd* extra = nullptr) const;
  static DecisionGraph load(std::istream& nodes, std::istream& edges,
                            Eigen::VectorXd* extra = nullptr);
  void save_files(const std::string& nodes_path, const std::string& edges_path,
                  const Eigen::VectorXd* extra = nullptr) const;
  static DecisionGraph load_files(const std::string& nodes_path,
                                  const std::string& edges_path,
                                  Eigen::VectorXd* extra = nullptr);

 private:
  Eigen::MatrixXd points_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  int num_edges_ = 0;
};

// Dijkstra from `source` over edges whose endpoints all lie in `within`.
// Returns per-node cost (kInf when unreachable). `backward` follows
// reversed edges, yielding cost-to-source maps.
Eigen::VectorXd dijkstra_costs(const DecisionGraph& g, int source,
                               const NodeSet& within, bool backward = false);

struct PathResult {
  double cost = kInf;
  std::vector<int> nodes;  // empty when no path
};

// Minimum-cost path from `from` to `to` with every node on the path inside
// `within`. from == to yields cost 0 regardless of membership.
PathResult min_cost_path(const DecisionGraph& g, int from, int to,
                         const NodeSet& within);

}  // namespace goose
