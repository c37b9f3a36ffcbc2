#include "goose/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace goose {

DecisionGraph::DecisionGraph(Eigen::MatrixXd points)
    : points_(std::move(points)),
      out_(static_cast<size_t>(points_.rows())),
      in_(static_cast<size_t>(points_.rows())) {}

void DecisionGraph::add_edge(int u, int v, double cost) {
  if (u < 0 || u >= num_nodes() || v < 0 || v >= num_nodes())
    throw std::invalid_argument("add_edge: node index out of range");
  if (!(cost > 0.0)) throw std::invalid_argument("add_edge: cost must be > 0");
  out_[static_cast<size_t>(u)].push_back({v, cost});
  in_[static_cast<size_t>(v)].push_back({u, cost});
  ++num_edges_;
}

bool DecisionGraph::has_edge(int u, int v) const {
  for (const Arc& a : out_[static_cast<size_t>(u)])
    if (a.to == v) return true;
  return false;
}

NodeSet DecisionGraph::grow_by_neighbors(const NodeSet& s) const {
  NodeSet r = s;
  for (int u : s.indices()) {
    for (const Arc& a : out(u)) r.insert(a.to);
    for (const Arc& a : in(u)) r.insert(a.to);
  }
  return r;
}

void DecisionGraph::save_edges(std::ostream& os) const {
  os.precision(17);
  for (int u = 0; u < num_nodes(); ++u)
    for (const Arc& a : out(u)) os << u << ' ' << a.to << ' ' << a.cost << '\n';
}

void DecisionGraph::save_nodes(std::ostream& os,
                               const Eigen::VectorXd* extra) const {
  os.precision(17);
  for (int i = 0; i < num_nodes(); ++i) {
    os << i;
    for (int d = 0; d < dim(); ++d) os << ' ' << points_(i, d);
    if (extra) os << ' ' << (*extra)(i);
    os << '\n';
  }
}

namespace {

[[noreturn]] void parse_fail(const char* what, int line) {
  throw std::runtime_error(std::string(what) + " at line " +
                           std::to_string(line));
}

}  // namespace

DecisionGraph DecisionGraph::load(std::istream& nodes, std::istream& edges,
                                  Eigen::VectorXd* extra) {
  std::vector<std::vector<double>> rows;
  std::vector<double> extra_vals;
  std::string line;
  int lineno = 0;
  int width = -1;
  while (std::getline(nodes, line)) {
    ++lineno;
    std::istringstream ss(line);
    long long id = 0;
    if (!(ss >> id)) {
      if (ss.eof()) continue;  // blank line
      parse_fail("node table: bad id", lineno);
    }
    if (id != static_cast<long long>(rows.size()))
      parse_fail("node table: ids must be dense 0..N-1", lineno);
    std::vector<double> coords;
    double v = 0.0;
    while (ss >> v) coords.push_back(v);
    if (coords.empty()) parse_fail("node table: missing coordinates", lineno);
    if (width < 0) width = static_cast<int>(coords.size());
    if (static_cast<int>(coords.size()) != width)
      parse_fail("node table: ragged row", lineno);
    if (extra) {
      extra_vals.push_back(coords.back());
      coords.pop_back();
    }
    rows.push_back(std::move(coords));
  }
  if (rows.empty()) throw std::runtime_error("node table: empty");
  Eigen::MatrixXd pts(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t d = 0; d < rows[i].size(); ++d)
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          rows[i][d];
  DecisionGraph g(std::move(pts));
  if (extra) {
    extra->resize(static_cast<Eigen::Index>(extra_vals.size()));
    for (size_t i = 0; i < extra_vals.size(); ++i)
      (*extra)(static_cast<Eigen::Index>(i)) = extra_vals[i];
  }

  lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    std::istringstream ss(line);
    int u = 0, v = 0;
    double cost = 0.0;
    if (!(ss >> u)) {
      if (ss.eof()) continue;
      parse_fail("edge list: bad source", lineno);
    }
    if (!(ss >> v >> cost)) parse_fail("edge list: expected `u v cost`", lineno);
    if (u < 0 || u >= g.num_nodes() || v < 0 || v >= g.num_nodes())
      parse_fail("edge list: node index out of range", lineno);
    if (!(cost > 0.0)) parse_fail("edge list: cost must be > 0", lineno);
    g.add_edge(u, v, cost);
  }
  return g;
}

void DecisionGraph::save_files(const std::string& nodes_path,
                               const std::string& edges_path,
                               const Eigen::VectorXd* extra) const {
  std::ofstream nf(nodes_path);
  if (!nf) throw std::runtime_error("cannot write " + nodes_path);
  save_nodes(nf, extra);
  std::ofstream ef(edges_path);
  if (!ef) throw std::runtime_error("cannot write " + edges_path);
  save_edges(ef);
}

DecisionGraph DecisionGraph::load_files(const std::string& nodes_path,
                                        const std::string& edges_path,
                                        Eigen::VectorXd* extra) {
  std::ifstream nf(nodes_path);
  if (!nf) throw std::runtime_error("cannot read " + nodes_path);
  std::ifstream ef(edges_path);
  if (!ef) throw std::runtime_error("cannot read " + edges_path);
  return load(nf, ef, extra);
}

Eigen::VectorXd dijkstra_costs(const DecisionGraph& g, int source,
                               const NodeSet& within, bool backward) {
  const int n = g.num_nodes();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, kInf);
  if (source < 0 || source >= n || !within.contains(source)) return dist;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist(source) = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist(u)) continue;
    const auto& arcs = backward ? g.in(u) : g.out(u);
    for (const DecisionGraph::Arc& a : arcs) {
      if (!within.contains(a.to)) continue;
      const double nd = d + a.cost;
      if (nd < dist(a.to)) {
        dist(a.to) = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return dist;
}

PathResult min_cost_path(const DecisionGraph& g, int from, int to,
                         const NodeSet& within) {
  PathResult res;
  if (from == to) {
    res.cost = 0.0;
    res.nodes = {from};
    return res;
  }
  const int n = g.num_nodes();
  if (from < 0 || from >= n || to < 0 || to >= n) return res;
  if (!within.contains(from) || !within.contains(to)) return res;
  std::vector<double> dist(static_cast<size_t>(n), kInf);
  std::vector<int> parent(static_cast<size_t>(n), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[static_cast<size_t>(from)] = 0.0;
  pq.push({0.0, from});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    if (u == to) break;
    for (const DecisionGraph::Arc& a : g.out(u)) {
      if (!within.contains(a.to)) continue;
      const double nd = d + a.cost;
      if (nd < dist[static_cast<size_t>(a.to)]) {
        dist[static_cast<size_t>(a.to)] = nd;
        parent[static_cast<size_t>(a.to)] = u;
        pq.push({nd, a.to});
      }
    }
  }
  if (dist[static_cast<size_t>(to)] == kInf) return res;
  res.cost = dist[static_cast<size_t>(to)];
  for (int v = to; v != -1; v = parent[static_cast<size_t>(v)])
    res.nodes.push_back(v);
  std::reverse(res.nodes.begin(), res.nodes.end());
  return res;
}

}  // namespace goose
