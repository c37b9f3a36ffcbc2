#include "goose/worlds.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "goose/set_ops.hpp"

namespace goose {

Eigen::VectorXd sample_gp_prior(const KernelSpec& kernel,
                                const Eigen::MatrixXd& pts, Rng& rng) {
  Eigen::MatrixXd cov = kernel_matrix(kernel, pts);
  Eigen::VectorXd z(pts.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  double jitter = 1e-10 * kernel.variance;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success)
      return Eigen::MatrixXd(llt.matrixL()) * z;
    cov.diagonal().array() += jitter;
    jitter *= 100.0;
  }
  throw std::runtime_error("sample_gp_prior: covariance not factorizable");
}

namespace {

DecisionGraph bo_grid_graph(int dim, int n) {
  if (dim == 1) {
    Eigen::MatrixXd pts(n, 1);
    for (int i = 0; i < n; ++i)
      pts(i, 0) = -1.0 + 2.0 * i / static_cast<double>(n - 1);
    DecisionGraph g(std::move(pts));
    for (int i = 0; i + 1 < n; ++i) {
      g.add_edge(i, i + 1, 1.0);
      g.add_edge(i + 1, i, 1.0);
    }
    return g;
  }
  const int side = static_cast<int>(std::lround(std::sqrt(double(n))));
  if (side * side != n)
    throw std::invalid_argument("sample_gp_world: 2D grid needs square n");
  Eigen::MatrixXd pts(n, 2);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const int id = r * side + c;
      pts(id, 0) = c / static_cast<double>(side - 1);
      pts(id, 1) = r / static_cast<double>(side - 1);
    }
  DecisionGraph g(std::move(pts));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const int id = r * side + c;
      if (c + 1 < side) {
        g.add_edge(id, id + 1, 1.0);
        g.add_edge(id + 1, id, 1.0);
      }
      if (r + 1 < side) {
        g.add_edge(id, id + side, 1.0);
        g.add_edge(id + side, id, 1.0);
      }
    }
  return g;
}

}  // namespace

BoWorld sample_gp_world(int dim, const KernelSpec& kernel, int n, Rng& rng,
                        double noise_std, bool shared_objective) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("sample_gp_world: dim must be 1 or 2");
  if (n < 5) throw std::invalid_argument("sample_gp_world: n too small");
  DecisionGraph graph = bo_grid_graph(dim, n);

  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::VectorXd q = sample_gp_prior(kernel, graph.points(), rng);
    // Seed = the best of 5 evenly spaced candidate nodes; redraw weak worlds
    // so the initial safe set is comfortably feasible.
    int best = -1;
    for (int j = 0; j < 5; ++j) {
      const int cand = static_cast<int>(
          std::llround(j * (static_cast<long long>(n) - 1) / 4.0));
      if (best == -1 || q(cand) > q(best)) best = cand;
    }
    if (q(best) < 0.2) continue;
    BoWorld world{std::move(graph), Eigen::VectorXd(), Eigen::VectorXd(),
                  NodeSet(n), kernel, noise_std};
    world.true_q = q;
    world.true_f = shared_objective ? q : sample_gp_prior(kernel, world.graph.points(), rng);
    world.seed.insert(best);
    return world;
  }
  throw std::runtime_error(
      "sample_gp_world: no world with a viable seed after 200 draws");
}

int GridMdpWorld::transition_node(int cell_a, int cell_b) const {
  for (int node = 0; node < static_cast<int>(cell_from.size()); ++node)
    if (cell_from[node] == cell_a && cell_to[node] == cell_b) return node;
  return -1;
}

namespace {

struct TransitionLayout {
  std::vector<int> cell_from, cell_to;
  std::vector<int> pair_index;          // undirected pair id per transition
  std::vector<int> node_of;             // (cell*4 + dir) -> node or -1
  Eigen::MatrixXd midpoints;            // per transition, cell coordinates
  int num_pairs = 0;
};

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

TransitionLayout build_transitions(int w, int h) {
  TransitionLayout t;
  t.node_of.assign(static_cast<size_t>(w) * h * 4, -1);
  std::vector<double> mid_x, mid_y;
  // Undirected adjacencies in row-major order; both directed transitions of
  // a pair share one index into the midpoint table.
  std::vector<int> pair_of_edge;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int a = r * w + c;
      for (int dir = 0; dir < 4; ++dir) {
        const int nc = c + kDx[dir], nr = r + kDy[dir];
        if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
        const int b = nr * w + nc;
        const int node = static_cast<int>(t.cell_from.size());
        t.node_of[static_cast<size_t>(a) * 4 + dir] = node;
        t.cell_from.push_back(a);
        t.cell_to.push_back(b);
        if (a < b) {
          pair_of_edge.push_back(t.num_pairs);
          mid_x.push_back(0.5 * (c + nc));
          mid_y.push_back(0.5 * (r + nr));
          ++t.num_pairs;
        } else {
          pair_of_edge.push_back(-1);  // resolved below
        }
      }
    }
  // Second pass: point reverse transitions at their pair's midpoint id.
  t.pair_index.assign(t.cell_from.size(), -1);
  for (size_t node = 0; node < t.cell_from.size(); ++node) {
    const int a = t.cell_from[node], b = t.cell_to[node];
    if (a < b) {
      t.pair_index[node] = pair_of_edge[node];
    } else {
      const int ac = a % w, ar = a / w, bc = b % w, br = b / w;
      int dir = -1;
      for (int d = 0; d < 4; ++d)
        if (bc + kDx[d] == ac && br + kDy[d] == ar) dir = d;
      const int fwd = t.node_of[static_cast<size_t>(b) * 4 + dir];
      t.pair_index[node] = pair_of_edge[static_cast<size_t>(fwd)];
    }
  }
  t.midpoints.resize(static_cast<Eigen::Index>(t.cell_from.size()), 2);
  for (size_t node = 0; node < t.cell_from.size(); ++node) {
    const int p = t.pair_index[node];
    t.midpoints(static_cast<Eigen::Index>(node), 0) = mid_x[static_cast<size_t>(p)];
    t.midpoints(static_cast<Eigen::Index>(node), 1) = mid_y[static_cast<size_t>(p)];
  }
  return t;
}

GridMdpWorld build_grid_world(int w, int h) {
  GridMdpWorld world;
  world.width = w;
  world.height = h;
  TransitionLayout layout = build_transitions(w, h);
  world.cell_from = layout.cell_from;
  world.cell_to = layout.cell_to;
  world.graph = DecisionGraph(layout.midpoints);
  const int n = world.graph.num_nodes();
  for (int node = 0; node < n; ++node) {
    const int b = world.cell_to[node];
    const int bc = b % w, br = b / w;
    for (int dir = 0; dir < 4; ++dir) {
      const int nc = bc + kDx[dir], nr = br + kDy[dir];
      if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
      const int next = layout.node_of[static_cast<size_t>(b) * 4 + dir];
      world.graph.add_edge(node, next, 1.0);
    }
  }
  world.seed = NodeSet(n);
  return world;
}

Eigen::VectorXd sample_transition_q(const GridMdpWorld& world, Rng& rng) {
  // One GP draw per undirected pair at the shared midpoint, assigned to both
  // directions: q(a->b) = q(b->a) exactly.
  const TransitionLayout layout = build_transitions(world.width, world.height);
  Eigen::MatrixXd unique_mid(layout.num_pairs, 2);
  std::vector<int> seen(static_cast<size_t>(layout.num_pairs), 0);
  for (size_t node = 0; node < layout.cell_from.size(); ++node) {
    const int p = layout.pair_index[node];
    if (!seen[static_cast<size_t>(p)]) {
      unique_mid.row(p) = layout.midpoints.row(static_cast<Eigen::Index>(node));
      seen[static_cast<size_t>(p)] = 1;
    }
  }
  const KernelSpec kernel = KernelSpec::rbf(2.0, 1.0);
  Eigen::VectorXd pair_q = sample_gp_prior(kernel, unique_mid, rng);
  pair_q.array() += 0.6;
  Eigen::VectorXd q(world.graph.num_nodes());
  for (int node = 0; node < world.graph.num_nodes(); ++node)
    q(node) = pair_q(layout.pair_index[static_cast<size_t>(node)]);
  return q;
}

}  // namespace

bool choose_source_target(GridMdpWorld& world, Rng& rng) {
  const int n = world.graph.num_nodes();
  // Seed = the safest mutual transition pair.
  int best = -1;
  for (int node = 0; node < n; ++node)
    if (best == -1 || world.true_q(node) > world.true_q(best)) best = node;
  if (best == -1 || world.true_q(best) < 0.2) return false;
  const int reverse =
      world.transition_node(world.cell_to[best], world.cell_from[best]);
  world.seed = NodeSet(n);
  world.seed.insert(std::min(best, reverse));
  world.seed.insert(std::max(best, reverse));
  world.start_node = std::min(best, reverse);

  SafeContext ctx;
  ctx.graph = &world.graph;
  ctx.mode = SafeMode::direct;
  NodeSet reachable = baseline_sets(ctx, world.true_q, world.seed, 0.0);
  NodeSet candidates = reachable - world.seed;
  if (candidates.empty()) return false;

  // Prefer goals at least half the map away so the run is non-trivial.
  const Eigen::VectorXd hops =
      dijkstra_costs(world.graph, world.start_node, reachable);
  const double min_hops = 0.5 * std::max(world.width, world.height);
  std::vector<int> pool;
  for (int node : candidates.indices())
    if (hops(node) >= min_hops && hops(node) < kInf) pool.push_back(node);
  if (pool.empty())
    for (int node : candidates.indices())
      if (hops(node) < kInf) pool.push_back(node);
  if (pool.empty()) return false;
  world.goal_node = pool[rng.uniform_int(pool.size())];
  return true;
}

GridMdpWorld sample_grid_world(int w, int h, Rng& rng) {
  if (w < 3 || h < 3)
    throw std::invalid_argument("sample_grid_world: needs w,h >= 3");
  for (int attempt = 0; attempt < 50; ++attempt) {
    GridMdpWorld world = build_grid_world(w, h);
    world.true_q = sample_transition_q(world, rng);
    if (choose_source_target(world, rng)) return world;
  }
  throw std::runtime_error(
      "sample_grid_world: no viable source-target pair after 50 draws");
}

HeightWorld load_heightmap(std::istream& in, double grid_step,
                           double slope_threshold_deg) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> row;
    double v = 0.0;
    while (ss >> v) {
      if (!std::isfinite(v))
        throw std::runtime_error("heightmap: non-finite value at line " +
                                 std::to_string(lineno));
      row.push_back(v);
    }
    if (!ss.eof()) {
      std::string tail;
      ss.clear();
      ss >> tail;
      throw std::runtime_error("heightmap: non-numeric cell at line " +
                               std::to_string(lineno));
    }
    if (row.empty()) continue;  // blank line
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("heightmap: ragged row at line " +
                               std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 3 || rows.front().size() < 3)
    throw std::runtime_error("heightmap: grid must be at least 3x3");

  HeightWorld hw;
  hw.grid_step = grid_step;
  hw.slope_threshold_deg = slope_threshold_deg;
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  hw.altitudes.resize(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) hw.altitudes(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];

  hw.mdp = build_grid_world(w, h);
  const double slope_cap =
      std::tan(slope_threshold_deg * M_PI / 180.0);
  const int n = hw.mdp.graph.num_nodes();
  hw.mdp.true_q.resize(n);
  for (int node = 0; node < n; ++node) {
    const int a = hw.mdp.cell_from[static_cast<size_t>(node)];
    const int b = hw.mdp.cell_to[static_cast<size_t>(node)];
    const double ha = hw.altitudes(a / w, a % w);
    const double hb = hw.altitudes(b / w, b % w);
    hw.mdp.true_q(node) = slope_cap - std::abs(ha - hb) / grid_step;
  }
  return hw;
}

HeightWorld load_heightmap_file(const std::string& path, double grid_step,
                                double slope_threshold_deg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read heightmap " + path);
  return load_heightmap(in, grid_step, slope_threshold_deg);
}

RegretSeries epsilon_safe_regret(const BoWorld& world, const RunTrace& trace,
                                 double eps, SafeMode mode, double lipschitz) {
  SafeContext ctx;
  ctx.graph = &world.graph;
  ctx.kernel = world.kernel;
  ctx.mode = mode;
  ctx.lipschitz = lipschitz;
  const NodeSet region = baseline_sets(ctx, world.true_q, world.seed, eps);
  if (region.empty())
    throw std::invalid_argument("epsilon_safe_regret: empty baseline region");
  double best = -kInf;
  for (int i : region.indices()) best = std::max(best, world.true_f(i));

  // Merge the two evaluation streams by their shared step ordinal.
  std::vector<int> nodes(static_cast<size_t>(trace.total_evals()), -1);
  for (const auto& e : trace.constraint_evals)
    nodes[static_cast<size_t>(e.step)] = e.node;
  for (const auto& e : trace.objective_evals)
    nodes[static_cast<size_t>(e.step)] = e.node;

  RegretSeries series;
  double total = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double inst = std::max(0.0, best - world.true_f(nodes[i]));
    total += inst;
    series.instantaneous.push_back(inst);
    series.running_average.push_back(total / static_cast<double>(i + 1));
  }
  return series;
}

double empirical_lipschitz(const DecisionGraph& g, const KernelSpec& kernel,
                           const Eigen::VectorXd& values) {
  double best = 0.0;
  for (int u = 0; u < g.num_nodes(); ++u)
    for (const DecisionGraph::Arc& a : g.out(u)) {
      const double d = kernel.metric_at_distance(
          (g.points().row(u) - g.points().row(a.to)).norm());
      if (d <= 0.0) continue;
      best = std::max(best, std::abs(values(u) - values(a.to)) / d);
    }
  return best;
}

}  // namespace goose
