#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fairdiv/errors.hpp"
#include "fairdiv/solver.hpp"

namespace fairdiv {

namespace {

// Shared state for the grid search: lazily colored lattice points on the
// exponent grid z in [-M, M]^{n-1}, with the last agent's multiplier pinned
// to 1.
struct Grid {
  const ProbabilityOracle& oracle;
  int n;
  double log_eps;
  long long M;
  std::unordered_map<std::uint64_t, int> colors;

  std::uint64_t key(long long x, long long y) const {
    return (static_cast<std::uint64_t>(x + M) << 32) |
           static_cast<std::uint64_t>(y + M);
  }

  MultiplierVector beta_at(long long x, long long y) const {
    MultiplierVector beta(n, 1.0);
    beta[0] = std::exp(static_cast<double>(x) * log_eps);
    if (n == 3) beta[1] = std::exp(static_cast<double>(y) * log_eps);
    return beta;
  }

  ProbabilityVector probs(long long x, long long y) const {
    return oracle(beta_at(x, y));
  }

  // Most favored agent at the point, lowest index on ties.
  int color(long long x, long long y) {
    const auto it = colors.find(key(x, y));
    if (it != colors.end()) return it->second;
    const ProbabilityVector p = probs(x, y);
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (p[i] > p[best]) best = i;
    colors.emplace(key(x, y), best);
    return best;
  }

  double spread(long long x, long long y) const {
    const ProbabilityVector p = probs(x, y);
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return *mx - *mn;
  }
};

MultiplierVector best_candidate(Grid& g,
                                std::vector<std::pair<long long, long long>>
                                    candidates) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best = std::numeric_limits<double>::infinity();
  std::pair<long long, long long> where = candidates.front();
  for (const auto& c : candidates) {
    const double s = g.spread(c.first, c.second);
    if (s < best) {
      best = s;
      where = c;
    }
  }
  return g.beta_at(where.first, where.second);
}

MultiplierVector search_line(Grid& g) {
  // One dimension: agent 0's win probability rises monotonically with its
  // exponent, so the color along the line flips from 1 to 0 exactly once;
  // bisect for the flip.
  long long lo = -g.M, hi = g.M;
  int clo = g.color(lo, 0), chi = g.color(hi, 0);
  if (clo == chi) {
    // The q bound was too small to push the endpoints apart; scan for any
    // flip before giving up.
    long long flip = 0;
    bool found = false;
    for (long long x = -g.M; x < g.M && !found; ++x)
      if (g.color(x, 0) != g.color(x + 1, 0)) {
        flip = x;
        found = true;
      }
    if (!found)
      throw numerical_error(
          "sperner_grid_search: no color flip on the grid; the q bound is "
          "likely smaller than the true density bound");
    lo = flip;
    hi = flip + 1;
  } else {
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      if (g.color(mid, 0) == clo)
        lo = mid;
      else
        hi = mid;
    }
  }
  return best_candidate(g, {{lo, 0}, {hi, 0}});
}

// Triangles: each unit cell with base (x, y) splits along the diagonal
// (x, y) -- (x+1, y+1) into a lower triangle (base, east, far corner) and an
// upper one (base, north, far corner).
struct Tri {
  long long x, y;
  bool upper;
  bool operator==(const Tri& o) const {
    return x == o.x && y == o.y && upper == o.upper;
  }
};

struct Vertex {
  long long x, y;
  bool operator==(const Vertex& o) const { return x == o.x && y == o.y; }
};

std::array<Vertex, 3> tri_vertices(const Tri& t) {
  if (t.upper)
    return {Vertex{t.x, t.y}, Vertex{t.x, t.y + 1}, Vertex{t.x + 1, t.y + 1}};
  return {Vertex{t.x, t.y}, Vertex{t.x + 1, t.y}, Vertex{t.x + 1, t.y + 1}};
}

struct Edge {
  Vertex a, b;  // ordered so a < b lexicographically
};

Edge make_edge(Vertex u, Vertex v) {
  if (v.x < u.x || (v.x == u.x && v.y < u.y)) std::swap(u, v);
  return {u, v};
}

std::array<Edge, 3> tri_edges(const Tri& t) {
  const auto v = tri_vertices(t);
  return {make_edge(v[0], v[1]), make_edge(v[1], v[2]),
          make_edge(v[0], v[2])};
}

// The neighboring triangle across an edge, if it lies inside the box.
std::optional<Tri> neighbor(const Grid& g, const Tri& t, const Edge& e) {
  const long long dx = e.b.x - e.a.x, dy = e.b.y - e.a.y;
  Tri nb{};
  if (dx == 1 && dy == 1) {
    nb = Tri{t.x, t.y, !t.upper};  // across the diagonal, same cell
  } else if (dx == 1 && dy == 0) {
    // Horizontal edge: lower triangle's bottom or upper triangle's top.
    nb = t.upper ? Tri{e.a.x, e.a.y, false} : Tri{e.a.x, e.a.y - 1, true};
  } else {
    // Vertical edge: lower triangle's right or upper triangle's left.
    nb = t.upper ? Tri{e.a.x - 1, e.a.y, false} : Tri{e.a.x, e.a.y, true};
  }
  if (nb.x < -g.M || nb.x >= g.M || nb.y < -g.M || nb.y >= g.M)
    return std::nullopt;
  return nb;
}

bool is_door(Grid& g, const Edge& e) {
  const int ca = g.color(e.a.x, e.a.y);
  const int cb = g.color(e.b.x, e.b.y);
  return (ca == 0 && cb == 1) || (ca == 1 && cb == 0);
}

bool same_edge(const Edge& x, const Edge& y) {
  return x.a == y.a && x.b == y.b;
}

MultiplierVector search_plane(Grid& g) {
  // Boundary doors can only appear on the right and top sides of the box:
  // on the left and bottom sides the pinned agent dominates the depressed
  // one, so colors 0 and 1 respectively cannot occur there, while both
  // sides of every right/top lattice edge are colored 0 or 1.
  std::vector<std::pair<Tri, Edge>> entries;
  for (long long y = -g.M; y < g.M; ++y) {
    const Edge e = make_edge({g.M, y}, {g.M, y + 1});
    if (is_door(g, e)) entries.push_back({Tri{g.M - 1, y, false}, e});
  }
  for (long long x = -g.M; x < g.M; ++x) {
    const Edge e = make_edge({x, g.M}, {x + 1, g.M});
    if (is_door(g, e)) entries.push_back({Tri{x, g.M - 1, true}, e});
  }
  if (entries.empty())
    throw numerical_error(
        "sperner_grid_search: no boundary door; the q bound is likely "
        "smaller than the true density bound");

  const std::uint64_t step_cap =
      8ull * static_cast<std::uint64_t>(2 * g.M + 1) *
      static_cast<std::uint64_t>(2 * g.M + 1);
  std::vector<Edge> used_boundary;
  auto boundary_used = [&](const Edge& e) {
    for (const auto& u : used_boundary)
      if (same_edge(u, e)) return true;
    return false;
  };

  for (const auto& [start_tri, start_edge] : entries) {
    if (boundary_used(start_edge)) continue;
    used_boundary.push_back(start_edge);
    Tri t = start_tri;
    Edge in = start_edge;
    for (std::uint64_t steps = 0; steps < step_cap; ++steps) {
      const auto verts = tri_vertices(t);
      bool has0 = false, has1 = false, has2 = false;
      for (const auto& v : verts) {
        const int c = g.color(v.x, v.y);
        has0 |= c == 0;
        has1 |= c == 1;
        has2 |= c == 2;
      }
      if (has0 && has1 && has2) {
        // Panchromatic: candidates are the triangle corners plus the whole
        // cell's corners.
        std::vector<std::pair<long long, long long>> cand;
        for (const auto& v : verts) cand.push_back({v.x, v.y});
        cand.push_back({t.x, t.y});
        cand.push_back({t.x + 1, t.y});
        cand.push_back({t.x, t.y + 1});
        cand.push_back({t.x + 1, t.y + 1});
        return best_candidate(g, cand);
      }
      // Not panchromatic: exactly two door edges; leave through the other.
      Edge out = in;
      bool found_out = false;
      for (const auto& e : tri_edges(t)) {
        if (same_edge(e, in)) continue;
        if (is_door(g, e)) {
          out = e;
          found_out = true;
          break;
        }
      }
      if (!found_out) break;  // inconsistent coloring; try the next entry
      const auto nb = neighbor(g, t, out);
      if (!nb) {
        used_boundary.push_back(out);  // path exits the box
        break;
      }
      t = *nb;
      in = out;
    }
  }
  throw numerical_error(
      "sperner_grid_search: no panchromatic cell located; the q bound is "
      "likely smaller than the true density bound");
}

}  // namespace

MultiplierVector sperner_grid_search(const ProbabilityOracle& oracle,
                                     double delta, double q_bound) {
  const int n = oracle.size();
  if (n > 3)
    throw std::invalid_argument(
        "sperner_grid_search: the grid is exponential in the number of "
        "agents; only n <= 3 is supported");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(q_bound > 0.0)) throw std::invalid_argument("q_bound must be > 0");
  if (n == 1) return {1.0};

  Grid g{oracle,
         n,
         std::log1p(delta / (2.0 * n * q_bound)),
         static_cast<long long>(
             std::ceil(std::max(std::log(2.0 * q_bound), 0.0) /
                       std::log1p(delta / (2.0 * n * q_bound)))),
         {}};
  if (g.M == 0) g.M = 1;
  return n == 2 ? search_line(g) : search_plane(g);
}

}  // namespace fairdiv
