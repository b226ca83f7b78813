#include "partition_lab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "partition_lab/contour.hpp"
#include "partition_lab/errors.hpp"
#include "partition_lab/parallel.hpp"

namespace plab {

namespace {

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

} // namespace

// ---------------------------------------------------------------------------
// KPartition

KPartition::KPartition(GridPtr grid, std::vector<Subdomain> parts)
    : grid_(std::move(grid)), parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::InvalidArgument, "KPartition: no parts");
  std::vector<std::uint8_t> seen(grid_->cell_count(), 0);
  for (const auto& p : parts_) {
    if (p.grid_ptr() != grid_) throw Error(ErrorCode::InvalidArgument, "KPartition: part on another grid");
    if (p.empty()) throw Error(ErrorCode::InvalidArgument, "KPartition: empty part");
    for (CellIndex c : p.cells()) {
      if (seen[c]) throw Error(ErrorCode::InvalidArgument, "KPartition: parts overlap");
      seen[c] = 1;
    }
    if (connected_components(p.cells(), grid_).size() != 1)
      throw Error(ErrorCode::InvalidArgument, "KPartition: part is not 4-connected");
  }
}

std::vector<int> KPartition::labels() const {
  std::vector<int> lab(grid_->cell_count(), -2);
  for (CellIndex c : grid_->inside_cells()) lab[c] = -1;
  for (std::size_t j = 0; j < parts_.size(); ++j)
    for (CellIndex c : parts_[j].cells()) lab[c] = static_cast<int>(j);
  return lab;
}

std::size_t KPartition::uncovered_count() const {
  std::size_t covered = 0;
  for (const auto& p : parts_) covered += p.size();
  return grid_->inside_cells().size() - covered;
}

bool KPartition::strong() const {
  const auto lab = labels();
  const DomainGrid& g = *grid_;
  for (CellIndex c : g.inside_cells()) {
    if (lab[c] != -1) continue;
    bool touches = false;
    for (int dj = -1; dj <= 1 && !touches; ++dj)
      for (int di = -1; di <= 1 && !touches; ++di) {
        const int a = g.col(c) + di, b = g.row(c) + dj;
        touches = g.in_grid(a, b) && lab[g.index(a, b)] >= 0;
      }
    if (!touches) return false;
  }
  return true;
}

KPartition partition_from_labels(const GridPtr& grid, const std::vector<int>& labels) {
  if (labels.size() != grid->cell_count())
    throw Error(ErrorCode::InvalidArgument, "partition_from_labels: size mismatch");
  int k = 0;
  for (CellIndex c : grid->inside_cells()) k = std::max(k, labels[c] + 1);
  std::vector<std::vector<CellIndex>> cells(static_cast<std::size_t>(k));
  for (CellIndex c : grid->inside_cells())
    if (labels[c] >= 0) cells[static_cast<std::size_t>(labels[c])].push_back(c);
  std::vector<Subdomain> parts;
  for (auto& v : cells) parts.emplace_back(grid, std::move(v));
  return KPartition(grid, std::move(parts));
}

KPartition nodal_partition(const NodalReport& report, const GridPtr& grid) {
  return KPartition(grid, report.domains);
}

// ---------------------------------------------------------------------------
// Boundary set graph

int BoundarySetGraph::interior_count() const {
  return static_cast<int>(std::count_if(singular_points.begin(), singular_points.end(),
                                        [](const SingularPoint& s) { return s.kind == SingularPoint::Kind::Interior; }));
}

int BoundarySetGraph::boundary_count() const {
  return static_cast<int>(singular_points.size()) - interior_count();
}

namespace {

// Labels with uncovered cells absorbed into a neighboring part (smallest
// label first), pass by pass.
std::vector<int> filled_labels(const KPartition& p) {
  const DomainGrid& g = p.grid();
  auto lab = p.labels();
  std::vector<CellIndex> open;
  for (CellIndex c : g.inside_cells())
    if (lab[c] == -1) open.push_back(c);
  while (!open.empty()) {
    std::vector<std::pair<CellIndex, int>> take;
    std::vector<CellIndex> rest;
    for (CellIndex c : open) {
      int best = -1;
      for (int d = 0; d < 4; ++d) {
        const int a = g.col(c) + kDi[d], b = g.row(c) + kDj[d];
        if (!g.in_grid(a, b)) continue;
        const int l = lab[g.index(a, b)];
        if (l >= 0 && (best < 0 || l < best)) best = l;
      }
      if (best >= 0) take.emplace_back(c, best);
      else rest.push_back(c);
    }
    if (take.empty()) throw Error(ErrorCode::NotStrong, "uncovered cells away from every part");
    for (auto [c, l] : take) lab[c] = l;
    open = std::move(rest);
  }
  return lab;
}

struct CrackGraph {
  const DomainGrid& g;
  int cw;  // corners per row: corner (ci, cj), ci in [-1, nx-1]
  std::vector<int> lab;

  // Corner (ci, cj) sits between cells (ci, cj), (ci+1, cj), (ci, cj+1), (ci+1, cj+1).
  int corner(int ci, int cj) const { return (cj + 1) * cw + (ci + 1); }
  int ci(int id) const { return id % cw - 1; }
  int cj(int id) const { return id / cw - 1; }
  Point pos(int id) const {
    const Point o = g.origin();
    return {o.x + (ci(id) + 0.5) * g.h(), o.y + (cj(id) + 0.5) * g.h()};
  }
  int label(int i, int j) const { return g.in_grid(i, j) ? lab[g.index(i, j)] : -2; }
  bool in(int i, int j) const { return g.inside(i, j); }
  bool boundary_corner(int id) const {
    const int i = ci(id), j = cj(id);
    return !(in(i, j) && in(i + 1, j) && in(i, j + 1) && in(i + 1, j + 1));
  }
};

struct Edge {
  int a, b;   // corner ids
  Point mid;
};

} // namespace

BoundarySetGraph boundary_graph(const KPartition& p) {
  if (!p.strong()) throw Error(ErrorCode::NotStrong, "boundary_graph: partition is not strong");
  const DomainGrid& g = p.grid();
  CrackGraph cg{g, g.nx() + 1, filled_labels(p)};
  const int ncorners = cg.cw * (g.ny() + 1);

  std::vector<Edge> edges;
  const Point o = g.origin();
  const double h = g.h();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.inside(i, j)) continue;
      const int l = cg.label(i, j);
      if (g.inside(i + 1, j) && cg.label(i + 1, j) != l)
        edges.push_back({cg.corner(i, j - 1), cg.corner(i, j), {o.x + (i + 0.5) * h, o.y + j * h}});
      if (g.inside(i, j + 1) && cg.label(i, j + 1) != l)
        edges.push_back({cg.corner(i - 1, j), cg.corner(i, j), {o.x + i * h, o.y + (j + 0.5) * h}});
    }
  }
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(ncorners));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    incident[edges[e].a].push_back(e);
    incident[edges[e].b].push_back(e);
  }
  auto degree = [&](int c) { return static_cast<int>(incident[c].size()); };
  auto other = [&](int e, int c) { return edges[e].a == c ? edges[e].b : edges[e].a; };
  auto interior_singular = [&](int c) { return degree(c) >= 3 && !cg.boundary_corner(c); };

  // Cluster interior junctions joined by chains of at most two crack edges.
  std::vector<int> parent(static_cast<std::size_t>(ncorners));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::uint8_t> used(edges.size(), 0);
  struct Chain {
    int start;
    std::vector<int> edges;
  };
  std::vector<Chain> chains;  // merged away inside clusters
  for (int c = 0; c < ncorners; ++c) {
    if (!interior_singular(c)) continue;
    for (int e1 : incident[c]) {
      if (used[e1]) continue;
      const int c1 = other(e1, c);
      int end = -1;
      std::vector<int> path{e1};
      if (interior_singular(c1)) {
        end = c1;
      } else if (degree(c1) == 2 && !cg.boundary_corner(c1)) {
        const int e2 = incident[c1][0] == e1 ? incident[c1][1] : incident[c1][0];
        const int c2 = other(e2, c1);
        if (!used[e2] && interior_singular(c2)) {
          end = c2;
          path.push_back(e2);
        }
      }
      // Merging along a tree keeps the total index.
      if (end < 0 || find(end) == find(c)) continue;
      for (int e : path) used[e] = 1;
      parent[find(end)] = find(c);
      chains.push_back({c, std::move(path)});
    }
  }

  BoundarySetGraph out;
  out.boundary_length = measure(whole_domain(p.grid_ptr())).boundary_length;

  std::map<int, int> node_of;  // corner -> singular point
  std::map<int, std::vector<int>> members;
  for (int c = 0; c < ncorners; ++c)
    if (interior_singular(c)) members[find(c)].push_back(c);
  for (const auto& [root, cs] : members) {
    SingularPoint sp;
    sp.kind = SingularPoint::Kind::Interior;
    int dsum = 0;
    Point sum{};
    for (int c : cs) {
      dsum += degree(c);
      sum = sum + cg.pos(c);
    }
    sp.location = (1.0 / static_cast<double>(cs.size())) * sum;
    // Each internal chain removes one arm at both of its ends.
    sp.arms = dsum - 2 * (static_cast<int>(cs.size()) - 1);
    sp.index = sp.arms - 2;
    for (int c : cs) node_of[c] = static_cast<int>(out.singular_points.size());
    out.singular_points.push_back(sp);
  }
  for (int c = 0; c < ncorners; ++c) {
    if (!cg.boundary_corner(c) || degree(c) == 0) continue;
    SingularPoint sp;
    sp.kind = SingularPoint::Kind::Boundary;
    sp.arms = degree(c);
    sp.index = sp.arms;
    // Average of the boundary crossings around the corner.
    const int i = cg.ci(c), j = cg.cj(c);
    const int bi[4] = {i, i + 1, i + 1, i}, bj[4] = {j, j, j + 1, j + 1};
    Point sum{};
    int n = 0;
    for (int k = 0; k < 4; ++k) {
      const int a = (k + 1) % 4;
      const bool ia = cg.in(bi[k], bj[k]), ib = cg.in(bi[a], bj[a]);
      if (ia == ib) continue;
      const CellIndex cin = ia ? g.index(bi[k], bj[k]) : g.index(bi[a], bj[a]);
      const CellIndex cout = ia ? g.index(bi[a], bj[a]) : g.index(bi[k], bj[k]);
      sum = sum + crack_crossing(g, cin, cout);
      ++n;
    }
    sp.location = n > 0 ? (1.0 / n) * sum : cg.pos(c);
    node_of[c] = static_cast<int>(out.singular_points.size());
    out.singular_points.push_back(sp);
  }

  for (const auto& ch : chains) {
    Arc arc;
    int c = ch.start;
    arc.points.push_back(cg.pos(c));
    for (int e : ch.edges) {
      c = other(e, c);
      arc.points.push_back(cg.pos(c));
    }
    arc.length = polyline_length(arc.points, false);
    out.arcs.push_back(std::move(arc));
  }

  const std::vector<std::uint8_t> no_pins;
  auto finish = [&](Arc& arc) {
    arc.length = polyline_length(smoothed(arc.points, no_pins, arc.closed), arc.closed);
    out.arcs.push_back(std::move(arc));
  };
  for (int c = 0; c < ncorners; ++c) {
    if (!node_of.count(c)) continue;
    for (int e0 : incident[c]) {
      if (used[e0]) continue;
      used[e0] = 1;
      Arc arc;
      arc.points.push_back(out.singular_points[node_of[c]].location);
      arc.points.push_back(edges[e0].mid);
      int cur = other(e0, c);
      int last = e0;
      while (!node_of.count(cur)) {
        int next = -1;
        for (int e : incident[cur])
          if (e != last && !used[e]) next = e;
        if (next < 0) break;
        used[next] = 1;
        arc.points.push_back(edges[next].mid);
        cur = other(next, cur);
        last = next;
      }
      arc.points.push_back(node_of.count(cur) ? out.singular_points[node_of[cur]].location : cg.pos(cur));
      finish(arc);
    }
  }
  // Closed interfaces without singular points.
  for (int e0 = 0; e0 < static_cast<int>(edges.size()); ++e0) {
    if (used[e0]) continue;
    used[e0] = 1;
    Arc arc;
    arc.closed = true;
    arc.points.push_back(edges[e0].mid);
    int cur = edges[e0].b, last = e0;
    for (;;) {
      int next = -1;
      for (int e : incident[cur])
        if (e != last && !used[e]) next = e;
      if (next < 0) break;
      used[next] = 1;
      arc.points.push_back(edges[next].mid);
      cur = other(next, cur);
      last = next;
    }
    finish(arc);
  }

  for (const auto& s : out.singular_points) out.sigma += s.index;
  for (const auto& a : out.arcs) out.P += a.length;
  out.P += 0.5 * out.boundary_length;
  return out;
}

int euler_check(const KPartition& p, const BoundarySetGraph& graph) {
  int sum = 0;
  for (const auto& part : p.parts()) sum += euler_characteristic(p.grid(), part.mask());
  const int chi = euler_characteristic(p.grid(), whole_domain(p.grid_ptr()).mask());
  return sum - chi - graph.sigma / 2;
}

int euler_check(const KPartition& p) { return euler_check(p, boundary_graph(p)); }

PartitionReport partition_report(const KPartition& p, const ReportOptions& opt) {
  PartitionReport r;
  r.k = p.k();
  r.h = p.grid().h();
  r.tol_eq = opt.tol_eq;
  r.strong = p.strong();
  r.domain = measure(whole_domain(p.grid_ptr()));
  r.parts.resize(static_cast<std::size_t>(p.k()));
  parallel_for(r.parts.size(), [&](std::size_t j) {
    const Subdomain& part = p.parts()[j];
    const GeometryReport geo = measure(part);
    PartGeometry& pg = r.parts[j];
    pg.area = geo.area;
    pg.cell_area = geo.cell_area;
    pg.euler_char = geo.euler_char;
    pg.inner_radius = geo.inner_radius;
    pg.boundary_length = geo.boundary_length;
    pg.diameter = geo.diameter;
    if (opt.eigen) pg.lambda = ground_energy(part, opt.solver);
  });
  if (r.strong && p.uncovered_count() > 0) {
    // Boundary lengths of the closures: uncovered cells join their neighbor part.
    const auto lab = filled_labels(p);
    std::vector<std::vector<CellIndex>> closure(r.parts.size());
    for (CellIndex c : p.grid().inside_cells()) closure[static_cast<std::size_t>(lab[c])].push_back(c);
    parallel_for(r.parts.size(), [&](std::size_t j) {
      r.parts[j].boundary_length = measure(Subdomain(p.grid_ptr(), std::move(closure[j]))).boundary_length;
    });
  }
  for (const auto& pg : r.parts) r.part_boundary_total += pg.boundary_length;
  if (opt.eigen) {
    r.has_energy = true;
    r.energy = 0.0;
    r.min_energy = r.parts.front().lambda;
    double sum = 0.0;
    for (const auto& pg : r.parts) {
      r.energy = std::max(r.energy, pg.lambda);
      r.min_energy = std::min(r.min_energy, pg.lambda);
      sum += pg.lambda;
    }
    r.mean_energy = sum / r.k;
    r.equipartition = r.strong && r.energy - r.min_energy <= opt.tol_eq * r.energy;
  }
  if (r.strong) {
    r.graph = boundary_graph(p);
    r.has_graph = true;
    r.euler_residual = euler_check(p, r.graph);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hexagonal tilings

double hexagon_side(double a) { return std::sqrt(2.0 * a / (3.0 * std::sqrt(3.0))); }

namespace {

// Bilinear interpolation of the level values at a point.
double level_at(const DomainGrid& g, Point x) {
  const double u = (x.x - g.origin().x) / g.h(), v = (x.y - g.origin().y) / g.h();
  const int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
  if (i < 0 || j < 0 || i + 1 >= g.nx() || j + 1 >= g.ny()) return -1.0;
  const double s = u - i, t = v - j;
  auto L = [&](int a, int b) { return g.level(g.index(a, b)); };
  return (1 - s) * (1 - t) * L(i, j) + s * (1 - t) * L(i + 1, j) + (1 - s) * t * L(i, j + 1) + s * t * L(i + 1, j + 1);
}

// Flat-top hexagon with circumradius s: closed when slack >= 0.
double hex_slack(Point c, double s, Point x) {
  const double dx = std::abs(x.x - c.x), dy = std::abs(x.y - c.y);
  const double r3 = std::sqrt(3.0);
  return std::min(0.5 * r3 * s - dy, r3 * s - r3 * dx - dy);
}

} // namespace

KPartition hexagonal_partition(const GridPtr& grid, double a) {
  const DomainGrid& g = *grid;
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "hexagonal_partition: area must be positive");
  const double h = g.h();
  if (a > static_cast<double>(g.inside_cells().size()) * h * h)
    throw Error(ErrorCode::DegenerateTiling, "hexagon area exceeds the domain area");

  double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
  for (CellIndex c = 0; c < static_cast<CellIndex>(g.cell_count()); ++c) {
    if (g.level(c) < 0.0) continue;
    const Point x = g.center(c);
    xmin = std::min(xmin, x.x);
    ymin = std::min(ymin, x.y);
    xmax = std::max(xmax, x.x);
    ymax = std::max(ymax, x.y);
  }
  const double s = hexagon_side(a);
  const double hy = 0.5 * std::sqrt(3.0) * s;
  const double eps = 1e-9 * s;

  std::vector<Point> centers;
  std::vector<std::vector<CellIndex>> cells;
  auto cell_range = [&](Point c, int& i0, int& i1, int& j0, int& j1) {
    i0 = std::max(0, static_cast<int>(std::floor((c.x - s - g.origin().x) / h)));
    i1 = std::min(g.nx() - 1, static_cast<int>(std::ceil((c.x + s - g.origin().x) / h)));
    j0 = std::max(0, static_cast<int>(std::floor((c.y - hy - g.origin().y) / h)));
    j1 = std::min(g.ny() - 1, static_cast<int>(std::ceil((c.y + hy - g.origin().y) / h)));
  };
  for (int col = 0;; ++col) {
    const double cx = xmin + s + 1.5 * s * col;
    if (cx - s > xmax) break;
    for (int row = 0;; ++row) {
      const double cy = ymin + hy + (col % 2 ? hy : 0.0) + 2.0 * hy * row;
      if (cy - hy > ymax) break;
      const Point c{cx, cy};
      bool ok = true;
      for (const Point v : {Point{cx - s, cy}, Point{cx + s, cy}, Point{cx - 0.5 * s, cy - hy},
                            Point{cx + 0.5 * s, cy - hy}, Point{cx - 0.5 * s, cy + hy}, Point{cx + 0.5 * s, cy + hy}})
        ok = ok && level_at(g, v) >= -1e-12 * h;
      if (!ok) continue;
      int i0, i1, j0, j1;
      cell_range(c, i0, i1, j0, j1);
      std::vector<CellIndex> mine;
      for (int j = j0; j <= j1 && ok; ++j)
        for (int i = i0; i <= i1 && ok; ++i) {
          const double sl = hex_slack(c, s, g.center(g.index(i, j)));
          if (sl > eps && !g.inside(i, j)) ok = false;
          if (sl >= -eps && g.inside(i, j)) mine.push_back(g.index(i, j));
        }
      if (!ok || mine.empty()) continue;
      centers.push_back(c);
      cells.push_back(std::move(mine));
    }
  }
  if (centers.empty()) throw Error(ErrorCode::DegenerateTiling, "no hexagon fits inside the domain");

  // Cells on shared edges go to the nearest center, lower index on ties.
  std::vector<int> owner(g.cell_count(), -1);
  for (int k = 0; k < static_cast<int>(centers.size()); ++k) {
    for (CellIndex c : cells[k]) {
      const int cur = owner[c];
      if (cur < 0 || distance(g.center(c), centers[k]) < distance(g.center(c), centers[cur]) - 1e-12 * h)
        owner[c] = k;
    }
  }
  return partition_from_labels(grid, owner);
}

KPartition cover_view(const KPartition& p) {
  const DomainGrid& g = p.grid();
  const auto lab = p.labels();
  std::vector<double> level(g.cell_count());
  for (std::size_t c = 0; c < level.size(); ++c) level[c] = lab[c] >= 0 ? 0.5 * g.h() : -0.5 * g.h();
  auto grid = std::make_shared<const DomainGrid>(g.origin(), g.h(), g.nx(), g.ny(), std::move(level), false);
  std::vector<Subdomain> parts;
  for (const auto& part : p.parts()) parts.emplace_back(grid, part.cells());
  return KPartition(grid, std::move(parts));
}

} // namespace plab
