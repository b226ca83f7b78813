#include "partition_lab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "partition_lab/constants.hpp"
#include "partition_lab/contour.hpp"
#include "partition_lab/errors.hpp"

namespace plab {

namespace {

constexpr int kDi[4] = {-1, 1, 0, 0};
constexpr int kDj[4] = {0, 0, -1, 1};

double sup_norm(std::span<const double> u, const DomainGrid& g) {
  double m = 0.0;
  for (CellIndex c : g.inside_cells()) m = std::max(m, std::abs(u[static_cast<std::size_t>(c)]));
  return m;
}

// Sign per inside cell after dead-band resolution; 0 = left between domains.
std::vector<int> resolve_signs(std::span<const double> u, const DomainGrid& g, double eps) {
  std::vector<int> sign(g.cell_count(), 0);
  std::vector<CellIndex> pending;
  for (CellIndex c : g.inside_cells()) {
    const double v = u[static_cast<std::size_t>(c)];
    if (v > eps) sign[c] = 1;
    else if (v < -eps) sign[c] = -1;
    else pending.push_back(c);
  }
  while (!pending.empty()) {
    std::vector<std::pair<CellIndex, int>> decided;
    std::vector<CellIndex> still;
    for (CellIndex c : pending) {
      const int i = g.col(c), j = g.row(c);
      double best = -1.0;
      for (int d = 0; d < 4; ++d) {
        const int a = i + kDi[d], b = j + kDj[d];
        if (!g.inside(a, b) || sign[g.index(a, b)] == 0) continue;
        best = std::max(best, std::abs(u[static_cast<std::size_t>(g.index(a, b))]));
      }
      if (best < 0.0) {
        still.push_back(c);
        continue;
      }
      int s = 0;
      bool tie = false;
      for (int d = 0; d < 4; ++d) {
        const int a = i + kDi[d], b = j + kDj[d];
        if (!g.inside(a, b) || sign[g.index(a, b)] == 0) continue;
        const CellIndex n = g.index(a, b);
        if (std::abs(u[static_cast<std::size_t>(n)]) < best * (1.0 - 1e-9)) continue;
        if (s == 0) s = sign[n];
        else if (s != sign[n]) tie = true;
      }
      decided.emplace_back(c, tie ? 0 : s);
    }
    if (decided.empty()) break;
    for (auto [c, s] : decided) sign[c] = s;
    // Tied cells stay at 0 for good; only cells still waiting loop again.
    pending = std::move(still);
  }
  return sign;
}

Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

} // namespace

std::vector<double> sample_product(const DomainGrid& g, int p, int q, Point ll, double w, double ht) {
  std::vector<double> f(g.cell_count(), 0.0);
  for (CellIndex c : g.inside_cells()) {
    const Point x = g.center(c);
    f[static_cast<std::size_t>(c)] = std::sin(p * std::numbers::pi * (x.x - ll.x) / w) *
                                     std::sin(q * std::numbers::pi * (x.y - ll.y) / ht);
  }
  return f;
}

NodalSet zero_contour(std::span<const double> u, const DomainGrid& g, double dead) {
  NodalSet ns;
  // corners ccw: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
  constexpr int ci[4] = {0, 1, 1, 0};
  constexpr int cj[4] = {0, 0, 1, 1};
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      CellIndex id[4];
      bool in[4];
      int n_in = 0;
      for (int k = 0; k < 4; ++k) {
        id[k] = g.index(i + ci[k], j + cj[k]);
        in[k] = g.inside(id[k]);
        n_in += in[k];
      }
      if (n_in == 0) continue;
      double v[4], phi[4];
      Point pos[4];
      for (int k = 0; k < 4; ++k) {
        pos[k] = g.center(id[k]);
        phi[k] = g.level(id[k]);
        if (in[k]) {
          const double x = u[static_cast<std::size_t>(id[k])];
          v[k] = std::abs(x) <= dead ? 0.0 : x;
        }
      }
      // Outside corners copy an inside neighbor so no crossing runs along the boundary.
      for (int k = 0; k < 4; ++k) {
        if (in[k]) continue;
        const int a = (k + 3) % 4, b = (k + 1) % 4;
        if (in[a] && in[b]) v[k] = 0.5 * (v[a] + v[b]);
        else if (in[a]) v[k] = v[a];
        else if (in[b]) v[k] = v[b];
        else v[k] = v[(k + 2) % 4];
      }
      int cls[4];
      for (int k = 0; k < 4; ++k) cls[k] = v[k] >= 0.0 ? 1 : 0;
      // edge e joins corner e and corner e+1
      std::vector<int> cut;
      for (int e = 0; e < 4; ++e)
        if (cls[e] != cls[(e + 1) % 4]) cut.push_back(e);
      if (cut.empty()) continue;
      auto crossing = [&](int e) {
        const int a = e, b = (e + 1) % 4;
        const double t = v[a] / (v[a] - v[b]);
        return std::pair{lerp(pos[a], pos[b], t), phi[a] + t * (phi[b] - phi[a])};
      };
      std::vector<std::pair<int, int>> links;
      if (cut.size() == 2) {
        links.emplace_back(cut[0], cut[1]);
      } else {
        // Saddle: the block-center average decides which corners connect.
        const int center = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= 0.0 ? 1 : 0;
        for (int k = 0; k < 4; ++k)
          if (cls[k] != center) links.emplace_back((k + 3) % 4, k);
      }
      for (auto [ea, eb] : links) {
        auto [pa, fa] = crossing(ea);
        auto [pb, fb] = crossing(eb);
        if (std::max(fa, fb) <= 0.0) continue;
        if (fa < 0.0) pa = lerp(pa, pb, fa / (fa - fb));
        else if (fb < 0.0) pb = lerp(pb, pa, fb / (fb - fa));
        if (distance(pa, pb) == 0.0) continue;
        ns.segments.push_back({pa, pb});
        ns.total_length += distance(pa, pb);
      }
    }
  }
  return ns;
}

NodalReport extract_nodal_partition(std::span<const double> u, const GridPtr& grid, int eigen_index,
                                    double lambda) {
  const DomainGrid& g = *grid;
  if (u.size() != g.cell_count())
    throw Error(ErrorCode::InvalidArgument, "extract_nodal_partition: size mismatch");
  const double top = sup_norm(u, g);
  if (!(top > 0.0)) throw Error(ErrorCode::InvalidEigenfunction, "eigenfunction vanishes identically");
  const double eps = 1e-6 * top;
  const auto sign = resolve_signs(u, g, eps);

  NodalReport rep;
  rep.eigen_index = eigen_index;
  rep.lambda = lambda;
  std::vector<CellIndex> pos, neg;
  for (CellIndex c : g.inside_cells()) {
    if (sign[c] > 0) pos.push_back(c);
    else if (sign[c] < 0) neg.push_back(c);
    else ++rep.dead_band_cells;
  }
  std::vector<std::pair<Subdomain, int>> all;
  for (auto& s : connected_components(pos, grid)) all.emplace_back(std::move(s), 1);
  for (auto& s : connected_components(neg, grid)) all.emplace_back(std::move(s), -1);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first.cells().front() < b.first.cells().front(); });
  for (auto& [s, sg] : all) {
    rep.domains.push_back(std::move(s));
    rep.signs.push_back(sg);
  }
  rep.mu = static_cast<int>(rep.domains.size());
  rep.nodal_set = rep.mu > 1 ? zero_contour(u, g, eps) : NodalSet{};
  return rep;
}

NodalReport extract_nodal_partition(const EigenPair& u, const GridPtr& grid, int eigen_index) {
  const Subdomain all = whole_domain(grid);
  if (u.vector.size() != all.size())
    throw Error(ErrorCode::InvalidArgument, "eigenpair does not cover the inside cells");
  const auto f = to_grid_function(all, u.vector);
  return extract_nodal_partition(f, grid, eigen_index, u.value);
}

double nodal_length(const NodalReport& r, std::optional<Disk> region) {
  if (!region) return r.nodal_set.total_length;
  double len = 0.0;
  for (const auto& s : r.nodal_set.segments) len += clipped_length(s[0], s[1], region->center, region->radius);
  return len;
}

bool nodal_set_hits(const NodalReport& r, const Disk& d) {
  return std::any_of(r.nodal_set.segments.begin(), r.nodal_set.segments.end(),
                     [&](const Segment& s) { return segment_point_distance(s[0], s[1], d.center) < d.radius; });
}

double clearance(const DomainGrid& g, Point x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    if (!g.inside(static_cast<CellIndex>(c))) best = std::min(best, distance(g.center(static_cast<CellIndex>(c)), x));
  return best;
}

CourantScan courant_pleijel_scan(const GridPtr& grid, int K, const SolverOptions& opt) {
  const Subdomain all = whole_domain(grid);
  if (K < 1 || static_cast<std::size_t>(K) > all.size())
    throw Error(ErrorCode::InvalidArgument, "courant_pleijel_scan: K out of range");
  const int m = static_cast<int>(std::min<std::size_t>(all.size(), static_cast<std::size_t>(K) + 6));
  const auto pairs = lowest_eigenpairs(assemble_dirichlet(all), m, opt);

  CourantScan scan;
  scan.pleijel_constant = constants().pleijel;
  for (int k = 1; k <= K; ++k) {
    int last = k;
    while (last < m && pairs[last].value - pairs[last - 1].value <= 1e-7 * pairs[last].value) ++last;
    const auto rep = extract_nodal_partition(pairs[k - 1], grid, k);
    CourantRow row{k, last, rep.mu, pairs[k - 1].value, static_cast<double>(rep.mu) / k, rep.mu > last};
    scan.violations += row.violation;
    scan.max_ratio = std::max(scan.max_ratio, row.ratio);
    scan.rows.push_back(row);
  }
  return scan;
}

std::vector<ProductMode> square_product_modes(int max_sum, const GridPtr& grid) {
  std::map<int, std::vector<std::pair<int, int>>> by_sum;
  for (int p = 1; p * p < max_sum; ++p)
    for (int q = 1; p * p + q * q <= max_sum; ++q) by_sum[p * p + q * q].emplace_back(p, q);
  std::vector<ProductMode> out;
  int index = 1;
  for (const auto& [s, pq] : by_sum) {
    for (auto [p, q] : pq) {
      ProductMode mode{p, q, index, static_cast<int>(pq.size()), p * q, 0};
      if (grid) mode.mu = extract_nodal_partition(sample_product(*grid, p, q), grid).mu;
      out.push_back(mode);
    }
    index += static_cast<int>(pq.size());
  }
  return out;
}

double square_pleijel_ratio(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "square_pleijel_ratio: k must be >= 1");
  // Every sum below (k+1)^2 + 1 is enumerated, which covers index k.
  const int bound = (k + 1) * (k + 1) + 1;
  int index = 1;
  std::map<int, int> best;
  std::map<int, int> count;
  for (int p = 1; p * p < bound; ++p)
    for (int q = 1; p * p + q * q <= bound; ++q) {
      best[p * p + q * q] = std::max(best[p * p + q * q], p * q);
      ++count[p * p + q * q];
    }
  for (const auto& [s, c] : count) {
    if (k < index + c) return static_cast<double>(best[s]) / k;
    index += c;
  }
  throw Error(ErrorCode::InvalidArgument, "square_pleijel_ratio: enumeration too short");
}

LocalLengthResult local_length_check(const NodalReport& r, const DomainGrid& g, Point x0, double R) {
  LocalLengthResult out;
  const std::string name = "local_length";
  if (r.nodal_set.segments.empty()) {
    out.bound = not_applicable(name, "empty nodal set");
    return out;
  }
  if (clearance(g, x0) < 1.1 * R) {
    out.bound = not_applicable(name, "ball B(x0, 1.1 R) not contained in the domain");
    return out;
  }
  const double j = constants().j;
  out.asymptotic_regime = r.lambda * R * R > 400.0 * j * j;
  BoundResult& b = out.bound;
  b.name = name;
  b.lhs = nodal_length(r, Disk{x0, R});
  b.rhs = 1e-2 * R * R * std::sqrt(r.lambda);
  b.tolerance = 10.0 * g.h();
  b.note = out.asymptotic_regime ? "asymptotic regime" : "below the asymptotic regime lambda R^2 > 400 j^2";
  settle(b);
  return out;
}

} // namespace plab
