#include "partition_lab/contour.hpp"

#include <algorithm>
#include <cmath>

namespace plab {

namespace {

constexpr int kDi[4] = {1, 0, -1, 0};
constexpr int kDj[4] = {0, 1, 0, -1};

} // namespace

Point crack_crossing(const DomainGrid& g, CellIndex in, CellIndex out) {
  const Point a = g.center(in), b = g.center(out);
  if (g.inside(out)) return 0.5 * (a + b);
  const double li = g.level(in), lo = g.level(out);
  double t = 0.5;
  if (li > 0.0 && lo <= 0.0) t = li / (li - lo);
  return a + t * (b - a);
}

std::vector<Contour> member_contours(const DomainGrid& g, std::span<const std::uint8_t> member) {
  auto is_member = [&](int i, int j) { return g.in_grid(i, j) && member[g.index(i, j)] != 0; };
  const int nx = g.nx(), ny = g.ny();
  std::vector<std::uint8_t> visited(g.cell_count(), 0);

  auto add_vertex = [&](Contour& loop, int i, int j, int d) {
    const int a = i + kDi[d], b = j + kDj[d];
    const CellIndex in = g.index(i, j);
    if (!g.in_grid(a, b)) {
      const Point c = g.center(in);
      loop.points.push_back({c.x + 0.5 * g.h() * kDi[d], c.y + 0.5 * g.h() * kDj[d]});
      loop.pinned.push_back(0);
      return;
    }
    const CellIndex out = g.index(a, b);
    loop.points.push_back(crack_crossing(g, in, out));
    loop.pinned.push_back(!g.inside(out) && g.exact_boundary() ? 1 : 0);
  };

  std::vector<Contour> loops;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!is_member(i, j)) continue;
      for (int d0 = 0; d0 < 4; ++d0) {
        if (is_member(i + kDi[d0], j + kDj[d0])) continue;
        if (visited[g.index(i, j)] & (1u << d0)) continue;
        Contour loop;
        int ci = i, cj = j, d = d0;
        while (!(visited[g.index(ci, cj)] & (1u << d))) {
          visited[g.index(ci, cj)] |= static_cast<std::uint8_t>(1u << d);
          add_vertex(loop, ci, cj, d);
          const int t = (d + 1) % 4;
          const int ali = ci + kDi[t], alj = cj + kDj[t];
          const int ari = ali + kDi[d], arj = alj + kDj[d];
          if (!is_member(ali, alj)) {
            d = t;
          } else if (!is_member(ari, arj)) {
            ci = ali;
            cj = alj;
          } else {
            ci = ari;
            cj = arj;
            d = (t + 2) % 4;
          }
        }
        loops.push_back(std::move(loop));
      }
    }
  }
  return loops;
}

Polyline smoothed(const Polyline& line, std::span<const std::uint8_t> pinned, bool closed, int passes) {
  Polyline cur = line;
  const std::size_t n = cur.size();
  if (n < 3) return cur;
  Polyline next(n);
  for (int p = 0; p < passes; ++p) {
    for (std::size_t k = 0; k < n; ++k) {
      if ((!closed && (k == 0 || k + 1 == n)) || (!pinned.empty() && pinned[k])) {
        next[k] = cur[k];
        continue;
      }
      const Point& a = cur[(k + n - 1) % n];
      const Point& b = cur[(k + 1) % n];
      next[k] = {0.25 * a.x + 0.5 * cur[k].x + 0.25 * b.x, 0.25 * a.y + 0.5 * cur[k].y + 0.25 * b.y};
    }
    std::swap(cur, next);
  }
  return cur;
}

double polyline_length(const Polyline& line, bool closed) {
  double len = 0.0;
  for (std::size_t k = 1; k < line.size(); ++k) len += distance(line[k - 1], line[k]);
  if (closed && line.size() > 1) len += distance(line.back(), line.front());
  return len;
}

double signed_area(const Polyline& loop) {
  double a = 0.0;
  for (std::size_t k = 0, n = loop.size(); k < n; ++k) {
    const Point& p = loop[k];
    const Point& q = loop[(k + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

double contour_length(const std::vector<Contour>& loops) {
  double len = 0.0;
  for (const auto& l : loops) len += polyline_length(smoothed(l.points, l.pinned, true), true);
  return len;
}

double contour_area(const std::vector<Contour>& loops) {
  double a = 0.0;
  for (const auto& l : loops) a += signed_area(l.points);
  return a;
}

double segment_point_distance(Point a, Point b, Point p) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return distance(a + t * ab, p);
}

double clipped_length(Point a, Point b, Point c, double r) {
  const Point d = b - a, f = a - c;
  const double qa = d.x * d.x + d.y * d.y;
  if (qa == 0.0) return 0.0;
  const double qb = 2.0 * (f.x * d.x + f.y * d.y);
  const double qc = f.x * f.x + f.y * f.y - r * r;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double s1 = std::max(0.0, (-qb - sq) / (2.0 * qa));
  const double s2 = std::min(1.0, (-qb + sq) / (2.0 * qa));
  if (s2 <= s1) return 0.0;
  return (s2 - s1) * std::sqrt(qa);
}

} // namespace plab
