#include "partition_lab/svg.hpp"

#include <algorithm>
#include <sstream>

#include "partition_lab/serialize.hpp"

namespace plab {

namespace {

constexpr double kPixels = 512.0;

struct View {
  Point lo;
  double scale = 1.0;
  double height = 0.0;

  std::string x(double v) const { return format_number((v - lo.x) * scale); }
  std::string y(double v) const { return format_number(height - (v - lo.y) * scale); }
};

std::string path_data(const View& v, const Polyline& pts, bool closed) {
  std::string d;
  for (std::size_t t = 0; t < pts.size(); ++t) {
    d += t ? " L" : "M";
    d += v.x(pts[t].x) + " " + v.y(pts[t].y);
  }
  if (closed) d += " Z";
  return d;
}

} // namespace

std::string render_partition_svg(const KPartition& p, const PartitionReport& report) {
  const DomainGrid& g = p.grid();
  const double h = g.h();
  const Point lo{g.origin().x - h, g.origin().y - h};
  const Point hi{g.origin().x + g.nx() * h, g.origin().y + g.ny() * h};
  View v;
  v.lo = lo;
  v.scale = kPixels / std::max(hi.x - lo.x, hi.y - lo.y);
  v.height = (hi.y - lo.y) * v.scale;
  const double width = (hi.x - lo.x) * v.scale;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
    << format_number(v.height) << "\" viewBox=\"0 0 " << format_number(width) << ' ' << format_number(v.height)
    << "\">\n";
  s << "<style>.outline{fill:none;stroke:#000;stroke-width:2}.cell{fill:none;stroke:#bbb;stroke-width:0.5}"
       ".arc{fill:none;stroke:#c00;stroke-width:1.5}.interior{fill:#06c}.boundary{fill:#090}</style>\n";

  s << "<g id=\"cells\">\n";
  for (const auto& part : p.parts()) {
    std::string d;
    for (const auto& loop : member_contours(g, part.mask())) {
      if (!d.empty()) d += ' ';
      d += path_data(v, loop.points, true);
    }
    s << "<path class=\"cell\" d=\"" << d << "\"/>\n";
  }
  s << "</g>\n";

  s << "<g id=\"outline\">\n";
  const Subdomain whole = whole_domain(p.grid_ptr());
  for (const auto& loop : member_contours(g, whole.mask()))
    s << "<path class=\"outline\" d=\"" << path_data(v, smoothed(loop.points, loop.pinned, true), true) << "\"/>\n";
  s << "</g>\n";

  if (report.has_graph) {
    s << "<g id=\"arcs\">\n";
    for (const auto& a : report.graph.arcs)
      s << "<path class=\"arc\" d=\"" << path_data(v, a.points, a.closed) << "\"/>\n";
    s << "</g>\n<g id=\"singular\">\n";
    for (const auto& sp : report.graph.singular_points) {
      const bool interior = sp.kind == SingularPoint::Kind::Interior;
      s << "<circle class=\"" << (interior ? "interior" : "boundary") << "\" cx=\"" << v.x(sp.location.x)
        << "\" cy=\"" << v.y(sp.location.y) << "\" r=\"4\"/>\n";
    }
    s << "</g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

} // namespace plab
