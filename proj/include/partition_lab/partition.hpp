#pragma once

#include <vector>

#include "partition_lab/grid_domain.hpp"
#include "partition_lab/contour.hpp"
#include "partition_lab/nodal.hpp"
#include "partition_lab/spectral.hpp"

namespace plab {

/// k pairwise disjoint, non-empty, 4-connected parts of a grid's inside.
class KPartition {
public:
  KPartition(GridPtr grid, std::vector<Subdomain> parts);

  const DomainGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<Subdomain>& parts() const noexcept { return parts_; }
  int k() const noexcept { return static_cast<int>(parts_.size()); }

  /// Part index per grid cell; -1 for uncovered inside cells, -2 outside.
  std::vector<int> labels() const;
  std::size_t uncovered_count() const;
  /// Uncovered inside cells all touch (8-neighborhood) a covered cell.
  bool strong() const;

private:
  GridPtr grid_;
  std::vector<Subdomain> parts_;
};

/// Partition from a label per grid cell (-1 = uncovered); label values must
/// be 0..k-1 and each label set 4-connected.
KPartition partition_from_labels(const GridPtr& grid, const std::vector<int>& labels);

/// The nodal domains of a report as a partition (dead-band cells uncovered).
KPartition nodal_partition(const NodalReport& report, const GridPtr& grid);

struct SingularPoint {
  enum class Kind { Interior, Boundary };
  Point location;
  Kind kind = Kind::Interior;
  int arms = 0;   // nu for interior points, rho for boundary points
  int index = 0;  // nu - 2, or rho
};

struct Arc {
  Polyline points;
  double length = 0.0;
  bool closed = false;
};

struct BoundarySetGraph {
  std::vector<Arc> arcs;
  double boundary_length = 0.0;  // l(boundary of the domain)
  std::vector<SingularPoint> singular_points;
  int sigma = 0;
  double P = 0.0;  // sum of arc lengths + half the boundary length

  int interior_count() const;
  int boundary_count() const;
};

/// Boundary set of a strong partition: interfaces between parts traced on
/// the cell-edge graph, with singular points and their indices.
/// Throws NotStrong when the partition is not strong.
BoundarySetGraph boundary_graph(const KPartition& p);

struct PartGeometry {
  double lambda = 0.0;
  double area = 0.0;
  double cell_area = 0.0;
  int euler_char = 0;
  double inner_radius = 0.0;
  /// Length of the boundary of the part's closure in the partition.
  double boundary_length = 0.0;
  double diameter = 0.0;
};

struct PartitionReport {
  int k = 0;
  double h = 0.0;
  bool has_energy = false;
  double energy = 0.0;       // Lambda = max_j lambda_1(D_j)
  double mean_energy = 0.0;  // Lambda_1
  double min_energy = 0.0;
  std::vector<PartGeometry> parts;
  bool equipartition = false;
  double tol_eq = 0.0;
  bool strong = false;
  int euler_residual = 0;
  bool has_graph = false;
  BoundarySetGraph graph;
  GeometryReport domain;  // the partitioned domain
  /// Sum over parts of l(boundary of D_j).
  double part_boundary_total = 0.0;
};

struct ReportOptions {
  double tol_eq = 0.02;
  SolverOptions solver;
  bool eigen = true;  // false: geometry and graph only
};

PartitionReport partition_report(const KPartition& p, const ReportOptions& opt = {});

/// sum chi(D_j) - chi(Omega) - sigma/2 (sigma is even for the cell graph).
int euler_check(const KPartition& p, const BoundarySetGraph& g);
int euler_check(const KPartition& p);

/// Side of the regular hexagon of area a.
double hexagon_side(double a);

/// Flat-top hexagonal tiling anchored at the domain's bounding-box corner;
/// keeps the hexagons that lie inside the domain.
/// Throws DegenerateTiling when none fits.
KPartition hexagonal_partition(const GridPtr& grid, double a);

/// The same parts viewed as a partition of their union: a new grid whose
/// inside is the covered cells, with levels +-h/2 so contours run along cell
/// edges. The result covers its domain.
KPartition cover_view(const KPartition& p);

} // namespace plab
