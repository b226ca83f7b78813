#pragma once

#include <array>
#include <optional>
#include <vector>

#include "partition_lab/bound_result.hpp"
#include "partition_lab/grid_domain.hpp"
#include "partition_lab/spectral.hpp"

namespace plab {

using Segment = std::array<Point, 2>;

struct NodalSet {
  std::vector<Segment> segments;
  double total_length = 0.0;
};

struct NodalReport {
  int mu = 0;
  std::vector<Subdomain> domains;
  std::vector<int> signs;  // +1 / -1 per domain
  NodalSet nodal_set;
  int eigen_index = 0;
  double lambda = 0.0;
  /// Dead-band cells left between domains of opposite sign.
  int dead_band_cells = 0;
};

struct Disk {
  Point center;
  double radius = 0.0;
};

/// Sample sin(p pi (x-x0)/w) sin(q pi (y-y0)/ht) on the grid (zero outside).
std::vector<double> sample_product(const DomainGrid& grid, int p, int q, Point lower_left = {},
                                   double w = 1.0, double ht = 1.0);

/// Nodal partition of a grid function (indexed by grid cell; only inside
/// cells are read).
NodalReport extract_nodal_partition(std::span<const double> u, const GridPtr& grid,
                                    int eigen_index = 0, double lambda = 0.0);
/// Same for an eigenpair over the whole inside of `grid`.
NodalReport extract_nodal_partition(const EigenPair& u, const GridPtr& grid, int eigen_index = 0);

/// Zero contour of a grid function by marching squares.
NodalSet zero_contour(std::span<const double> u, const DomainGrid& grid, double dead_band);

double nodal_length(const NodalReport& report, std::optional<Disk> region = std::nullopt);

/// Whether some nodal segment meets the open disk.
bool nodal_set_hits(const NodalReport& report, const Disk& disk);

/// Largest radius r so that B(x, r) avoids every non-inside cell center.
double clearance(const DomainGrid& grid, Point x);

struct CourantRow {
  int k = 0;           // position in the spectrum, 1-based
  int index_bound = 0; // the index k that Courant's bound is checked against
  int mu = 0;
  double lambda = 0.0;
  double ratio = 0.0;  // mu / k
  bool violation = false;
};

struct CourantScan {
  std::vector<CourantRow> rows;
  int violations = 0;
  double max_ratio = 0.0;
  double pleijel_constant = 0.0;
};

/// Courant audit on numerical eigenvectors u_1..u_K. Eigenvalues within a
/// relative 1e-7 form one cluster; each vector of a cluster is checked
/// against the cluster's largest index.
CourantScan courant_pleijel_scan(const GridPtr& grid, int K, const SolverOptions& opt = {});

struct ProductMode {
  int p = 0, q = 0;
  int index = 0;      // smallest spectral index of (p^2+q^2) on the square
  int multiplicity = 0;
  int mu_exact = 0;   // p*q
  int mu = 0;         // counted on the grid
};

/// Product eigenfunctions sin(p pi x) sin(q pi y) of the unit square with
/// p^2 + q^2 <= max_sum, ordered by eigenvalue; indices from lattice
/// enumeration. When `grid` is non-null the nodal domains are counted on it.
std::vector<ProductMode> square_product_modes(int max_sum, const GridPtr& grid = nullptr);

/// Largest p*q over the eigenspace containing index k, divided by k, using
/// lattice enumeration of the square spectrum.
double square_pleijel_ratio(int k);

struct LocalLengthResult {
  BoundResult bound;
  bool asymptotic_regime = false;  // lambda R^2 > 400 j^2
};

/// Lower bound 1e-2 R^2 sqrt(lambda) for the nodal length inside B(x0, R).
LocalLengthResult local_length_check(const NodalReport& report, const DomainGrid& grid, Point x0,
                                     double R);

} // namespace plab
