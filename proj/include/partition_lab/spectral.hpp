#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Sparse>

#include "partition_lab/grid_domain.hpp"

namespace plab {

/// 5-point Dirichlet Laplacian on a subdomain: 4/h^2 on the diagonal, -1/h^2
/// between 4-adjacent member cells. Neighbors outside the subdomain carry the
/// zero boundary value.
class DirichletOperator {
public:
  explicit DirichletOperator(Subdomain sub);

  const Subdomain& subdomain() const noexcept { return sub_; }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }
  std::size_t dof_count() const noexcept { return sub_.size(); }
  /// dof of a grid cell, or -1 when the cell is not in the subdomain.
  std::int32_t dof(CellIndex c) const;
  CellIndex cell(std::int32_t dof) const { return sub_.cells()[static_cast<std::size_t>(dof)]; }

private:
  Subdomain sub_;
  Eigen::SparseMatrix<double> matrix_;
};

DirichletOperator assemble_dirichlet(const Subdomain& sub);

struct EigenPair {
  double value = 0.0;
  /// Values on the subdomain cells (dof order), unit norm in h^2-weighted l2.
  std::vector<double> vector;
  double residual = 0.0;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5eed;
};

/// Lowest `m` eigenpairs, ascending. Block LOBPCG with a sparse Cholesky
/// preconditioner; results satisfy ||(L - lambda) u|| <= tol.
/// Throws NoConvergence when the iteration budget runs out.
std::vector<EigenPair> lowest_eigenpairs(const DirichletOperator& op, int m,
                                         const SolverOptions& opt = {});

/// Ground-state energy; checks that the ground vector has constant sign.
double ground_energy(const Subdomain& sub, const SolverOptions& opt = {});
EigenPair ground_state(const Subdomain& sub, const SolverOptions& opt = {});

/// lambda_k * A / (4 pi k), with k 1-based.
double weyl_ratio(double lambda_k, double area, int k);

/// Richardson extrapolation of an O(h^2) quantity from h and h/2.
inline double richardson(double at_h, double at_half_h) { return (4.0 * at_half_h - at_h) / 3.0; }

/// Closed-form spectrum of the 5-point stencil on an n x n interior grid of
/// the square [0, (n+1) h]^2: (4/h^2)(sin^2(p pi h / 2) + sin^2(q pi h / 2)).
double discrete_square_eigenvalue(int p, int q, double h);

/// Expand a dof vector to all grid cells (zero elsewhere).
std::vector<double> to_grid_function(const DirichletOperator& op, const std::vector<double>& v);
std::vector<double> to_grid_function(const Subdomain& sub, const std::vector<double>& v);

} // namespace plab
