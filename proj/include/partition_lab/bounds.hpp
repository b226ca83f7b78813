#pragma once

#include <optional>
#include <string>
#include <vector>

#include "partition_lab/bound_result.hpp"
#include "partition_lab/constants.hpp"
#include "partition_lab/partition.hpp"

namespace plab {

/// Everything a bound may read. Bounds never recompute spectra.
struct AuditInput {
  PartitionReport partition;       // carries the domain geometry too
  std::optional<double> lk_upper;  // best energy found for this k
  std::optional<int> eigen_index;  // when the partition is nodal for u_k
};

/// Analytic dilation by t: lengths * t, areas * t^2, energies / t^2.
AuditInput dilated(const AuditInput& in, double t);

/// Flat-case quantities of the curvature-based lower bound: alpha = 0 gives
/// C = psi = pi and B = -2 pi chi.
struct SavoInputs {
  double alpha = 0.0;
  double D = 0.0;
  double B = 0.0;
  double C = 0.0;
  double psi = 0.0;
};

SavoInputs savo_flat_inputs(const GeometryReport& domain);

/// Registered bound ids, in evaluation order.
const std::vector<std::string>& bound_registry();

/// Throws UnknownBound for ids outside the registry.
BoundResult evaluate(const std::string& name, const AuditInput& in);

/// Every registered bound; inapplicable ones come back not_applicable.
std::vector<BoundResult> audit_all(const AuditInput& in);

/// Discretization allowances.
double length_tolerance(const AuditInput& in);
double energy_tolerance(double rhs, double lambda, double h);

} // namespace plab
