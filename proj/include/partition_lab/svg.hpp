#pragma once

#include <string>

#include "partition_lab/partition.hpp"

namespace plab {

/// Domain outline, part cells, boundary-set arcs and singular points
/// (classes "outline", "cell", "arc", "interior", "boundary").
/// Output is a pure function of its inputs.
std::string render_partition_svg(const KPartition& p, const PartitionReport& report);

} // namespace plab
