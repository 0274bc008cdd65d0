#pragma once

#include <utility>
#include <vector>

#include "eccar/errors.hpp"
#include "eccar/types.hpp"

namespace eccar {

/// Partition of the entry index set [p] x [q] into disjoint groups.
/// Immutable once built; groups are stored as 0-based (row, col) pairs.
struct GroupPartition {
  std::vector<std::vector<std::pair<int, int>>> groups;
  int p = 0;
  int q = 0;

  int size(std::size_t g) const { return static_cast<int>(groups[g].size()); }

  bool all_singletons() const {
    for (const auto& g : groups)
      if (g.size() != 1) return false;
    return true;
  }
};

GroupPartition elementwise_partition(int p, int q);
GroupPartition row_partition(int p, int q);
GroupPartition block_partition(int p, int q, int bp, int bq);

/// True iff groups are pairwise disjoint and cover [p] x [q] exactly.
bool validate_partition(const GroupPartition& g);

}  // namespace eccar
