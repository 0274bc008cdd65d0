#include "eccar/group_structures.hpp"

#include <string>

namespace eccar {

namespace {
void check_dims(int p, int q) {
  if (p < 1 || q < 1)
    throw InvalidPartition("partition dimensions must be positive, got p=" +
                           std::to_string(p) + " q=" + std::to_string(q));
}
}  // namespace

GroupPartition elementwise_partition(int p, int q) {
  check_dims(p, q);
  GroupPartition out;
  out.p = p;
  out.q = q;
  out.groups.reserve(static_cast<std::size_t>(p) * q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) out.groups.push_back({{i, j}});
  return out;
}

GroupPartition row_partition(int p, int q) {
  check_dims(p, q);
  GroupPartition out;
  out.p = p;
  out.q = q;
  out.groups.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    std::vector<std::pair<int, int>> row;
    row.reserve(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) row.emplace_back(i, j);
    out.groups.push_back(std::move(row));
  }
  return out;
}

GroupPartition block_partition(int p, int q, int bp, int bq) {
  check_dims(p, q);
  if (bp < 1 || bq < 1)
    throw InvalidPartition("block sizes must be positive, got " +
                           std::to_string(bp) + "x" + std::to_string(bq));
  GroupPartition out;
  out.p = p;
  out.q = q;
  // Ragged trailing blocks allowed; weights downstream use the actual size.
  for (int i0 = 0; i0 < p; i0 += bp) {
    for (int j0 = 0; j0 < q; j0 += bq) {
      std::vector<std::pair<int, int>> block;
      for (int i = i0; i < std::min(i0 + bp, p); ++i)
        for (int j = j0; j < std::min(j0 + bq, q); ++j) block.emplace_back(i, j);
      out.groups.push_back(std::move(block));
    }
  }
  return out;
}

bool validate_partition(const GroupPartition& g) {
  if (g.p < 1 || g.q < 1) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.p) * g.q, 0);
  std::size_t count = 0;
  for (const auto& grp : g.groups) {
    if (grp.empty()) return false;
    for (const auto& [i, j] : grp) {
      if (i < 0 || i >= g.p || j < 0 || j >= g.q) return false;
      std::size_t idx = static_cast<std::size_t>(i) * g.q + j;
      if (seen[idx]) return false;
      seen[idx] = 1;
      ++count;
    }
  }
  return count == static_cast<std::size_t>(g.p) * g.q;
}

}  // namespace eccar
