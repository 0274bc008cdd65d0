#pragma once

#include <string>

#include "eccar/group_structures.hpp"
#include "eccar/types.hpp"

namespace eccar {

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_double(double value);

/// Reads a numeric CSV matrix. A single non-numeric first row is treated as a
/// header and skipped. Parse failures report the 1-based row and column.
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(const Matrix& m, const std::string& path);

/// Partition file format: one group per line, `i,j` pairs separated by
/// semicolons, 0-based. The result is validated before use.
GroupPartition read_partition_file(const std::string& path, int p, int q);

void write_partition_file(const GroupPartition& partition,
                          const std::string& path);

}  // namespace eccar
