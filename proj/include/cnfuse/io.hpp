#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cnfuse/geometry.hpp"
#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Parse or I/O failure on a matrix file; carries the offending path.
struct MatrixFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix file: JSON object {"name": ..., "dim": n, "rows": [[...], ...]}.
/// Entries are written with 17 significant digits, so a write/read
/// round-trip reproduces the values exactly.
SymMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path,
                       const SymMatrix& a, const std::string& name);

/// General (possibly non-symmetric) square matrix, same schema.
Matrix read_square_matrix_file(const std::filesystem::path& path);
void write_square_matrix_file(const std::filesystem::path& path,
                              const Matrix& a, const std::string& name);

/// CSV with header "label,k,x,y", one row per polyline point.
void write_polylines_csv(const std::filesystem::path& path,
                         const std::vector<EllipsePolyline>& polys);

std::string format_double(double v);

}  // namespace cnfuse
