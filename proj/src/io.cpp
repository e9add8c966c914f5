#include "cnfuse/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace cnfuse {

namespace {

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MatrixFileError("cannot open matrix file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MatrixFileError("invalid JSON in " + path.string() + ": " +
                          e.what());
  }
  return j;
}

Matrix parse_square(const nlohmann::json& j, const std::string& where) {
  if (!j.contains("dim") || !j.contains("rows")) {
    throw MatrixFileError(where + ": missing 'dim' or 'rows'");
  }
  const auto n = j.at("dim").get<Eigen::Index>();
  const auto& rows = j.at("rows");
  if (n < 1 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw MatrixFileError(where + ": matrix is not square");
  }
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw MatrixFileError(where + ": matrix is not square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw MatrixFileError(where + ": non-numeric entry");
      }
      a(i, k) = v.get<double>();
      if (!std::isfinite(a(i, k))) {
        throw MatrixFileError(where + ": non-finite entry");
      }
    }
  }
  return a;
}

nlohmann::json to_json(const Matrix& a, const std::string& name) {
  nlohmann::json j;
  j["name"] = name;
  j["dim"] = a.rows();
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

void dump(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixFileError("cannot write matrix file: " + path.string());
  }
  out << j.dump(1) << "\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

SymMatrix read_matrix_file(const std::filesystem::path& path) {
  const Matrix a = parse_square(load_json(path), path.string());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw MatrixFileError(path.string() + ": matrix is not symmetric");
  }
  return SymMatrix(0.5 * (a + a.transpose()));
}

void write_matrix_file(const std::filesystem::path& path, const SymMatrix& a,
                       const std::string& name) {
  dump(path, to_json(a.m(), name));
}

Matrix read_square_matrix_file(const std::filesystem::path& path) {
  return parse_square(load_json(path), path.string());
}

void write_square_matrix_file(const std::filesystem::path& path,
                              const Matrix& a, const std::string& name) {
  dump(path, to_json(a, name));
}

void write_polylines_csv(const std::filesystem::path& path,
                         const std::vector<EllipsePolyline>& polys) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixFileError("cannot write CSV file: " + path.string());
  }
  out << "label,k,x,y\n";
  for (const EllipsePolyline& p : polys) {
    for (std::size_t k = 0; k < p.points.size(); ++k) {
      out << p.label << ',' << k << ',' << format_double(p.points[k].x())
          << ',' << format_double(p.points[k].y()) << '\n';
    }
  }
}

}  // namespace cnfuse
