#pragma once

// Minimal binary little-endian PLY support: triangle meshes in, point tables
// and meshes out.

#include "mmsim/motion.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mmsim::ply {

/// Reads vertex x/y/z and a `vertex_indices` face list (any integer types).
/// Polygons with more than three corners are fan-triangulated.
TriMesh readMesh(const std::filesystem::path& path);
void writeMesh(const std::filesystem::path& path, const TriMesh& mesh);

/// A single element's scalar float32 properties, row-major.
struct PointTable {
  std::vector<std::string> columns;
  std::vector<float> values;  // rows * columns.size()

  std::size_t rows() const { return columns.empty() ? 0 : values.size() / columns.size(); }
};

void writePoints(const std::filesystem::path& path, const PointTable& table);
PointTable readPoints(const std::filesystem::path& path);

}  // namespace mmsim::ply
