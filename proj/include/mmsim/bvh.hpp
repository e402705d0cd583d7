#pragma once

#include "mmsim/geometry.hpp"
#include "mmsim/motion.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace mmsim {

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitY();  // need not be normalized; t is in units of |direction|
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
};

struct RayHit {
  std::uint32_t triangle = 0;
  double t = 0.0;
};

/// Moller-Trumbore, two-sided, edges inclusive. Returns t when the hit lies in
/// [ray.t_min, ray.t_max].
std::optional<double> intersectTriangle(const Vec3& a, const Vec3& b, const Vec3& c, const Ray& ray);

/// Binary bounding-volume hierarchy over a triangle mesh. Immutable after
/// construction; queries are safe from multiple threads.
///
/// firstHit() returns the nearest hit, breaking exact ties in t toward the
/// lower triangle index, so it agrees with a linear scan over all triangles.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriMesh& mesh);

  std::optional<RayHit> firstHit(const Ray& ray) const;
  /// True if any triangle other than `ignore` is hit within the ray interval.
  bool anyHit(const Ray& ray, std::uint32_t ignore = std::numeric_limits<std::uint32_t>::max()) const;

  std::size_t triangleCount() const noexcept { return tris_.size(); }
  std::size_t nodeCount() const noexcept { return nodes_.size(); }
  const Aabb& bounds() const { return nodes_.front().box; }

 private:
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: first index into order_; inner: left child
    std::uint32_t count = 0;  // leaf: triangle count; inner: 0
    std::uint32_t right = 0;
  };
  struct Tri {
    Vec3 a, b, c;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, const std::vector<Vec3>& centroids);

  std::vector<Tri> tris_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace mmsim
