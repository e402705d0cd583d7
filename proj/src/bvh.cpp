#include "mmsim/bvh.hpp"

#include "mmsim/error.hpp"

#include <algorithm>
#include <array>

namespace mmsim {
namespace {

constexpr std::uint32_t kLeafSize = 4;

// Slab test; returns the entry distance or nullopt when the interval misses.
std::optional<double> enterBox(const Aabb& box, const Ray& ray, double t_max) {
  double lo = ray.t_min;
  double hi = t_max;
  for (int k = 0; k < 3; ++k) {
    const double o = ray.origin[k];
    const double d = ray.direction[k];
    if (d == 0.0) {
      if (o < box.min[k] || o > box.max[k]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[k] - o) / d;
    double t1 = (box.max[k] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

}  // namespace

std::optional<double> intersectTriangle(const Vec3& a, const Vec3& b, const Vec3& c, const Ray& ray) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (t < ray.t_min || t > ray.t_max) return std::nullopt;
  return t;
}

TriangleBvh::TriangleBvh(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw Error("raytrace", ErrorKind::kInvalidArgument, "cannot build BVH over an empty mesh");
  tris_.reserve(mesh.triangles.size());
  std::vector<Vec3> centroids;
  centroids.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    for (std::uint32_t i : t) {
      if (i >= mesh.vertices.size()) throw Error("raytrace", ErrorKind::kValidation, "triangle index out of range");
    }
    Tri tri{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    centroids.push_back((tri.a + tri.b + tri.c) / 3.0);
    tris_.push_back(tri);
  }
  order_.resize(tris_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * tris_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(order_.size()), centroids);
}

std::uint32_t TriangleBvh::build(std::uint32_t begin, std::uint32_t end, const std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box, centroid_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Tri& t = tris_[order_[i]];
    box.extend(t.a);
    box.extend(t.b);
    box.extend(t.c);
    centroid_box.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;
  const Vec3 span = centroid_box.extents();
  if (end - begin <= kLeafSize || span.maxCoeff() <= 0.0) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  int axis = 0;
  span.maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t l, std::uint32_t r) {
                     const double cl = centroids[l][axis], cr = centroids[r][axis];
                     return cl < cr || (cl == cr && l < r);
                   });
  const std::uint32_t left = build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = left;
  nodes_[index].right = right;
  nodes_[index].count = 0;
  return index;
}

std::optional<RayHit> TriangleBvh::firstHit(const Ray& ray) const {
  std::optional<RayHit> best;
  double best_t = ray.t_max;
  std::array<std::uint32_t, 128> stack{};
  std::size_t top = 0;
  if (!enterBox(nodes_[0].box, ray, best_t)) return best;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t id = order_[i];
        const Tri& t = tris_[id];
        Ray r = ray;
        r.t_max = best_t;
        if (auto hit = intersectTriangle(t.a, t.b, t.c, r)) {
          if (!best || *hit < best_t || (*hit == best_t && id < best->triangle)) {
            best = RayHit{id, *hit};
            best_t = *hit;
          }
        }
      }
      continue;
    }
    // Non-strict pruning keeps equal-distance hits reachable for tie-breaking.
    const auto tl = enterBox(nodes_[node.first].box, ray, best_t);
    const auto tr = enterBox(nodes_[node.right].box, ray, best_t);
    if (tl && tr) {
      const bool left_first = *tl <= *tr;
      stack[top++] = left_first ? node.right : node.first;
      stack[top++] = left_first ? node.first : node.right;
    } else if (tl) {
      stack[top++] = node.first;
    } else if (tr) {
      stack[top++] = node.right;
    }
  }
  return best;
}

bool TriangleBvh::anyHit(const Ray& ray, std::uint32_t ignore) const {
  std::array<std::uint32_t, 128> stack{};
  std::size_t top = 0;
  if (!enterBox(nodes_[0].box, ray, ray.t_max)) return false;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t id = order_[i];
        if (id == ignore) continue;
        const Tri& t = tris_[id];
        if (intersectTriangle(t.a, t.b, t.c, ray)) return true;
      }
      continue;
    }
    if (enterBox(nodes_[node.first].box, ray, ray.t_max)) stack[top++] = node.first;
    if (enterBox(nodes_[node.right].box, ray, ray.t_max)) stack[top++] = node.right;
  }
  return false;
}

}  // namespace mmsim
