#include "depthrefine/mesh.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>

#include "depthrefine/error.hpp"

namespace depthrefine {

void TriangleMesh::validate() const {
  if (triangles.empty()) throw Error(ErrorCode::EmptyGeometry, "mesh has no triangles");
  for (const auto& v : vertices) {
    if (!v.is_finite()) throw Error(ErrorCode::InvalidArgument, "mesh vertex is not finite");
  }
  for (const auto& t : triangles) {
    for (auto i : t) {
      if (i >= vertices.size()) throw Error(ErrorCode::InvalidArgument, "triangle index out of range");
    }
  }
}

Vec3 TriangleMesh::centroid() const {
  Vec3 sum;
  for (const auto& v : vertices) sum += v;
  return vertices.empty() ? sum : sum * (1.0 / static_cast<double>(vertices.size()));
}

CuboidDims TriangleMesh::bounding_dims() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf}, hi{-inf, -inf, -inf};
  for (const auto& v : vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  if (vertices.empty()) return {};
  return {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
}

Vec3 recenter(TriangleMesh& mesh) {
  const Vec3 c = mesh.centroid();
  for (auto& v : mesh.vertices) v -= c;
  return c;
}

TriangleMesh scaled(const TriangleMesh& mesh, double factor) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v *= factor;
  return out;
}

TriangleMesh perturb_radially(const TriangleMesh& mesh, double amplitude, std::uint64_t seed) {
  TriangleMesh out = mesh;
  if (amplitude <= 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-amplitude, amplitude);
  for (auto& v : out.vertices) {
    const double n = v.norm();
    const double d = offset(rng);
    if (n > 0.0) v += (d / n) * v;
  }
  return out;
}

TriangleMesh make_ellipsoid(const CuboidDims& dims, int stacks, int slices) {
  if (stacks < 2 || slices < 3 || slices % 4 != 0) {
    throw Error(ErrorCode::InvalidArgument, "ellipsoid needs stacks >= 2 and slices divisible by 4");
  }
  const double a = 0.5 * dims.dx, b = 0.5 * dims.dy, c = 0.5 * dims.dz;
  TriangleMesh mesh;
  mesh.vertices.push_back({0.0, b, 0.0});
  for (int i = 1; i < stacks; ++i) {
    const double phi = std::numbers::pi * i / stacks;
    const double ring = std::sin(phi);
    const double y = b * std::cos(phi);
    for (int j = 0; j < slices; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / slices;
      // Snap the quarter-turn samples so the extents are exact.
      double cs = std::cos(theta), sn = std::sin(theta);
      if (j % (slices / 4) == 0) {
        const int q = j / (slices / 4);
        cs = q == 0 ? 1.0 : (q == 2 ? -1.0 : 0.0);
        sn = q == 1 ? 1.0 : (q == 3 ? -1.0 : 0.0);
      }
      mesh.vertices.push_back({a * ring * cs, y, c * ring * sn});
    }
  }
  mesh.vertices.push_back({0.0, -b, 0.0});

  const auto ring_index = [slices](int ring, int j) {
    return static_cast<std::uint32_t>(1 + ring * slices + (j % slices));
  };
  const auto bottom = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({0u, ring_index(0, j + 1), ring_index(0, j)});
  }
  for (int r = 0; r + 1 < stacks - 1; ++r) {
    for (int j = 0; j < slices; ++j) {
      const auto a0 = ring_index(r, j), a1 = ring_index(r, j + 1);
      const auto b0 = ring_index(r + 1, j), b1 = ring_index(r + 1, j + 1);
      mesh.triangles.push_back({a0, a1, b1});
      mesh.triangles.push_back({a0, b1, b0});
    }
  }
  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({bottom, ring_index(stacks - 2, j), ring_index(stacks - 2, j + 1)});
  }
  return mesh;
}

TriangleMesh make_square(double side) {
  const double h = 0.5 * side;
  TriangleMesh mesh;
  mesh.vertices = {{-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

TriangleMesh make_box(const CuboidDims& dims) {
  const double x = 0.5 * dims.dx, y = 0.5 * dims.dy, z = 0.5 * dims.dz;
  TriangleMesh mesh;
  mesh.vertices = {{-x, -y, -z}, {x, -y, -z}, {x, y, -z}, {-x, y, -z},
                   {-x, -y, z},  {x, -y, z},  {x, y, z},  {-x, y, z}};
  mesh.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                    {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {0, 4, 7}, {0, 7, 3}};
  return mesh;
}

}  // namespace depthrefine
