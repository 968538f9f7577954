#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "depthrefine/geometry.hpp"

namespace depthrefine {

struct TriangleMesh {
  std::vector<Vec3> vertices;  // model frame, meters
  std::vector<std::array<std::uint32_t, 3>> triangles;

  // Throws EmptyGeometry without triangles, InvalidArgument on out-of-range
  // indices or non-finite vertices.
  void validate() const;

  // Mean of the vertex positions.
  Vec3 centroid() const;
  // Axis-aligned extents of the vertex set.
  CuboidDims bounding_dims() const;
};

// Shifts vertices so the centroid is the origin; returns the applied offset
// (the old centroid).
Vec3 recenter(TriangleMesh& mesh);

TriangleMesh scaled(const TriangleMesh& mesh, double factor);

// Moves each vertex radially (from the origin) by a uniform draw in
// [-amplitude, amplitude]. Topology is unchanged, so a watertight mesh stays
// watertight.
TriangleMesh perturb_radially(const TriangleMesh& mesh, double amplitude, std::uint64_t seed);

// Closed UV ellipsoid centered at the origin whose bounding box is exactly
// `dims` (poles on +-y, equator vertices on the x and z axes).
TriangleMesh make_ellipsoid(const CuboidDims& dims, int stacks = 24, int slices = 48);

// Axis-aligned square of side `side` in the z = 0 plane, two triangles.
TriangleMesh make_square(double side);

// Closed axis-aligned box, 8 vertices and 12 triangles.
TriangleMesh make_box(const CuboidDims& dims);

}  // namespace depthrefine
