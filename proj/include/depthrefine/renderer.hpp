#pragma once

#include "depthrefine/depth_map.hpp"
#include "depthrefine/geometry.hpp"
#include "depthrefine/mesh.hpp"

namespace depthrefine {

// Vertices closer than this are treated as behind the camera; a triangle with
// any such vertex is dropped.
inline constexpr double kNearPlane = 1e-4;

// Z-buffered depth image of `mesh` scaled by `mu` about its model origin and
// placed at `pose` (camera frame): vertex v lands at pose.position +
// mu * R(pose.orientation) * v. A pixel is covered when its center is inside
// the projected triangle (top-left rule on shared edges). Depth is
// interpolated perspective-correctly and there is no back-face culling.
//
// Throws EmptyGeometry for a mesh without triangles and InvalidArgument for a
// non-positive `mu` or invalid intrinsics.
DepthMap render_depth(const TriangleMesh& mesh, const Pose& pose, double mu, const CameraIntrinsics& intr);

}  // namespace depthrefine
