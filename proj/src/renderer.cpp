#include "depthrefine/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "depthrefine/error.hpp"
#include "depthrefine/simd/kernels.hpp"

namespace depthrefine {

namespace {

struct ScreenVertex {
  double u;
  double v;
  double z;
};

void rasterize(const ScreenVertex& p0, const ScreenVertex& p1, const ScreenVertex& p2, DepthMap& out) {
  const ScreenVertex* p[3] = {&p0, &p1, &p2};
  simd::TriangleSetup tri{};
  for (int k = 0; k < 3; ++k) {
    const ScreenVertex& s = *p[(k + 1) % 3];
    const ScreenVertex& e = *p[(k + 2) % 3];
    tri.a[k] = s.v - e.v;
    tri.b[k] = e.u - s.u;
    tri.c[k] = s.u * e.v - e.u * s.v;
    tri.inv_z[k] = 1.0 / p[k]->z;
  }
  double area2 = tri.a[0] * p0.u + (tri.b[0] * p0.v + tri.c[0]);
  if (!(std::fabs(area2) > 0.0) || !std::isfinite(area2)) return;
  if (area2 < 0.0) {
    for (int k = 0; k < 3; ++k) {
      tri.a[k] = -tri.a[k];
      tri.b[k] = -tri.b[k];
      tri.c[k] = -tri.c[k];
    }
    area2 = -area2;
  }
  for (int k = 0; k < 3; ++k) tri.top_left[k] = tri.a[k] > 0.0 || (tri.a[k] == 0.0 && tri.b[k] > 0.0);
  tri.inv_area = 1.0 / area2;

  const double umin = std::min({p0.u, p1.u, p2.u}), umax = std::max({p0.u, p1.u, p2.u});
  const double vmin = std::min({p0.v, p1.v, p2.v}), vmax = std::max({p0.v, p1.v, p2.v});
  const int col_begin = static_cast<int>(std::max(0.0, std::ceil(umin)));
  const int col_end = static_cast<int>(std::min(static_cast<double>(out.width()), std::floor(umax) + 1.0));
  const int row_begin = static_cast<int>(std::max(0.0, std::ceil(vmin)));
  const int row_end = static_cast<int>(std::min(static_cast<double>(out.height()), std::floor(vmax) + 1.0));
  for (int row = row_begin; row < row_end; ++row) {
    if (col_begin < col_end) simd::raster_row(tri, row, col_begin, col_end, out.row(row).data());
  }
}

}  // namespace

DepthMap render_depth(const TriangleMesh& mesh, const Pose& pose, double mu, const CameraIntrinsics& intr) {
  if (mesh.triangles.empty()) throw Error(ErrorCode::EmptyGeometry, "mesh has no triangles");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "render scale must be positive");
  intr.validate();

  const Mat3 r = pose.orientation.to_matrix();
  std::vector<ScreenVertex> screen(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3 c = pose.position + mu * (r * mesh.vertices[i]);
    if (c.z < kNearPlane) {
      screen[i] = {0.0, 0.0, -1.0};
      continue;
    }
    const Projection px = project(intr, c);
    screen[i] = {px.u, px.v, px.depth};
  }

  DepthMap out(intr.width, intr.height);
  for (const auto& t : mesh.triangles) {
    const ScreenVertex& a = screen.at(t[0]);
    const ScreenVertex& b = screen.at(t[1]);
    const ScreenVertex& c = screen.at(t[2]);
    if (a.z < kNearPlane || b.z < kNearPlane || c.z < kNearPlane) continue;
    rasterize(a, b, c, out);
  }
  return out;
}

}  // namespace depthrefine
