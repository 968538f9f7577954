#include "depthrefine/geometry.hpp"

#include <algorithm>
#include <string>

#include "depthrefine/error.hpp"

namespace depthrefine {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateRay: return "degenerate-ray";
    case ErrorCode::BehindCamera: return "behind-camera";
    case ErrorCode::EmptyGeometry: return "empty-geometry";
    case ErrorCode::NoOverlap: return "no-overlap";
    case ErrorCode::DegenerateScene: return "degenerate-scene";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::NoFeasibleCandidate: return "no-feasible-candidate";
    case ErrorCode::Io: return "io";
    case ErrorCode::ParseSyntax: return "parse-syntax";
    case ErrorCode::ParseIndexRange: return "parse-index-range";
    case ErrorCode::ParseMagic: return "parse-magic";
    case ErrorCode::ParseDimensions: return "parse-dimensions";
    case ErrorCode::ParseTruncated: return "parse-truncated";
    case ErrorCode::ParseEndianness: return "parse-endianness";
  }
  return "unknown";
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  }
  return r;
}

UnitQuaternion UnitQuaternion::from_components(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "quaternion must be finite and non-zero");
  }
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  bool flip = w < 0.0;
  if (w == 0.0) {
    // Tie-break on the vector part so that q and -q still map to one value.
    const double first = x != 0.0 ? x : (y != 0.0 ? y : z);
    flip = first < 0.0;
  }
  if (flip) return {-w == 0.0 ? 0.0 : -w, -x, -y, -z};
  return {w == 0.0 ? 0.0 : w, x, y, z};
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(angle)) {
    throw Error(ErrorCode::InvalidArgument, "rotation axis must be non-zero");
  }
  const double s = std::sin(0.5 * angle) / n;
  return from_components(std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s);
}

UnitQuaternion UnitQuaternion::from_matrix(const Mat3& r) {
  // Shepperd's method: pivot on the largest diagonal term for stability.
  const double trace = r(0, 0) + r(1, 1) + r(2, 2);
  double w, x, y, z;
  if (trace > r(0, 0) && trace > r(1, 1) && trace > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  return from_components(w, x, y, z);
}

UnitQuaternion UnitQuaternion::conjugate() const { return from_components(w_, -x_, -y_, -z_); }

Mat3 UnitQuaternion::to_matrix() const {
  const double w = w_, x = x_, y = y_, z = z_;
  Mat3 r;
  r(0, 0) = 1.0 - 2.0 * (y * y + z * z);
  r(0, 1) = 2.0 * (x * y - w * z);
  r(0, 2) = 2.0 * (x * z + w * y);
  r(1, 0) = 2.0 * (x * y + w * z);
  r(1, 1) = 1.0 - 2.0 * (x * x + z * z);
  r(1, 2) = 2.0 * (y * z - w * x);
  r(2, 0) = 2.0 * (x * z - w * y);
  r(2, 1) = 2.0 * (y * z + w * x);
  r(2, 2) = 1.0 - 2.0 * (x * x + y * y);
  return r;
}

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion::from_components(
      a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z(),
      a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
      a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
      a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w());
}

Vec3 rotate(const UnitQuaternion& q, const Vec3& v) {
  // v' = v + 2w (u x v) + 2 u x (u x v), u the vector part.
  const Vec3 u{q.x(), q.y(), q.z()};
  const Vec3 t = 2.0 * cross(u, v);
  return v + q.w() * t + cross(u, t);
}

Pose Pose::inverse() const {
  const UnitQuaternion inv = orientation.conjugate();
  return {-rotate(inv, position), inv};
}

Pose Pose::operator*(const Pose& other) const {
  return {transform(other.position), quat_mul(orientation, other.orientation)};
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  }
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
    throw Error(ErrorCode::InvalidArgument, "principal point outside the image");
  }
}

void CuboidDims::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0) || !as_vec().is_finite()) {
    throw Error(ErrorCode::InvalidArgument, "cuboid dimensions must be positive");
  }
}

namespace {

double anchor_norm(const SigmaTransform& t) {
  const double n = t.anchor.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::DegenerateRay, "sigma transform anchored at the origin");
  return n;
}

}  // namespace

Vec3 sigma_translate(const SigmaTransform& t) {
  const double n = anchor_norm(t);
  return t.anchor - (t.sigma / n) * t.anchor;
}

double scale_factor(const SigmaTransform& t) { return 1.0 - t.sigma / anchor_norm(t); }

ScaledPose apply_sigma_to_pose(const Pose& pose, double sigma) {
  const SigmaTransform t{sigma, pose.position};
  return {{sigma_translate(t), pose.orientation}, scale_factor(t)};
}

Projection project(const CameraIntrinsics& intr, const Vec3& point) {
  if (!(point.z > 0.0)) {
    throw Error(ErrorCode::BehindCamera, "point at z=" + std::to_string(point.z) + " is behind the camera");
  }
  return {intr.fx * point.x / point.z + intr.cx, intr.fy * point.y / point.z + intr.cy, point.z};
}

}  // namespace depthrefine
