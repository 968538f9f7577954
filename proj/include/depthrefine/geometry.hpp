#pragma once

#include <array>
#include <cmath>

namespace depthrefine {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Row-major 3x3 matrix; only used for rotations.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
};

// Hamilton convention, scalar first. Always unit norm with w >= 0 (for w == 0
// the first non-zero vector component is made positive).
class UnitQuaternion {
 public:
  constexpr UnitQuaternion() = default;

  // Normalizes and canonicalizes; throws InvalidArgument on a zero or
  // non-finite input.
  static UnitQuaternion from_components(double w, double x, double y, double z);
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  static UnitQuaternion about_z(double angle) { return from_axis_angle({0, 0, 1}, angle); }
  static UnitQuaternion about_y(double angle) { return from_axis_angle({0, 1, 0}, angle); }
  static UnitQuaternion about_x(double angle) { return from_axis_angle({1, 0, 0}, angle); }
  // Input must be a proper rotation matrix (orthonormal, det +1).
  static UnitQuaternion from_matrix(const Mat3& r);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  UnitQuaternion conjugate() const;
  Mat3 to_matrix() const;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  constexpr UnitQuaternion(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b);
Vec3 rotate(const UnitQuaternion& q, const Vec3& v);

// Rigid transform. In camera frame the position is the object origin and
// must lie in front of the camera (z > 0); that is checked by consumers, not
// here, because the same type also carries world-frame poses.
struct Pose {
  Vec3 position;
  UnitQuaternion orientation;

  Vec3 transform(const Vec3& v) const { return rotate(orientation, v) + position; }
  Pose inverse() const;
  // (this * other).transform(v) == this->transform(other.transform(v))
  Pose operator*(const Pose& other) const;
};

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  // Throws InvalidArgument when fx, fy <= 0 or the principal point lies
  // outside the image.
  void validate() const;
};

struct CuboidDims {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  void validate() const;
  CuboidDims scaled(double mu) const { return {mu * dx, mu * dy, mu * dz}; }
  Vec3 as_vec() const { return {dx, dy, dz}; }
};

// Translation of `anchor` by `sigma` meters along the ray toward the camera.
struct SigmaTransform {
  double sigma = 0.0;
  Vec3 anchor;
};

// p' = p - sigma * p / |p|. Throws DegenerateRay when the anchor is zero.
Vec3 sigma_translate(const SigmaTransform& t);
// mu(sigma) = |p'| / |p| = 1 - sigma / |p|.
double scale_factor(const SigmaTransform& t);

struct ScaledPose {
  Pose pose;
  double mu = 1.0;
};

// Moves the pose origin along its viewing ray and returns the scale that
// keeps the object's image unchanged. Orientation is passed through.
ScaledPose apply_sigma_to_pose(const Pose& pose, double sigma);

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Pinhole projection. Pixel centers sit at integer (u, v). Throws BehindCamera
// for z <= 0.
Projection project(const CameraIntrinsics& intr, const Vec3& point);

}  // namespace depthrefine
