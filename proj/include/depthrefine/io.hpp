#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "depthrefine/depth_map.hpp"
#include "depthrefine/geometry.hpp"
#include "depthrefine/grasp.hpp"
#include "depthrefine/harness.hpp"
#include "depthrefine/mesh.hpp"
#include "depthrefine/refiner.hpp"

namespace depthrefine::io {

// ---- OBJ -------------------------------------------------------------------

struct LoadedMesh {
  TriangleMesh mesh;
  Vec3 recenter_offset;  // centroid of the file's vertices, subtracted from all
};

// ASCII OBJ subset: `v` and `f` records; polygons are fan-triangulated
// (v0, vi, vi+1); `f` tokens may carry /vt/vn suffixes and negative
// (relative) indices. Every other record is ignored. The result is
// re-centered on its vertex centroid.
//
// Errors carry the 1-based line number: ParseSyntax for a malformed record,
// ParseIndexRange for a face index outside the vertex list, EmptyGeometry
// when no triangle was read.
LoadedMesh load_mesh(std::istream& in);
LoadedMesh load_mesh(const std::filesystem::path& path);

// ---- depth maps ------------------------------------------------------------

// Grayscale PFM ("Pf"), negative (little-endian) scale, rows bottom-to-top as
// the format prescribes. Non-finite and non-positive samples load as 0.0
// (invalid). Valid maps round-trip bit-exactly.
DepthMap load_pfm(std::istream& in);
DepthMap load_pfm(const std::filesystem::path& path);
void store_pfm(std::ostream& out, const DepthMap& map);
void store_pfm(const std::filesystem::path& path, const DepthMap& map);

// Binary 16-bit PGM ("P5", maxval > 255, big-endian samples) as written by
// most RGB-D drivers; depth = raw * scale, raw 0 is invalid.
DepthMap load_pgm16(std::istream& in, double scale);

// Dispatches on extension: .pgm goes through load_pgm16(scale), anything else
// through load_pfm with every sample multiplied by scale.
DepthMap load_depth(const std::filesystem::path& path, double scale = 1.0);

// ---- JSON ------------------------------------------------------------------

struct PoseAndIntrinsics {
  Pose pose;
  CameraIntrinsics intrinsics;
  std::optional<Pose> world_T_camera;
  CuboidDims cad_dims;
};

// Fields: position [x,y,z], orientation [w,x,y,z], fx, fy, cx, cy, width,
// height, cad_dims [dx,dy,dz], optional world_T_camera {position,
// orientation}. Quaternions within 1e-3 of unit norm are renormalized.
//
// ParseSyntax for missing or malformed fields, non-finite numbers and
// quaternions too far from unit norm; InvalidArgument for violated invariants
// (intrinsics, dims, position.z <= 0).
PoseAndIntrinsics parse_pose_and_intrinsics(const nlohmann::json& doc);
PoseAndIntrinsics load_pose_and_intrinsics(const std::filesystem::path& path);
nlohmann::json to_json(const PoseAndIntrinsics& cfg);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const UnitQuaternion& q);
nlohmann::json to_json(const Pose& pose);
nlohmann::json to_json(const RefinementResult& result);
nlohmann::json to_json(const GraspCandidate& candidate);
nlohmann::json to_json(const harness::EvalRecord& record);
nlohmann::json to_json(const harness::SweepSummary& summary);

Vec3 parse_vec3(const nlohmann::json& j, const char* field);
UnitQuaternion parse_quaternion(const nlohmann::json& j, const char* field);
Pose parse_pose(const nlohmann::json& j);

}  // namespace depthrefine::io
