#include <cmath>
#include <fstream>
#include <string>

#include "depthrefine/error.hpp"
#include "depthrefine/io.hpp"

namespace depthrefine::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseSyntax, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name) {
  if (!j.is_number()) bad(std::string("field '") + name + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(std::string("field '") + name + "' is not finite");
  return v;
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const char* name) {
  if (!j.is_array() || j.size() != N) bad(std::string("field '") + name + "' must be an array of " + std::to_string(N));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], name);
  return out;
}

int integer(const json& j, const char* name) {
  if (!j.is_number_integer()) bad(std::string("field '") + name + "' must be an integer");
  return j.get<int>();
}

}  // namespace

Vec3 parse_vec3(const json& j, const char* name) {
  const auto a = numbers<3>(j, name);
  return {a[0], a[1], a[2]};
}

UnitQuaternion parse_quaternion(const json& j, const char* name) {
  const auto q = numbers<4>(j, name);
  const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  if (!(std::fabs(norm - 1.0) <= 1e-3)) {
    bad(std::string("field '") + name + "' is not a unit quaternion (norm " + std::to_string(norm) + ")");
  }
  return UnitQuaternion::from_components(q[0], q[1], q[2], q[3]);
}

Pose parse_pose(const json& j) {
  return {parse_vec3(field(j, "position"), "position"), parse_quaternion(field(j, "orientation"), "orientation")};
}

PoseAndIntrinsics parse_pose_and_intrinsics(const json& doc) {
  PoseAndIntrinsics out;
  out.pose = parse_pose(doc);
  out.intrinsics.fx = number(field(doc, "fx"), "fx");
  out.intrinsics.fy = number(field(doc, "fy"), "fy");
  out.intrinsics.cx = number(field(doc, "cx"), "cx");
  out.intrinsics.cy = number(field(doc, "cy"), "cy");
  out.intrinsics.width = integer(field(doc, "width"), "width");
  out.intrinsics.height = integer(field(doc, "height"), "height");
  const auto d = numbers<3>(field(doc, "cad_dims"), "cad_dims");
  out.cad_dims = {d[0], d[1], d[2]};
  if (doc.contains("world_T_camera") && !doc.at("world_T_camera").is_null()) {
    out.world_T_camera = parse_pose(doc.at("world_T_camera"));
  }

  out.intrinsics.validate();
  out.cad_dims.validate();
  if (!(out.pose.position.z > 0.0)) throw Error(ErrorCode::InvalidArgument, "object must lie in front of the camera");
  return out;
}

PoseAndIntrinsics load_pose_and_intrinsics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_pose_and_intrinsics(doc);
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json to_json(const UnitQuaternion& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json to_json(const Pose& pose) {
  return {{"position", to_json(pose.position)}, {"orientation", to_json(pose.orientation)}};
}

json to_json(const PoseAndIntrinsics& cfg) {
  json j = to_json(cfg.pose);
  j["fx"] = cfg.intrinsics.fx;
  j["fy"] = cfg.intrinsics.fy;
  j["cx"] = cfg.intrinsics.cx;
  j["cy"] = cfg.intrinsics.cy;
  j["width"] = cfg.intrinsics.width;
  j["height"] = cfg.intrinsics.height;
  j["cad_dims"] = to_json(cfg.cad_dims.as_vec());
  if (cfg.world_T_camera) j["world_T_camera"] = to_json(*cfg.world_T_camera);
  return j;
}

json to_json(const RefinementResult& r) {
  return {{"sigma_opt", r.sigma_opt},
          {"mu_opt", r.mu_opt},
          {"refined_pose", to_json(r.refined_pose)},
          {"estimated_dims", to_json(r.estimated_dims.as_vec())},
          {"inlier_count", r.inlier_mask.size()},
          {"sample_count", r.sample_count},
          {"rms_residual", r.rms_residual},
          {"objective_value", r.objective_value},
          {"evaluations", r.evaluations}};
}

json to_json(const GraspCandidate& c) {
  return {{"position", to_json(c.position)},
          {"orientation", to_json(c.orientation)},
          {"alpha", c.alpha},
          {"theta", c.theta}};
}

json to_json(const harness::EvalRecord& r) {
  json j = {{"scene_id", r.scene_id},
            {"success", r.success},
            {"true_scale", r.true_scale},
            {"mu_opt", r.mu_opt},
            {"mu_error", r.mu_error},
            {"centroid_error", r.centroid_error},
            {"coarse_centroid_error", r.coarse_centroid_error},
            {"dimensional_error", r.dimensional_error},
            {"position_error", r.position_error},
            {"coarse_position_error", r.coarse_position_error},
            {"inlier_count", r.inlier_count},
            {"sample_count", r.sample_count}};
  if (!r.success) j["message"] = r.message;
  return j;
}

json to_json(const harness::SweepSummary& s) {
  return {{"scenes", s.scenes},
          {"successes", s.successes},
          {"success_rate", s.success_rate},
          {"mean_abs_centroid_error", s.mean_abs_centroid_error},
          {"max_abs_centroid_error", s.max_abs_centroid_error},
          {"mean_abs_coarse_centroid_error", s.mean_abs_coarse_centroid_error},
          {"max_abs_coarse_centroid_error", s.max_abs_coarse_centroid_error},
          {"mean_dimensional_error", s.mean_dimensional_error},
          {"max_dimensional_error", s.max_dimensional_error},
          {"max_abs_mu_error", s.max_abs_mu_error}};
}

}  // namespace depthrefine::io
