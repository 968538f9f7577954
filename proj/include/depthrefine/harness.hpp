#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthrefine/depth_map.hpp"
#include "depthrefine/geometry.hpp"
#include "depthrefine/mesh.hpp"
#include "depthrefine/refiner.hpp"

namespace depthrefine::harness {

// Training cuboid of the apple model; y is the height axis.
inline constexpr CuboidDims kAppleCadDims{0.092, 0.080, 0.092};

// 640x480, fx = fy = 600, principal point at the image center.
CameraIntrinsics default_intrinsics();

struct Model {
  TriangleMesh mesh;
  CuboidDims cad_dims;
};

// "apple" (ellipsoid spanning kAppleCadDims), "box" (a cuboid with the same
// dims), or a path to an OBJ file (dims taken from its bounding box).
Model resolve_model(const std::string& mesh_id);

// A fronto-parallel plate in front of the object. It covers the leftmost
// columns of the object's silhouette until `support_fraction` of the
// silhouette is hidden (spanning all silhouette rows) and sits
// `depth_offset` meters in front of the object origin.
struct OccluderSpec {
  double support_fraction = 0.2;
  double depth_offset = 0.1;
};

struct SceneSpec {
  std::string id;
  std::string mesh_id = "apple";
  double true_scale = 1.0;       // ground-truth object = CAD scaled by this
  Pose true_pose;                // object in camera frame
  Pose world_T_camera;           // camera in table frame (z up, origin on the table)
  std::optional<OccluderSpec> occluder;
  double depth_noise = 0.0;      // Gaussian sigma on valid pixels, meters
  double shape_noise = 0.0;      // radial vertex perturbation amplitude, meters
  std::uint64_t seed = 0;

  void validate() const;
};

struct Scene {
  DepthMap real;
  Pose coarse;              // what a scale-blind RGB estimator reports
  PixelSet object_support;  // object pixels before occlusion
  PixelSet occluded;        // object pixels replaced by the occluder
};

// Parameters of a tabletop view: the object rests on the table with its
// height axis (model y) pointing up and is observed from `distance` meters at
// `elevation` radians above the table plane.
struct TabletopView {
  std::string id;
  std::string mesh_id = "apple";
  double true_scale = 1.0;
  Vec3 object_xy{0.0, -0.52, 0.0};  // z is ignored; set from the object height
  double object_yaw = 0.0;
  double distance = 0.5;
  double elevation = 0.9;
  double azimuth = 1.5707963267948966;
  Vec3 look_offset;  // world-frame shift of the look-at point
  std::optional<OccluderSpec> occluder;
  double depth_noise = 0.0;
  double shape_noise = 0.0;
  std::uint64_t seed = 0;
};

SceneSpec make_tabletop_scene(const TabletopView& view);

// Pose an ideal scale-blind estimator reports for an object `true_scale`
// times the CAD size: same orientation, position divided by the scale.
Pose simulate_rgb_estimate(const Pose& true_pose, double true_scale);

// Renders the ground truth (scaled, optionally perturbed mesh at the true
// pose), applies the occluder and depth noise. Deterministic per seed.
Scene generate_scene(const SceneSpec& spec, const CameraIntrinsics& intr);

// Table-frame half height minus the estimated table-frame centroid height.
double centroid_error(double estimated_z, double object_height);
// Euclidean norm of the dimension difference.
double dimensional_error(const CuboidDims& estimated, const CuboidDims& truth);

struct EvalRecord {
  std::string scene_id;
  bool success = false;
  std::string message;  // error description when !success
  double true_scale = 0.0;
  double mu_opt = 0.0;
  double mu_error = 0.0;               // mu_opt - true_scale
  double centroid_error = 0.0;         // refined, table frame
  double coarse_centroid_error = 0.0;  // unrefined estimate, table frame
  double dimensional_error = 0.0;
  double position_error = 0.0;         // |refined - true| in camera frame
  double coarse_position_error = 0.0;  // |coarse - true| in camera frame
  std::size_t inlier_count = 0;
  std::size_t sample_count = 0;
};

struct SweepSummary {
  std::size_t scenes = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_abs_centroid_error = 0.0;
  double max_abs_centroid_error = 0.0;
  double mean_abs_coarse_centroid_error = 0.0;
  double max_abs_coarse_centroid_error = 0.0;
  double mean_dimensional_error = 0.0;
  double max_dimensional_error = 0.0;
  double max_abs_mu_error = 0.0;
};

struct SweepReport {
  std::vector<EvalRecord> records;
  SweepSummary summary;
};

struct SweepOptions {
  CameraIntrinsics intrinsics = default_intrinsics();
  RefineConfig refine;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Evaluates one scene. Refinement errors are recorded, not thrown.
EvalRecord evaluate_scene(const SceneSpec& spec, const SweepOptions& options);

// Runs every scene (in parallel when threads allow); records keep the order
// of `specs`. Throws InvalidArgument for an empty list.
SweepReport run_sweep(const std::vector<SceneSpec>& specs, const SweepOptions& options = {});

SweepSummary summarize(const std::vector<EvalRecord>& records);
std::string format_summary(const SweepReport& report);

// Scale fixtures: mu* = apple width / CAD width for the five
// test apples, observed from a common tabletop view.
std::vector<SceneSpec> table_scale_fixtures(double depth_noise = 0.0, double shape_noise = 0.0,
                                            std::uint64_t seed = 1);

}  // namespace depthrefine::harness
