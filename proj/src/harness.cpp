#include "depthrefine/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "depthrefine/error.hpp"
#include "depthrefine/io.hpp"
#include "depthrefine/renderer.hpp"

namespace depthrefine::harness {

CameraIntrinsics default_intrinsics() { return {600.0, 600.0, 320.0, 240.0, 640, 480}; }

Model resolve_model(const std::string& mesh_id) {
  if (mesh_id == "apple") return {make_ellipsoid(kAppleCadDims), kAppleCadDims};
  if (mesh_id == "box") return {make_box(kAppleCadDims), kAppleCadDims};
  io::LoadedMesh loaded = io::load_mesh(std::filesystem::path(mesh_id));
  const CuboidDims dims = loaded.mesh.bounding_dims();
  return {std::move(loaded.mesh), dims};
}

void SceneSpec::validate() const {
  if (!(true_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "true scale must be positive");
  if (!(depth_noise >= 0.0) || !(shape_noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
  if (!(true_pose.position.z > 0.0)) throw Error(ErrorCode::InvalidArgument, "object must be in front of the camera");
  if (occluder && !(occluder->support_fraction > 0.0 && occluder->support_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "occluder fraction must be in (0, 1]");
  }
}

SceneSpec make_tabletop_scene(const TabletopView& view) {
  const Model model = resolve_model(view.mesh_id);
  const double height = view.true_scale * model.cad_dims.dy;
  const Vec3 object{view.object_xy.x, view.object_xy.y, 0.5 * height};
  // Model y (height) -> world z, then yaw about world z.
  const UnitQuaternion object_rot =
      quat_mul(UnitQuaternion::about_z(view.object_yaw), UnitQuaternion::about_x(0.5 * 3.14159265358979323846));

  const Vec3 eye = object + view.distance * Vec3{std::cos(view.elevation) * std::cos(view.azimuth),
                                                 std::cos(view.elevation) * std::sin(view.azimuth),
                                                 std::sin(view.elevation)};
  const Vec3 target = object + view.look_offset;
  const Vec3 forward = (target - eye) * (1.0 / (target - eye).norm());
  Vec3 right = cross(forward, Vec3{0.0, 0.0, 1.0});
  right = right * (1.0 / right.norm());
  const Vec3 down = cross(forward, right);
  Mat3 r;
  r(0, 0) = right.x, r(0, 1) = down.x, r(0, 2) = forward.x;
  r(1, 0) = right.y, r(1, 1) = down.y, r(1, 2) = forward.y;
  r(2, 0) = right.z, r(2, 1) = down.z, r(2, 2) = forward.z;

  SceneSpec spec;
  spec.id = view.id;
  spec.mesh_id = view.mesh_id;
  spec.true_scale = view.true_scale;
  spec.world_T_camera = {eye, UnitQuaternion::from_matrix(r)};
  spec.true_pose = spec.world_T_camera.inverse() * Pose{object, object_rot};
  spec.occluder = view.occluder;
  spec.depth_noise = view.depth_noise;
  spec.shape_noise = view.shape_noise;
  spec.seed = view.seed;
  return spec;
}

Pose simulate_rgb_estimate(const Pose& true_pose, double true_scale) {
  if (!(true_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "true scale must be positive");
  return {true_pose.position * (1.0 / true_scale), true_pose.orientation};
}

namespace {

// Pixel rectangle covering the leftmost silhouette columns.
struct Rect {
  int row_begin, row_end, col_begin, col_end;
};

Rect occluder_rect(const PixelSet& support, double fraction) {
  std::vector<int> cols;
  cols.reserve(support.size());
  int rmin = support.height, rmax = -1;
  for (auto i : support.indices) {
    const int r = static_cast<int>(i / static_cast<std::uint32_t>(support.width));
    cols.push_back(static_cast<int>(i % static_cast<std::uint32_t>(support.width)));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  std::sort(cols.begin(), cols.end());
  const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(cols.size())));
  const int col_end = cols[std::clamp<std::size_t>(target, 1, cols.size()) - 1] + 1;
  return {rmin, rmax + 1, cols.front(), col_end};
}

}  // namespace

Scene generate_scene(const SceneSpec& spec, const CameraIntrinsics& intr) {
  spec.validate();
  const Model model = resolve_model(spec.mesh_id);
  const TriangleMesh truth =
      perturb_radially(scaled(model.mesh, spec.true_scale), spec.shape_noise, spec.seed ^ 0x9e3779b97f4a7c15ull);

  Scene scene;
  scene.real = render_depth(truth, spec.true_pose, 1.0, intr);
  scene.object_support = pixel_support(scene.real);
  scene.occluded = {intr.width, intr.height, {}};
  scene.coarse = simulate_rgb_estimate(spec.true_pose, spec.true_scale);

  if (spec.occluder && !scene.object_support.empty()) {
    const double plane = spec.true_pose.position.z - spec.occluder->depth_offset;
    if (!(plane > kNearPlane)) throw Error(ErrorCode::InvalidArgument, "occluder plane behind the camera");
    const auto plane_z = static_cast<float>(plane);
    const Rect rect = occluder_rect(scene.object_support, spec.occluder->support_fraction);
    for (int r = rect.row_begin; r < rect.row_end; ++r) {
      for (int c = rect.col_begin; c < rect.col_end; ++c) {
        float& d = scene.real.at(r, c);
        if (d != DepthMap::kInvalid && plane_z < d) {
          scene.occluded.indices.push_back(static_cast<std::uint32_t>(scene.real.index(r, c)));
        }
        if (d == DepthMap::kInvalid || plane_z < d) d = plane_z;
      }
    }
    std::sort(scene.occluded.indices.begin(), scene.occluded.indices.end());
  }

  if (spec.depth_noise > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.depth_noise);
    for (float& d : scene.real.data()) {
      if (d == DepthMap::kInvalid) continue;
      const double noisy = d + noise(rng);
      d = noisy > kNearPlane ? static_cast<float>(noisy) : DepthMap::kInvalid;
    }
  }
  return scene;
}

double centroid_error(double estimated_z, double object_height) { return 0.5 * object_height - estimated_z; }

double dimensional_error(const CuboidDims& estimated, const CuboidDims& truth) {
  return (estimated.as_vec() - truth.as_vec()).norm();
}

EvalRecord evaluate_scene(const SceneSpec& spec, const SweepOptions& options) {
  EvalRecord rec;
  rec.scene_id = spec.id;
  rec.true_scale = spec.true_scale;
  try {
    const Model model = resolve_model(spec.mesh_id);
    const Scene scene = generate_scene(spec, options.intrinsics);
    const CuboidDims truth = model.cad_dims.scaled(spec.true_scale);

    const Vec3 coarse_world = spec.world_T_camera.transform(scene.coarse.position);
    rec.coarse_centroid_error = centroid_error(coarse_world.z, truth.dy);
    rec.coarse_position_error = (scene.coarse.position - spec.true_pose.position).norm();

    RefineConfig cfg = options.refine;
    cfg.ransac.seed = spec.seed;
    const RefinementResult res = refine(scene.coarse, model.mesh, model.cad_dims, options.intrinsics, scene.real, cfg);

    const Vec3 refined_world = spec.world_T_camera.transform(res.refined_pose.position);
    rec.mu_opt = res.mu_opt;
    rec.mu_error = res.mu_opt - spec.true_scale;
    rec.centroid_error = centroid_error(refined_world.z, truth.dy);
    rec.dimensional_error = dimensional_error(res.estimated_dims, truth);
    rec.position_error = (res.refined_pose.position - spec.true_pose.position).norm();
    rec.inlier_count = res.inlier_mask.size();
    rec.sample_count = res.sample_count;
    rec.success = true;
  } catch (const Error& e) {
    rec.success = false;
    rec.message = std::string(to_string(e.code())) + ": " + e.what();
  }
  return rec;
}

SweepSummary summarize(const std::vector<EvalRecord>& records) {
  SweepSummary s;
  s.scenes = records.size();
  for (const auto& r : records) {
    if (!r.success) continue;
    ++s.successes;
    s.mean_abs_centroid_error += std::fabs(r.centroid_error);
    s.max_abs_centroid_error = std::max(s.max_abs_centroid_error, std::fabs(r.centroid_error));
    s.mean_abs_coarse_centroid_error += std::fabs(r.coarse_centroid_error);
    s.max_abs_coarse_centroid_error = std::max(s.max_abs_coarse_centroid_error, std::fabs(r.coarse_centroid_error));
    s.mean_dimensional_error += r.dimensional_error;
    s.max_dimensional_error = std::max(s.max_dimensional_error, r.dimensional_error);
    s.max_abs_mu_error = std::max(s.max_abs_mu_error, std::fabs(r.mu_error));
  }
  if (s.successes > 0) {
    const double n = static_cast<double>(s.successes);
    s.mean_abs_centroid_error /= n;
    s.mean_abs_coarse_centroid_error /= n;
    s.mean_dimensional_error /= n;
  }
  s.success_rate = s.scenes ? static_cast<double>(s.successes) / static_cast<double>(s.scenes) : 0.0;
  return s;
}

SweepReport run_sweep(const std::vector<SceneSpec>& specs, const SweepOptions& options) {
  if (specs.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one scene");
  SweepReport report;
  report.records.resize(specs.size());

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(specs.size()));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) report.records[i] = evaluate_scene(specs[i], options);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  report.summary = summarize(report.records);
  return report;
}

std::string format_summary(const SweepReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %12s %12s %12s %10s\n", "scene", "mu*", "mu_opt", "centroid[m]",
                "coarse[m]", "dim_err[m]", "status");
  out += line;
  for (const auto& r : report.records) {
    if (r.success) {
      std::snprintf(line, sizeof line, "%-12s %8.4f %8.4f %12.5f %12.5f %12.5f %10s\n", r.scene_id.c_str(),
                    r.true_scale, r.mu_opt, r.centroid_error, r.coarse_centroid_error, r.dimensional_error, "ok");
    } else {
      std::snprintf(line, sizeof line, "%-12s %8.4f %8s %12s %12s %12s %10s\n", r.scene_id.c_str(), r.true_scale,
                    "-", "-", "-", "-", "failed");
    }
    out += line;
  }
  const SweepSummary& s = report.summary;
  std::snprintf(line, sizeof line, "scenes %zu, refined %zu (%.1f%%)\n", s.scenes, s.successes, 100.0 * s.success_rate);
  out += line;
  std::snprintf(line, sizeof line, "centroid error    mean %.5f m  max %.5f m\n", s.mean_abs_centroid_error,
                s.max_abs_centroid_error);
  out += line;
  std::snprintf(line, sizeof line, "unrefined error   mean %.5f m  max %.5f m\n", s.mean_abs_coarse_centroid_error,
                s.max_abs_coarse_centroid_error);
  out += line;
  std::snprintf(line, sizeof line, "dimensional error mean %.5f m  max %.5f m\n", s.mean_dimensional_error,
                s.max_dimensional_error);
  out += line;
  std::snprintf(line, sizeof line, "max |mu error|    %.6f\n", s.max_abs_mu_error);
  out += line;
  return out;
}

std::vector<SceneSpec> table_scale_fixtures(double depth_noise, double shape_noise, std::uint64_t seed) {
  // Widths of the five test apples over the CAD width.
  constexpr double widths[] = {0.089, 0.091, 0.093, 0.073, 0.062};
  std::vector<SceneSpec> specs;
  for (int i = 0; i < 5; ++i) {
    TabletopView view;
    view.id = "apple" + std::to_string(i + 1);
    view.true_scale = widths[i] / kAppleCadDims.dx;
    view.depth_noise = depth_noise;
    view.shape_noise = shape_noise;
    view.seed = seed + static_cast<std::uint64_t>(i);
    specs.push_back(make_tabletop_scene(view));
  }
  return specs;
}

}  // namespace depthrefine::harness
