#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "depthrefine/grasp.hpp"
#include "depthrefine/harness.hpp"
#include "depthrefine/io.hpp"
#include "depthrefine/refiner.hpp"
#include "depthrefine/renderer.hpp"
#include "depthrefine/simd/kernels.hpp"

namespace depthrefine::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorCode code) noexcept {
  if (is_parse_error(code)) return kParse;
  switch (code) {
    case ErrorCode::Io: return kIo;
    case ErrorCode::InvalidArgument:
    case ErrorCode::DegenerateRay:
    case ErrorCode::BehindCamera: return kInvalidInput;
    case ErrorCode::EmptyGeometry: return kEmptyGeometry;
    case ErrorCode::NoOverlap: return kNoOverlap;
    case ErrorCode::DegenerateScene: return kDegenerateScene;
    case ErrorCode::Numerical: return kNumerical;
    case ErrorCode::NoFeasibleCandidate: return kNoFeasibleGrasp;
    default: return kInternal;
  }
}

namespace {

// Text sink: a file when a path is given, otherwise the caller's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Io, "cannot create " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

harness::Model load_model(const std::string& mesh, const std::optional<CuboidDims>& dims_override) {
  harness::Model model = harness::resolve_model(mesh);
  if (dims_override) model.cad_dims = *dims_override;
  return model;
}

struct RefineFlags {
  RefineConfig cfg;
  void add_to(CLI::App& app) {
    app.add_option("--bound-fraction", cfg.bound_fraction, "sigma bound as a fraction of the coarse z")
        ->capture_default_str();
    app.add_option("--grid", cfg.grid_size, "coarse grid samples")->capture_default_str();
    app.add_option("--tolerance", cfg.sigma_tolerance, "golden-section tolerance on sigma [m]")->capture_default_str();
    app.add_option("--ransac-iterations", cfg.ransac.iterations)->capture_default_str();
    app.add_option("--inlier-threshold", cfg.ransac.inlier_threshold, "RANSAC threshold [m]")->capture_default_str();
    app.add_option("--min-inlier-fraction", cfg.ransac.min_inlier_fraction)->capture_default_str();
    app.add_option("--seed", cfg.ransac.seed, "RANSAC seed")->capture_default_str();
  }
};

struct SceneFlags {
  std::string mesh = "apple";
  double mu = 1.0;
  double distance = 0.5;
  double elevation = 0.9;
  double azimuth = std::numbers::pi / 2.0;
  double yaw = 0.0;
  double noise = 0.0;
  double shape_noise = 0.0;
  double occlusion = 0.0;
  double occluder_offset = 0.1;
  std::uint64_t seed = 1;

  void add_to(CLI::App& app, bool with_mu) {
    app.add_option("--mesh", mesh, "builtin model (apple, box) or OBJ path")->capture_default_str();
    if (with_mu) app.add_option("--mu", mu, "true object scale relative to the CAD model")->capture_default_str();
    app.add_option("--distance", distance, "camera to object distance [m]")->capture_default_str();
    app.add_option("--elevation", elevation, "camera elevation above the table [rad]")->capture_default_str();
    app.add_option("--azimuth", azimuth, "camera azimuth around the object [rad]")->capture_default_str();
    app.add_option("--yaw", yaw, "object yaw about the table normal [rad]")->capture_default_str();
    app.add_option("--noise", noise, "depth noise sigma [m]")->capture_default_str();
    app.add_option("--shape-noise", shape_noise, "vertex perturbation amplitude [m]")->capture_default_str();
    app.add_option("--occlusion", occlusion, "fraction of the silhouette hidden by an occluder")->capture_default_str();
    app.add_option("--occluder-offset", occluder_offset, "occluder distance in front of the object [m]")
        ->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
  }

  harness::TabletopView view(const std::string& id, double scale, std::uint64_t scene_seed) const {
    harness::TabletopView v;
    v.id = id;
    v.mesh_id = mesh;
    v.true_scale = scale;
    v.distance = distance;
    v.elevation = elevation;
    v.azimuth = azimuth;
    v.object_yaw = yaw;
    v.depth_noise = noise;
    v.shape_noise = shape_noise;
    if (occlusion > 0.0) v.occluder = harness::OccluderSpec{occlusion, occluder_offset};
    v.seed = scene_seed;
    return v;
  }
};

void write_records(std::ostream& out, const std::vector<harness::EvalRecord>& records) {
  for (const auto& r : records) out << io::to_json(r).dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-based scale and position refinement of RGB-only object poses"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "kernel variant: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();

  // render
  auto* render_cmd = app.add_subcommand("render", "render the virtual depth map of a mesh at a pose");
  std::string r_mesh = "apple", r_config, r_out;
  double r_scale = 1.0, r_sigma = 0.0;
  render_cmd->add_option("--mesh", r_mesh, "builtin model or OBJ path")->capture_default_str();
  render_cmd->add_option("--config", r_config, "pose and intrinsics JSON")->required();
  render_cmd->add_option("--scale", r_scale, "uniform model scale")->capture_default_str();
  render_cmd->add_option("--sigma", r_sigma, "shift along the viewing ray before rendering [m]")->capture_default_str();
  render_cmd->add_option("--out", r_out, "output PFM")->required();

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "refine position and scale against a measured depth map");
  std::string f_mesh = "apple", f_config, f_depth, f_out;
  double f_depth_scale = 1.0;
  RefineFlags f_flags;
  refine_cmd->add_option("--mesh", f_mesh, "builtin model or OBJ path")->capture_default_str();
  refine_cmd->add_option("--config", f_config, "coarse pose and intrinsics JSON")->required();
  refine_cmd->add_option("--depth", f_depth, "measured depth map (.pfm, or 16-bit .pgm)")->required();
  refine_cmd->add_option("--depth-scale", f_depth_scale, "meters per stored depth unit")->capture_default_str();
  refine_cmd->add_option("--out", f_out, "result JSON (default: stdout)");
  f_flags.add_to(*refine_cmd);

  // sample-grasps
  auto* grasp_cmd = app.add_subcommand("sample-grasps", "sample pre-grasp poses around a refined position");
  std::vector<double> g_position, g_qtilde{1.0, 0.0, 0.0, 0.0};
  std::string g_result, g_config, g_out;
  GraspSamplingConfig g_cfg;
  grasp_cmd->add_option("--position", g_position, "object position in the world frame")->expected(3);
  grasp_cmd->add_option("--result", g_result, "refine output; its camera-frame position is mapped to the world");
  grasp_cmd->add_option("--config", g_config, "JSON with world_T_camera (needed with --result)");
  grasp_cmd->add_option("--radius", g_cfg.radius, "sphere radius [m]")->capture_default_str();
  grasp_cmd->add_option("--alpha-samples", g_cfg.alpha_samples)->capture_default_str();
  grasp_cmd->add_option("--theta-samples", g_cfg.theta_samples)->capture_default_str();
  grasp_cmd->add_option("--theta-max", g_cfg.theta_max, "[rad]")->capture_default_str();
  grasp_cmd->add_option("--q-tilde", g_qtilde, "approach alignment quaternion w x y z")->expected(4);
  grasp_cmd->add_option("--table-height", g_cfg.table_height, "world z below which candidates are dropped")
      ->capture_default_str();
  grasp_cmd->add_option("--out", g_out, "candidates as JSON lines (default: stdout)");
  auto* g_src = grasp_cmd->add_option_group("source");
  g_src->add_option(grasp_cmd->get_option("--position"));
  g_src->add_option(grasp_cmd->get_option("--result"));
  g_src->require_option(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate one synthetic scene, refine it and score it");
  SceneFlags s_flags;
  std::string s_out_dir;
  s_flags.add_to(*sim_cmd, true);
  sim_cmd->add_option("--out-dir", s_out_dir, "directory for real.pfm, scene.json, records.jsonl, summary.txt")
      ->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "sweep synthetic scenes and report accuracy metrics");
  SceneFlags e_flags;
  std::vector<double> e_mus;
  unsigned e_threads = 0;
  std::string e_out_dir;
  e_flags.add_to(*eval_cmd, false);
  eval_cmd->add_option("--mu", e_mus, "true scales to sweep (default: the five apple fixtures)");
  eval_cmd->add_option("--threads", e_threads, "worker threads (0: all cores)")->capture_default_str();
  eval_cmd->add_option("--out-dir", e_out_dir, "directory for records.jsonl and summary.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simd == "scalar") simd::set_isa(simd::Isa::Scalar);
    if (simd == "avx2" && !simd::set_isa(simd::Isa::Avx2)) {
      err << "avx2 kernels unavailable on this machine\n";
      return kUsage;
    }

    if (*render_cmd) {
      const auto cfg = io::load_pose_and_intrinsics(r_config);
      const auto model = load_model(r_mesh, std::nullopt);
      const ScaledPose moved = apply_sigma_to_pose(cfg.pose, r_sigma);
      io::store_pfm(fs::path(r_out), render_depth(model.mesh, moved.pose, r_scale * moved.mu, cfg.intrinsics));
      return kOk;
    }

    if (*refine_cmd) {
      const auto cfg = io::load_pose_and_intrinsics(f_config);
      const auto model = load_model(f_mesh, cfg.cad_dims);
      const DepthMap real = io::load_depth(f_depth, f_depth_scale);
      const RefinementResult res = refine(cfg.pose, model.mesh, cfg.cad_dims, cfg.intrinsics, real, f_flags.cfg);
      Output sink(f_out, out);
      *sink << io::to_json(res).dump(2) << '\n';
      return kOk;
    }

    if (*grasp_cmd) {
      Vec3 center;
      if (!g_result.empty()) {
        std::ifstream in(g_result);
        if (!in) throw Error(ErrorCode::Io, "cannot open " + g_result);
        json doc;
        try {
          in >> doc;
        } catch (const json::parse_error& e) {
          throw Error(ErrorCode::ParseSyntax, g_result + ": " + e.what());
        }
        if (!doc.contains("refined_pose")) throw Error(ErrorCode::ParseSyntax, "result lacks refined_pose");
        center = io::parse_pose(doc.at("refined_pose")).position;
        if (!g_config.empty()) {
          const auto cfg = io::load_pose_and_intrinsics(g_config);
          if (!cfg.world_T_camera) throw Error(ErrorCode::ParseSyntax, "config lacks world_T_camera");
          center = cfg.world_T_camera->transform(center);
        }
      } else {
        center = {g_position[0], g_position[1], g_position[2]};
      }
      g_cfg.approach_alignment = io::parse_quaternion(json(g_qtilde), "q-tilde");
      const auto candidates = sample_candidates(center, g_cfg);
      Output sink(g_out, out);
      for (const auto& c : candidates) *sink << io::to_json(c).dump() << '\n';
      return kOk;
    }

    if (*sim_cmd) {
      const fs::path dir(s_out_dir);
      fs::create_directories(dir);
      const harness::SceneSpec spec = harness::make_tabletop_scene(s_flags.view("scene", s_flags.mu, s_flags.seed));
      const harness::SweepOptions options;
      const harness::Scene scene = harness::generate_scene(spec, options.intrinsics);
      const harness::Model model = harness::resolve_model(spec.mesh_id);

      io::store_pfm(dir / "real.pfm", scene.real);
      io::PoseAndIntrinsics coarse{scene.coarse, options.intrinsics, spec.world_T_camera, model.cad_dims};
      write_text(dir / "scene.json", io::to_json(coarse).dump(2) + "\n");
      json truth = {{"true_pose", io::to_json(spec.true_pose)},
                    {"true_scale", spec.true_scale},
                    {"true_dims", io::to_json(model.cad_dims.scaled(spec.true_scale).as_vec())},
                    {"occluded_pixels", scene.occluded.size()},
                    {"object_pixels", scene.object_support.size()}};
      write_text(dir / "truth.json", truth.dump(2) + "\n");

      harness::SweepReport report;
      report.records.push_back(harness::evaluate_scene(spec, options));
      report.summary = harness::summarize(report.records);
      std::ofstream records(dir / "records.jsonl", std::ios::binary);
      write_records(records, report.records);
      write_text(dir / "summary.txt", harness::format_summary(report));
      out << harness::format_summary(report);
      return kOk;
    }

    if (*eval_cmd) {
      std::vector<harness::SceneSpec> specs;
      if (e_mus.empty()) {
        specs = harness::table_scale_fixtures(e_flags.noise, e_flags.shape_noise, e_flags.seed);
        for (auto& s : specs) {
          if (e_flags.occlusion > 0.0) s.occluder = harness::OccluderSpec{e_flags.occlusion, e_flags.occluder_offset};
        }
      } else {
        for (std::size_t i = 0; i < e_mus.size(); ++i) {
          specs.push_back(harness::make_tabletop_scene(
              e_flags.view("mu" + std::to_string(i), e_mus[i], e_flags.seed + i)));
        }
      }
      harness::SweepOptions options;
      options.threads = e_threads;
      const harness::SweepReport report = harness::run_sweep(specs, options);
      const std::string summary = harness::format_summary(report);
      if (!e_out_dir.empty()) {
        const fs::path dir(e_out_dir);
        fs::create_directories(dir);
        std::ofstream records(dir / "records.jsonl", std::ios::binary);
        write_records(records, report.records);
        write_text(dir / "summary.txt", summary);
        write_text(dir / "summary.json", io::to_json(report.summary).dump(2) + "\n");
      } else {
        write_records(out, report.records);
      }
      out << summary;
      return kOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace depthrefine::cli
