#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "depthrefine/error.hpp"
#include "depthrefine/harness.hpp"
#include "depthrefine/mesh.hpp"
#include "depthrefine/refiner.hpp"
#include "depthrefine/renderer.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace depthrefine {
namespace {

namespace h = depthrefine::harness;

h::TabletopView view_of(const char* id, double scale) {
  h::TabletopView v;
  v.id = id;
  v.true_scale = scale;
  return v;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(Objective, ZeroAtTheGeneratingPose) {
  const auto mesh = make_ellipsoid(h::kAppleCadDims);
  const Pose pose{{0.01, -0.02, 0.5}, UnitQuaternion::from_axis_angle({1, 0, 1}, 0.4)};
  const DepthMap real = render_depth(mesh, pose, 1.0, testing::vga());
  EXPECT_EQ(objective(0.0, mesh, pose, testing::vga(), real), 0.0);
}

// A fronto-parallel square keeps its support exactly, so the objective is
// (mu - 1)^2 times the mean squared depth.
TEST(Objective, QuadraticInScaleForAPlane) {
  const auto mesh = make_square(0.25);
  const Pose pose{{0, 0, 1.0}, {}};
  const DepthMap real = render_depth(mesh, pose, 1.0, testing::vga());
  for (double sigma : {-0.5, -0.2, 0.1, 0.3, 0.6}) {
    // Stored depths are float.
    const double mu = static_cast<float>(1.0 - sigma);
    EXPECT_NEAR(objective(sigma, mesh, pose, testing::vga(), real), (mu - 1) * (mu - 1), 1e-12);
  }
}

TEST(Objective, SinglePixelOffsetOnTinyCamera) {
  const CameraIntrinsics intr{10, 10, 4.5, 4.5, 10, 10};
  const auto mesh = make_square(2.0);
  const Pose pose{{0, 0, 1.0}, {}};
  DepthMap real = render_depth(mesh, pose, 1.0, intr);
  ASSERT_EQ(pixel_support(real).size(), 100u);
  real.at(3, 7) = 1.05f;
  const double diff = static_cast<double>(1.05f) - 1.0;
  EXPECT_NEAR(objective(0.0, mesh, pose, intr, real), diff * diff / 100.0, 1e-15);
  EXPECT_NEAR(objective(0.0, mesh, pose, intr, real), 2.5e-5, 1e-9);

  // Masked out, the offset pixel no longer counts.
  PixelSet mask = pixel_support(real);
  std::erase(mask.indices, static_cast<std::uint32_t>(real.index(3, 7)));
  EXPECT_EQ(objective(0.0, mesh, pose, intr, real, &mask), 0.0);
}

TEST(Objective, Errors) {
  const auto mesh = make_square(0.2);
  const Pose pose{{0, 0, 1.0}, {}};
  const DepthMap empty(640, 480);
  EXPECT_EQ(code_of([&] { objective(0.0, mesh, pose, testing::vga(), empty); }), ErrorCode::NoOverlap);
  const DepthMap real = render_depth(mesh, pose, 1.0, testing::vga());
  EXPECT_EQ(code_of([&] { objective(1.0, mesh, pose, testing::vga(), real); }), ErrorCode::InvalidArgument);
  const DepthMap small(32, 24);
  EXPECT_EQ(code_of([&] { objective(0.0, mesh, pose, testing::vga(), small); }), ErrorCode::InvalidArgument);
}

TEST(Refine, FixedPointAtTrueScale) {
  const h::Model model = h::resolve_model("apple");
  const Pose pose{{0.02, 0.01, 0.5}, UnitQuaternion::from_axis_angle({0.3, 1, 0.2}, 0.8)};
  const DepthMap real = render_depth(model.mesh, pose, 1.0, testing::vga());
  const RefinementResult r = refine(pose, model.mesh, model.cad_dims, testing::vga(), real);
  EXPECT_NEAR(r.mu_opt, 1.0, 1e-3);
  EXPECT_NEAR(r.sigma_opt, 0.0, 5e-4);
  EXPECT_EQ(r.inlier_mask.size(), r.sample_count);
  EXPECT_LT(r.rms_residual, 1e-4);
}

TEST(Refine, UpdatesFollowTheScale) {
  const h::Model model = h::resolve_model("apple");
  const h::SceneSpec spec = h::make_tabletop_scene(view_of("t", 0.763));
  const h::Scene scene = h::generate_scene(spec, testing::vga());
  const RefinementResult r = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);

  const SigmaTransform t{r.sigma_opt, scene.coarse.position};
  EXPECT_DOUBLE_EQ(r.mu_opt, scale_factor(t));
  EXPECT_LT((r.refined_pose.position - sigma_translate(t)).norm(), 1e-15);
  EXPECT_LT((r.refined_pose.position - r.mu_opt * scene.coarse.position).norm(), 1e-12);
  EXPECT_EQ(r.refined_pose.orientation, scene.coarse.orientation);
  EXPECT_DOUBLE_EQ(r.estimated_dims.dx, r.mu_opt * model.cad_dims.dx);
  EXPECT_DOUBLE_EQ(r.estimated_dims.dy, r.mu_opt * model.cad_dims.dy);
  EXPECT_DOUBLE_EQ(r.estimated_dims.dz, r.mu_opt * model.cad_dims.dz);
  EXPECT_DOUBLE_EQ(r.rms_residual, std::sqrt(r.objective_value));
  EXPECT_LE(std::fabs(r.sigma_opt), 0.8 * scene.coarse.position.z);
  EXPECT_NEAR(r.mu_opt, 0.763, 1e-3);
}

TEST(Refine, RecoversApple5Dimensions) {
  const h::Model model = h::resolve_model("apple");
  const h::SceneSpec spec = h::make_tabletop_scene(view_of("a5", 0.648));
  const h::Scene scene = h::generate_scene(spec, testing::vga());
  const RefinementResult r = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);
  EXPECT_LT(h::dimensional_error(r.estimated_dims, model.cad_dims.scaled(0.648)), 1e-3);
  EXPECT_LT((r.refined_pose.position - spec.true_pose.position).norm(), 1e-3);
}

TEST(Refine, MatchesClosedFormScale) {
  const h::Model model = h::resolve_model("apple");
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> scale(0.6, 1.2), yaw(-3.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    h::TabletopView view = view_of("c", scale(rng));
    view.object_yaw = yaw(rng);
    view.depth_noise = 0.002;
    view.seed = static_cast<std::uint64_t>(i);
    const h::SceneSpec spec = h::make_tabletop_scene(view);
    const h::Scene scene = h::generate_scene(spec, testing::vga());
    const RefinementResult r = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);
    const DepthMap d0 = render_depth(model.mesh, scene.coarse, 1.0, testing::vga());
    const double mu_ls = testing::closed_form_scale(scene.real, d0, r.inlier_mask);
    EXPECT_LT(std::fabs(r.mu_opt - mu_ls) / r.mu_opt, 1e-3);
  }
}

TEST(Refine, IgnoresAnOccluder) {
  const h::Model model = h::resolve_model("apple");
  h::TabletopView view = view_of("o", 0.897);
  view.occluder = h::OccluderSpec{};
  const h::SceneSpec spec = h::make_tabletop_scene(view);
  const h::Scene scene = h::generate_scene(spec, testing::vga());
  ASSERT_GE(scene.occluded.size(), scene.object_support.size() / 6);
  const RefinementResult r = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);
  std::size_t kept_occluded = 0;
  for (auto i : scene.occluded.indices) kept_occluded += r.inlier_mask.contains(i);
  EXPECT_LE(kept_occluded, scene.occluded.size() / 20);
  EXPECT_LT(h::dimensional_error(r.estimated_dims, model.cad_dims.scaled(0.897)), 2e-3);
}

TEST(Refine, Deterministic) {
  const h::Model model = h::resolve_model("apple");
  h::TabletopView view = view_of("d", 0.9);
  view.occluder = h::OccluderSpec{};
  view.depth_noise = 0.002;
  view.shape_noise = 0.001;
  view.seed = 3;
  const h::Scene scene = h::generate_scene(h::make_tabletop_scene(view), testing::vga());
  const RefinementResult a = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);
  const RefinementResult b = refine(scene.coarse, model.mesh, model.cad_dims, testing::vga(), scene.real);
  EXPECT_EQ(a.sigma_opt, b.sigma_opt);
  EXPECT_EQ(a.inlier_mask, b.inlier_mask);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Refine, Errors) {
  const h::Model model = h::resolve_model("apple");
  const Pose pose{{0, 0, 0.5}, {}};
  const CameraIntrinsics intr = testing::vga();

  DepthMap disjoint(640, 480);
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) disjoint.at(r, c) = 0.5f;
  }
  EXPECT_EQ(code_of([&] { refine(pose, model.mesh, model.cad_dims, intr, disjoint); }), ErrorCode::NoOverlap);

  DepthMap single(640, 480);
  single.at(240, 320) = 0.45f;
  EXPECT_EQ(code_of([&] { refine(pose, model.mesh, model.cad_dims, intr, single); }), ErrorCode::DegenerateScene);

  const DepthMap real = render_depth(model.mesh, pose, 1.0, intr);
  EXPECT_EQ(code_of([&] { refine({{0, 0, -0.5}, {}}, model.mesh, model.cad_dims, intr, real); }),
            ErrorCode::InvalidArgument);
  RefineConfig bad;
  bad.bound_fraction = 1.0;
  EXPECT_EQ(code_of([&] { refine(pose, model.mesh, model.cad_dims, intr, real, bad); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { refine(pose, TriangleMesh{}, model.cad_dims, intr, real); }), ErrorCode::EmptyGeometry);
  EXPECT_EQ(code_of([&] { refine(pose, model.mesh, model.cad_dims, intr, DepthMap(64, 48)); }),
            ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace depthrefine
