#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantorsum/io.hpp"
#include "cantorsum/pipeline.hpp"
#include "test_support.hpp"

using namespace cantorsum;

TEST_CASE("demo cross pipeline runs green end to end") {
  const auto& r = ts::demo_cross_result();
  REQUIRE(r.ok());
  REQUIRE(r.certificate.has_value());
  REQUIRE(r.replay_result.has_value());
  CHECK(r.replay_result->pass);
  CHECK(r.certificate->J.has_value());
  CHECK_FALSE(r.search->stats.misconfigured);
  REQUIRE(r.closeness_value.has_value());
  CHECK(*r.closeness_value <= rat(5));                       // <= c0
  CHECK(*r.closeness_value <= rat(5) * r.candidate->K.ratio);  // <= c0 rho^(1/2)
}

TEST_CASE("demo self pipeline runs green end to end") {
  const auto& r = ts::demo_self_result();
  REQUIRE(r.ok());
  CHECK(r.certificate->mode == Mode::Self);
  CHECK(r.replay_result->pass);
}

TEST_CASE("identical parameters and seed give identical outputs") {
  auto params = ts::demo_self_params();
  auto a = run_pipeline(params);
  auto b = run_pipeline(params);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.report == b.report);
  CHECK(stats_json(a) == stats_json(b));
  CHECK(serialize_certificate(*a.certificate) == serialize_certificate(*b.certificate));
}

TEST_CASE("oversized c2 stops at an empty construction") {
  PipelineParams p;
  p.K = middle_alpha(rat(3, 10));
  p.refine_level = 2;
  p.c2 = rat(2);  // N = ceil(4 * 1.44) = 6 > |A1|
  p.seed = 1;
  auto r = run_pipeline(p);
  CHECK_FALSE(r.ok());
  CHECK(r.failed_stage == PipelineStage::BuildL0);
  CHECK(r.empty_construction);
  CHECK(r.error.find("construction empty") != std::string::npos);
}

TEST_CASE("invalid inputs fail at the input stage") {
  PipelineParams p;
  p.K = middle_alpha(rat(3, 10));
  p.K.offsets[1] = rat(1, 4);  // overlap
  p.seed = 1;
  auto r = run_pipeline(p);
  CHECK_FALSE(r.ok());
  CHECK(r.failed_stage == PipelineStage::Inputs);
}

TEST_CASE("incommensurable ratios fail at common_ratio") {
  PipelineParams p;
  p.K = middle_alpha(rat(1, 3));
  p.Kp = middle_alpha(rat(1, 4));
  p.seed = 1;
  auto r = run_pipeline(p);
  CHECK_FALSE(r.ok());
  CHECK(r.failed_stage == PipelineStage::CommonRatio);
}

TEST_CASE("commensurable pairs are aligned before the construction") {
  PipelineParams p;
  p.K = middle_alpha(rat(1, 16));
  p.Kp = middle_alpha(rat(1, 4));  // (1/4)^2 = 1/16
  p.c2 = rat(1, 4);
  p.trials = 4;
  p.seed = 1;
  auto r = run_pipeline(p);
  // alignment succeeded iff the run proceeds past common_ratio
  CHECK(r.failed_stage != PipelineStage::CommonRatio);
  if (r.candidate) CHECK(r.candidate->K.ratio == r.candidate->Kp.ratio);
}

TEST_CASE("self mode rejects distinct sets") {
  PipelineParams p;
  p.K = middle_alpha(rat(3, 10));
  p.Kp = middle_alpha(rat(7, 20));
  p.mode = Mode::Self;
  p.seed = 1;
  auto r = run_pipeline(p);
  CHECK(r.failed_stage == PipelineStage::Inputs);
}
