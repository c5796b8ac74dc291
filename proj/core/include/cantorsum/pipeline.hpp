#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cantorsum/search.hpp"

namespace cantorsum {

struct PipelineParams {
  HomogeneousIFS K;
  std::optional<HomogeneousIFS> Kp;  // default: an independent copy of K
  Mode mode = Mode::Cross;
  Rational c0 = 5;
  Rational c2 = 1;
  int refine_level = 1;  // applied to both presentations after common_ratio
  long trials = 200;
  std::uint64_t seed = 0;
  bool full_scan_stats = false;
  int workers = 0;
  int ratio_cap = 12;
};

enum class PipelineStage {
  Inputs,
  CommonRatio,
  Refine,
  Classify,
  Partitions,
  BuildL0,
  BuildE,
  DeltaNet,
  Search,
  Verify,
  Replay,
  Done
};

std::string to_string(PipelineStage s);

struct PipelineResult {
  PipelineStage failed_stage = PipelineStage::Done;  // Done on success
  std::string error;
  bool empty_construction = false;

  std::optional<GoodPairTable> table;
  std::optional<RecurrentCandidate> candidate;
  std::optional<EReport> e_report;
  std::size_t net_size = 0;
  std::optional<SearchResult> search;
  std::optional<Certificate> certificate;
  std::optional<ReplayResult> replay_result;
  std::optional<Rational> closeness_value;

  std::string report;  // deterministic human-readable summary

  bool ok() const { return failed_stage == PipelineStage::Done; }
};

// common_ratio -> refine -> classify_pairs -> partitions -> build_L0
// [-> build_E] -> delta_net -> search_omega -> verify_recurrent -> replay.
PipelineResult run_pipeline(const PipelineParams& params);

// Deterministic stats rendering (JSON) for a finished search.
std::string stats_json(const PipelineResult& result);

}  // namespace cantorsum
