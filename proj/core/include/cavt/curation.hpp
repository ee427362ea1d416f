#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavt/flow.hpp"

namespace cavt {

/// Per-clip attributes gathered by the external annotation tools.
/// sfm_point_count is absent when structure-from-motion failed outright.
struct ClipRecord {
  std::string clip_id;
  int frame_count = 0;
  int registered_frames = 0;
  std::optional<std::int64_t> sfm_point_count;
  double text_area_fraction = 0.0;
  double aesthetic_score = 0.0;
  std::optional<std::vector<MotionLabel>> flow_pair_labels;
  std::pair<int, int> resolution{0, 0};

  void validate() const;
};

/// Filter thresholds; defaults are the pinned reference values.
struct FilterThresholds {
  std::int64_t point_count_min = 1000;
  std::int64_t point_count_max = 40000;
  double text_area_max = 1e-4;   // reject strictly above
  double aesthetic_min = 4.0;    // keep at or above
  MotionClassifierConfig motion;
};

/// Pipeline stages, in canonical order.
enum class CurationStage { sfm_registration, point_count, ocr, aesthetic, motion };

constexpr std::array<CurationStage, 5> kCurationStageOrder = {
    CurationStage::sfm_registration, CurationStage::point_count,
    CurationStage::ocr, CurationStage::aesthetic, CurationStage::motion};

std::string to_string(CurationStage stage);

/// Why a clip was rejected.
enum class RejectReason {
  sfm_failed,
  sfm_partial_registration,
  point_count_low,
  point_count_high,
  text_area_high,
  aesthetic_low,
  motion_static,
  motion_unlabeled,
};

std::string to_string(RejectReason reason);

struct FilterDecision {
  bool keep = true;
  std::vector<RejectReason> reject_reasons;
};

/// Evaluates every stage predicate and reports all violations.
FilterDecision filter_clip(const ClipRecord& clip,
                           const FilterThresholds& thresholds = {});

/// True iff the clip passes the given stage's predicate.
bool passes_stage(const ClipRecord& clip, CurationStage stage,
                  const FilterThresholds& thresholds = {});

/// Clip collection plus per-stage surviving counts, in pipeline order.
struct Manifest {
  std::vector<ClipRecord> clips;
  std::vector<std::pair<std::string, std::size_t>> stage_counts;
};

/// Runs the stage filters in the given order, recording the surviving count
/// after each stage (plus an "initial" entry). `jobs` > 1 evaluates clip
/// predicates concurrently; counts and the surviving set are identical
/// regardless of scheduling.
Manifest run_pipeline(const Manifest& manifest,
                      const FilterThresholds& thresholds = {},
                      const std::array<CurationStage, 5>& stage_order = kCurationStageOrder,
                      int jobs = 1);

/// Manifest JSON: {"clips": [...], "stage_counts": {...}}.
std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);

}  // namespace cavt
