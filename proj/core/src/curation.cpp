#include "cavt/curation.hpp"

#include <future>
#include <thread>

#include <json.hpp>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

MotionLabel clip_motion_or_static(const ClipRecord& clip) {
  if (!clip.flow_pair_labels.has_value() || clip.flow_pair_labels->empty()) {
    return MotionLabel::Unknown;  // unlabeled; handled by the caller
  }
  return classify_clip_motion(*clip.flow_pair_labels);
}

}  // namespace

void ClipRecord::validate() const {
  if (clip_id.empty()) {
    throw InvalidArgument("clip record: empty clip_id");
  }
  if (frame_count < 0 || registered_frames < 0 || registered_frames > frame_count) {
    throw InvalidArgument("clip record '" + clip_id +
                          "': registered_frames must be in [0, frame_count]");
  }
  if (text_area_fraction < 0.0 || text_area_fraction > 1.0) {
    throw InvalidArgument("clip record '" + clip_id +
                          "': text_area_fraction outside [0, 1]");
  }
  if (sfm_point_count.has_value() && *sfm_point_count < 0) {
    throw InvalidArgument("clip record '" + clip_id + "': negative point count");
  }
}

std::string to_string(CurationStage stage) {
  switch (stage) {
    case CurationStage::sfm_registration:
      return "sfm_registration";
    case CurationStage::point_count:
      return "point_count";
    case CurationStage::ocr:
      return "ocr";
    case CurationStage::aesthetic:
      return "aesthetic";
    case CurationStage::motion:
      return "motion";
  }
  throw InvalidArgument("unknown curation stage");
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::sfm_failed:
      return "sfm_failed";
    case RejectReason::sfm_partial_registration:
      return "sfm_partial_registration";
    case RejectReason::point_count_low:
      return "point_count_low";
    case RejectReason::point_count_high:
      return "point_count_high";
    case RejectReason::text_area_high:
      return "text_area_high";
    case RejectReason::aesthetic_low:
      return "aesthetic_low";
    case RejectReason::motion_static:
      return "motion_static";
    case RejectReason::motion_unlabeled:
      return "motion_unlabeled";
  }
  throw InvalidArgument("unknown reject reason");
}

bool passes_stage(const ClipRecord& clip, CurationStage stage,
                  const FilterThresholds& thresholds) {
  switch (stage) {
    case CurationStage::sfm_registration:
      return clip.sfm_point_count.has_value() &&
             clip.registered_frames == clip.frame_count;
    case CurationStage::point_count:
      return clip.sfm_point_count.has_value() &&
             *clip.sfm_point_count >= thresholds.point_count_min &&
             *clip.sfm_point_count <= thresholds.point_count_max;
    case CurationStage::ocr:
      return !(clip.text_area_fraction > thresholds.text_area_max);
    case CurationStage::aesthetic:
      return clip.aesthetic_score >= thresholds.aesthetic_min;
    case CurationStage::motion: {
      if (!clip.flow_pair_labels.has_value() || clip.flow_pair_labels->empty()) {
        return false;  // unlabeled clips cannot be certified
      }
      return clip_motion_or_static(clip) != MotionLabel::Static;
    }
  }
  throw InvalidArgument("unknown curation stage");
}

FilterDecision filter_clip(const ClipRecord& clip, const FilterThresholds& thresholds) {
  clip.validate();
  FilterDecision decision;
  const auto reject = [&decision](RejectReason reason) {
    decision.keep = false;
    decision.reject_reasons.push_back(reason);
  };

  if (!clip.sfm_point_count.has_value()) {
    reject(RejectReason::sfm_failed);
  } else if (clip.registered_frames < clip.frame_count) {
    reject(RejectReason::sfm_partial_registration);
  }
  if (clip.sfm_point_count.has_value()) {
    if (*clip.sfm_point_count < thresholds.point_count_min) {
      reject(RejectReason::point_count_low);
    } else if (*clip.sfm_point_count > thresholds.point_count_max) {
      reject(RejectReason::point_count_high);
    }
  }
  if (clip.text_area_fraction > thresholds.text_area_max) {
    reject(RejectReason::text_area_high);
  }
  if (clip.aesthetic_score < thresholds.aesthetic_min) {
    reject(RejectReason::aesthetic_low);
  }
  if (!clip.flow_pair_labels.has_value() || clip.flow_pair_labels->empty()) {
    reject(RejectReason::motion_unlabeled);
  } else if (clip_motion_or_static(clip) == MotionLabel::Static) {
    reject(RejectReason::motion_static);
  }
  return decision;
}

Manifest run_pipeline(const Manifest& manifest, const FilterThresholds& thresholds,
                      const std::array<CurationStage, 5>& stage_order, int jobs) {
  if (jobs < 1) {
    throw InvalidArgument("run_pipeline: jobs must be >= 1");
  }
  for (const ClipRecord& clip : manifest.clips) {
    clip.validate();
  }

  // Evaluate every stage predicate per clip up front (they are independent),
  // optionally in parallel, then reduce in input order.
  const std::size_t n = manifest.clips.size();
  std::vector<std::array<bool, 5>> passes(n);
  const auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t s = 0; s < stage_order.size(); ++s) {
        passes[i][s] = passes_stage(manifest.clips[i], stage_order[s], thresholds);
      }
    }
  };
  if (jobs == 1 || n < 2) {
    evaluate_range(0, n);
  } else {
    const std::size_t workers = std::min<std::size_t>(jobs, n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, evaluate_range, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  Manifest out;
  out.stage_counts.emplace_back("initial", n);
  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;
  for (std::size_t s = 0; s < stage_order.size(); ++s) {
    std::vector<std::size_t> next;
    next.reserve(alive.size());
    for (const std::size_t i : alive) {
      if (passes[i][s]) next.push_back(i);
    }
    alive = std::move(next);
    out.stage_counts.emplace_back(to_string(stage_order[s]), alive.size());
  }
  out.clips.reserve(alive.size());
  for (const std::size_t i : alive) {
    out.clips.push_back(manifest.clips[i]);
  }
  return out;
}

std::string manifest_to_json(const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["clips"] = nlohmann::ordered_json::array();
  for (const ClipRecord& clip : manifest.clips) {
    nlohmann::ordered_json c;
    c["clip_id"] = clip.clip_id;
    c["frame_count"] = clip.frame_count;
    c["registered_frames"] = clip.registered_frames;
    if (clip.sfm_point_count.has_value()) {
      c["sfm_point_count"] = *clip.sfm_point_count;
    } else {
      c["sfm_point_count"] = nullptr;
    }
    c["text_area_fraction"] = clip.text_area_fraction;
    c["aesthetic_score"] = clip.aesthetic_score;
    c["resolution"] = {clip.resolution.first, clip.resolution.second};
    if (clip.flow_pair_labels.has_value()) {
      auto labels = nlohmann::ordered_json::array();
      for (const MotionLabel label : *clip.flow_pair_labels) {
        labels.push_back(to_string(label));
      }
      c["flow_labels"] = std::move(labels);
    }
    j["clips"].push_back(std::move(c));
  }
  j["stage_counts"] = nlohmann::ordered_json::object();
  for (const auto& [stage, count] : manifest.stage_counts) {
    j["stage_counts"][stage] = count;
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  Manifest manifest;
  if (!j.contains("clips") || !j["clips"].is_array()) {
    throw ParseError("manifest: missing clips array");
  }
  for (const auto& c : j["clips"]) {
    ClipRecord clip;
    try {
      clip.clip_id = c.at("clip_id").get<std::string>();
      clip.frame_count = c.at("frame_count").get<int>();
      clip.registered_frames = c.at("registered_frames").get<int>();
      if (c.contains("sfm_point_count") && !c["sfm_point_count"].is_null()) {
        clip.sfm_point_count = c["sfm_point_count"].get<std::int64_t>();
      }
      clip.text_area_fraction = c.at("text_area_fraction").get<double>();
      clip.aesthetic_score = c.at("aesthetic_score").get<double>();
      if (c.contains("resolution")) {
        clip.resolution = {c["resolution"].at(0).get<int>(),
                           c["resolution"].at(1).get<int>()};
      }
      if (c.contains("flow_labels") && !c["flow_labels"].is_null()) {
        std::vector<MotionLabel> labels;
        for (const auto& name : c["flow_labels"]) {
          labels.push_back(motion_label_from_string(name.get<std::string>()));
        }
        clip.flow_pair_labels = std::move(labels);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("manifest clip: ") + e.what());
    }
    clip.validate();
    manifest.clips.push_back(std::move(clip));
  }
  if (j.contains("stage_counts")) {
    for (const auto& [key, value] : j["stage_counts"].items()) {
      manifest.stage_counts.emplace_back(key, value.get<std::size_t>());
    }
  }
  return manifest;
}

}  // namespace cavt
