#include "cavt/reformat.hpp"

#include <algorithm>

#include <json.hpp>

#include "cavt/errors.hpp"
#include "cavt/rng.hpp"

namespace cavt {

namespace {

// Source indices surviving stride subsampling: 0, stride, 2*stride, ...
std::vector<int> strided_indices(int source_len, int stride) {
  std::vector<int> indices;
  for (int i = 0; i < source_len; i += stride) {
    indices.push_back(i);
  }
  return indices;
}

}  // namespace

std::string to_string(ReformatScheme scheme) {
  switch (scheme) {
    case ReformatScheme::blocks:
      return "blocks";
    case ReformatScheme::interleave:
      return "interleave";
    case ReformatScheme::pivot:
      return "pivot";
  }
  throw InvalidArgument("unknown reformat scheme");
}

ReformatScheme reformat_scheme_from_string(const std::string& name) {
  if (name == "blocks") return ReformatScheme::blocks;
  if (name == "interleave") return ReformatScheme::interleave;
  if (name == "pivot") return ReformatScheme::pivot;
  throw InvalidArgument("unknown reformat scheme: " + name);
}

std::string view_assignment_to_json(const ViewAssignment& assignment) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(assignment.scheme);
  j["views"] = assignment.views;
  return j.dump(2) + "\n";
}

ViewAssignment view_assignment_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("view assignment: ") + e.what());
  }
  if (!j.contains("scheme") || !j.contains("views")) {
    throw ParseError("view assignment: missing scheme or views");
  }
  ViewAssignment assignment;
  assignment.scheme = reformat_scheme_from_string(j["scheme"].get<std::string>());
  assignment.views = j["views"].get<std::vector<std::vector<int>>>();
  return assignment;
}

ViewAssignment reformat_static(int source_len, int frames_per_view, int view_count,
                               ReformatScheme scheme, int stride) {
  if (frames_per_view < 1 || view_count < 1 || stride < 1 || source_len < 1) {
    throw InvalidArgument("reformat_static: counts and stride must be >= 1");
  }
  const std::vector<int> source = strided_indices(source_len, stride);
  const int available = static_cast<int>(source.size());
  const int f = frames_per_view;
  const int v = view_count;

  ViewAssignment assignment;
  assignment.scheme = scheme;
  assignment.views.assign(static_cast<std::size_t>(v), {});

  switch (scheme) {
    case ReformatScheme::blocks: {
      const int needed = (f - 1) * v + 1;
      if (available < needed) {
        throw InsufficientFrames("reformat_static: need " + std::to_string(needed) +
                                 " frames after stride, have " +
                                 std::to_string(available));
      }
      for (int view = 0; view < v; ++view) {
        auto& indices = assignment.views[view];
        indices.push_back(source[0]);
        for (int k = view * (f - 1) + 1; k <= (view + 1) * (f - 1); ++k) {
          indices.push_back(source[k]);
        }
      }
      break;
    }
    case ReformatScheme::interleave: {
      const int needed = (f - 1) * v + 1;
      if (available < needed) {
        throw InsufficientFrames("reformat_static: need " + std::to_string(needed) +
                                 " frames after stride, have " +
                                 std::to_string(available));
      }
      for (int view = 0; view < v; ++view) {
        auto& indices = assignment.views[view];
        indices.push_back(source[0]);
        for (int k = 0; k < f - 1; ++k) {
          indices.push_back(source[view + 1 + k * v]);
        }
      }
      break;
    }
    case ReformatScheme::pivot: {
      if (v != 2) {
        throw InvalidArgument("reformat_static: pivot scheme requires exactly 2 views");
      }
      const int needed = 2 * f - 1;
      if (available < needed) {
        throw InsufficientFrames("reformat_static: pivot needs " +
                                 std::to_string(needed) + " frames after stride, have " +
                                 std::to_string(available));
      }
      const int pivot = f - 1;
      for (int k = 0; k < f; ++k) {
        assignment.views[0].push_back(source[pivot - k]);
        assignment.views[1].push_back(source[pivot + k]);
      }
      break;
    }
  }
  return assignment;
}

std::vector<int> reverse_augment(std::vector<int> indices) {
  std::reverse(indices.begin(), indices.end());
  return indices;
}

ViewAssignment reverse_augment(ViewAssignment assignment) {
  for (auto& view : assignment.views) {
    std::reverse(view.begin(), view.end());
  }
  return assignment;
}

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::static_scene:
      return "static_scene";
    case SourceKind::monocular:
      return "monocular";
    case SourceKind::dynamic_render:
      return "dynamic_render";
  }
  throw InvalidArgument("unknown source kind");
}

SourceKind source_kind_from_string(const std::string& name) {
  if (name == "static_scene") return SourceKind::static_scene;
  if (name == "monocular") return SourceKind::monocular;
  if (name == "dynamic_render") return SourceKind::dynamic_render;
  throw InvalidArgument("unknown source kind: " + name);
}

StrideRule stride_rule(SourceKind kind) {
  switch (kind) {
    case SourceKind::static_scene:
      return StrideRule{kind, 1, 8};
    case SourceKind::monocular:
      return StrideRule{kind, 1, 2};
    case SourceKind::dynamic_render:
      return StrideRule{kind, 1, 1};
  }
  throw InvalidArgument("unknown source kind");
}

int sample_stride(const StrideRule& rule, std::uint64_t seed) {
  if (rule.stride_min < 1 || rule.stride_min > rule.stride_max) {
    throw InvalidArgument("sample_stride: invalid stride range");
  }
  Rng rng(seed);
  return static_cast<int>(rng.uniform_int(rule.stride_min, rule.stride_max));
}

}  // namespace cavt
