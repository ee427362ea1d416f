#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cavt {

/// How a monocular source clip is split into V synchronized views.
///
///   blocks      each view gets a contiguous run after the shared start
///   interleave  frames dealt round-robin after the shared start
///   pivot       two views walking outward from a central pivot frame
enum class ReformatScheme { blocks, interleave, pivot };

std::string to_string(ReformatScheme scheme);
ReformatScheme reformat_scheme_from_string(const std::string& name);

/// Per-view ordered source-frame indices.
struct ViewAssignment {
  ReformatScheme scheme = ReformatScheme::blocks;
  std::vector<std::vector<int>> views;

  int view_count() const { return static_cast<int>(views.size()); }
  int frames_per_view() const {
    return views.empty() ? 0 : static_cast<int>(views.front().size());
  }
};

/// Serialized as {"scheme": "...", "views": [[...], ...]}.
std::string view_assignment_to_json(const ViewAssignment& assignment);
ViewAssignment view_assignment_from_json(const std::string& text);

/// Splits `source_len` frames (subsampled by `stride`) into V views of F
/// frames each. blocks/interleave consume exactly (F-1)*V+1 distinct frames
/// with a shared first frame; pivot needs V = 2 and walks backward/forward
/// from frame F-1. Throws InsufficientFrames when the source is too short.
ViewAssignment reformat_static(int source_len, int frames_per_view, int view_count,
                               ReformatScheme scheme, int stride = 1);

/// Frame-order reversal augmentation: each view plays back reversed, and the
/// reversed list's first element becomes that view's anchor frame.
std::vector<int> reverse_augment(std::vector<int> indices);
ViewAssignment reverse_augment(ViewAssignment assignment);

/// Frame-stride sampling rules per source kind.
enum class SourceKind { static_scene, monocular, dynamic_render };

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& name);

struct StrideRule {
  SourceKind source_kind;
  int stride_min;
  int stride_max;
};

/// Pinned ranges: static scenes [1, 8], monocular [1, 2], dynamic renders
/// fixed at 1.
StrideRule stride_rule(SourceKind kind);

/// Uniform stride from the rule's inclusive range, deterministic per seed.
int sample_stride(const StrideRule& rule, std::uint64_t seed);

}  // namespace cavt
