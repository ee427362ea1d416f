#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "cavt/camera.hpp"
#include "cavt/tensor.hpp"

namespace cavt {

/// Token groupings for the shared attention core, from a (B,V,F,C,H,W) grid:
///
///   spatial_vanilla  ((B V F), (H W),   C)   per-image spatial attention
///   temporal_1d      ((B V H W), F,     C)   per-pixel frame attention
///   cross_frame      ((B V),   (F H W), C)   joint space-time within a view
///   cross_view       ((B F),   (V H W), C)   joint space-views at a timestep
///
/// Every variant only regroups axes around the channel dimension, so one
/// set of C x C projection weights serves all four.
enum class AttentionLayout { spatial_vanilla, temporal_1d, cross_frame, cross_view };

/// Dense (batch, tokens, channels) view produced by rearrange.
struct TokenTensor {
  std::size_t batch = 0;
  std::size_t tokens = 0;
  std::size_t channels = 0;
  std::vector<double> values;  // row-major (batch, token, channel)

  std::size_t size() const { return batch * tokens * channels; }
  std::size_t index(std::size_t b, std::size_t t, std::size_t c) const {
    return (b * tokens + t) * channels + c;
  }
};

/// Projection weights for scaled dot-product attention. Tokens are row
/// vectors, so a projection is token * W. Heads split the channel axis
/// into head_count contiguous blocks.
struct AttentionWeights {
  Eigen::MatrixXd wq;
  Eigen::MatrixXd wk;
  Eigen::MatrixXd wv;
  Eigen::MatrixXd wo;
  int head_count = 1;

  /// Square C x C, finite, and C divisible by head_count.
  void validate() const;
  std::size_t channels() const { return static_cast<std::size_t>(wq.rows()); }

  static AttentionWeights identity(std::size_t channels, int head_count = 1);
};

/// Observes each row-stochastic attention matrix as it is computed.
using AttentionProbe =
    std::function<void(std::size_t batch, int head, const Eigen::MatrixXd& probs)>;

/// Bijective regrouping of the latent grid into attention tokens.
TokenTensor rearrange(const LatentTensor& tensor, AttentionLayout layout);

/// Exact inverse of rearrange for the same layout and dims.
/// Throws ShapeMismatch if the token shape is inconsistent with dims.
LatentTensor rearrange_inverse(const TokenTensor& tokens, AttentionLayout layout,
                               const std::array<std::size_t, 6>& dims);

/// Multi-head scaled dot-product attention over each batch item:
/// softmax(Q K^T / sqrt(C/heads)) V per head, concatenated, projected by Wo.
TokenTensor attention(const TokenTensor& tokens, const AttentionWeights& weights,
                      const AttentionProbe& probe = {});

/// rearrange -> attention -> rearrange_inverse; dims are preserved.
LatentTensor view_integrated_block(const LatentTensor& tensor,
                                   AttentionLayout layout,
                                   const AttentionWeights& weights,
                                   const AttentionProbe& probe = {});

/// Appends the six ray-embedding channels to the latent, one grid per
/// (view, frame) indexed v * F + f. Original channels are untouched.
LatentTensor concat_plucker(const LatentTensor& tensor,
                            const std::vector<PluckerGrid>& grids);

}  // namespace cavt
