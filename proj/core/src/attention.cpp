#include "cavt/attention.hpp"

#include <cmath>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

struct TokenShape {
  std::size_t batch;
  std::size_t tokens;
};

TokenShape token_shape(const std::array<std::size_t, 6>& dims, AttentionLayout layout) {
  const auto [b, v, f, c, h, w] = dims;
  switch (layout) {
    case AttentionLayout::spatial_vanilla:
      return {b * v * f, h * w};
    case AttentionLayout::temporal_1d:
      return {b * v * h * w, f};
    case AttentionLayout::cross_frame:
      return {b * v, f * h * w};
    case AttentionLayout::cross_view:
      return {b * f, v * h * w};
  }
  throw InvalidArgument("unknown attention layout");
}

// Token coordinates of grid position (b, v, f, h, w) under a layout.
std::pair<std::size_t, std::size_t> token_coords(
    const std::array<std::size_t, 6>& dims, AttentionLayout layout,
    std::size_t b, std::size_t v, std::size_t f, std::size_t h, std::size_t w) {
  const std::size_t vd = dims[1], fd = dims[2], hd = dims[4], wd = dims[5];
  switch (layout) {
    case AttentionLayout::spatial_vanilla:
      return {(b * vd + v) * fd + f, h * wd + w};
    case AttentionLayout::temporal_1d:
      return {((b * vd + v) * hd + h) * wd + w, f};
    case AttentionLayout::cross_frame:
      return {b * vd + v, (f * hd + h) * wd + w};
    case AttentionLayout::cross_view:
      return {b * fd + f, (v * hd + h) * wd + w};
  }
  throw InvalidArgument("unknown attention layout");
}

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

void AttentionWeights::validate() const {
  const auto check_square = [&](const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw ShapeMismatch(std::string("attention weights: ") + name + " must be square");
    }
    if (m.rows() != wq.rows()) {
      throw ShapeMismatch("attention weights: projection sizes differ");
    }
    if (!m.allFinite()) {
      throw InvalidArgument(std::string("attention weights: ") + name + " has non-finite entries");
    }
  };
  check_square(wq, "Wq");
  check_square(wk, "Wk");
  check_square(wv, "Wv");
  check_square(wo, "Wo");
  if (head_count < 1 || wq.rows() % head_count != 0) {
    throw InvalidArgument("attention weights: head_count must divide C");
  }
}

AttentionWeights AttentionWeights::identity(std::size_t channels, int head_count) {
  const auto n = static_cast<Eigen::Index>(channels);
  return AttentionWeights{Eigen::MatrixXd::Identity(n, n),
                          Eigen::MatrixXd::Identity(n, n),
                          Eigen::MatrixXd::Identity(n, n),
                          Eigen::MatrixXd::Identity(n, n), head_count};
}

TokenTensor rearrange(const LatentTensor& tensor, AttentionLayout layout) {
  tensor.validate();
  const auto shape = token_shape(tensor.dims, layout);

  TokenTensor out;
  out.batch = shape.batch;
  out.tokens = shape.tokens;
  out.channels = tensor.channels();
  out.values.resize(out.size());

  const auto [bd, vd, fd, cd, hd, wd] = tensor.dims;
  for (std::size_t b = 0; b < bd; ++b)
    for (std::size_t v = 0; v < vd; ++v)
      for (std::size_t f = 0; f < fd; ++f)
        for (std::size_t h = 0; h < hd; ++h)
          for (std::size_t w = 0; w < wd; ++w) {
            const auto [tb, tt] = token_coords(tensor.dims, layout, b, v, f, h, w);
            for (std::size_t c = 0; c < cd; ++c) {
              out.values[out.index(tb, tt, c)] = tensor.at(b, v, f, c, h, w);
            }
          }
  return out;
}

LatentTensor rearrange_inverse(const TokenTensor& tokens, AttentionLayout layout,
                               const std::array<std::size_t, 6>& dims) {
  const auto shape = token_shape(dims, layout);
  if (tokens.batch != shape.batch || tokens.tokens != shape.tokens ||
      tokens.channels != dims[3]) {
    throw ShapeMismatch("rearrange_inverse: token shape inconsistent with dims");
  }
  if (tokens.values.size() != tokens.size()) {
    throw ShapeMismatch("rearrange_inverse: token buffer has wrong size");
  }

  LatentTensor out = make_latent(dims);
  const auto [bd, vd, fd, cd, hd, wd] = dims;
  for (std::size_t b = 0; b < bd; ++b)
    for (std::size_t v = 0; v < vd; ++v)
      for (std::size_t f = 0; f < fd; ++f)
        for (std::size_t h = 0; h < hd; ++h)
          for (std::size_t w = 0; w < wd; ++w) {
            const auto [tb, tt] = token_coords(dims, layout, b, v, f, h, w);
            for (std::size_t c = 0; c < cd; ++c) {
              out.values[out.index(b, v, f, c, h, w)] =
                  tokens.values[tokens.index(tb, tt, c)];
            }
          }
  return out;
}

TokenTensor attention(const TokenTensor& tokens, const AttentionWeights& weights,
                      const AttentionProbe& probe) {
  weights.validate();
  if (tokens.channels != weights.channels()) {
    throw ShapeMismatch("attention: token channels do not match weights");
  }
  if (tokens.values.size() != tokens.size()) {
    throw ShapeMismatch("attention: token buffer has wrong size");
  }

  const auto n = static_cast<Eigen::Index>(tokens.tokens);
  const auto c = static_cast<Eigen::Index>(tokens.channels);
  const Eigen::Index head_dim = c / weights.head_count;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  TokenTensor out = tokens;
  for (std::size_t b = 0; b < tokens.batch; ++b) {
    const RowMajorMap x(tokens.values.data() + b * tokens.tokens * tokens.channels, n, c);
    const Eigen::MatrixXd q = x * weights.wq;
    const Eigen::MatrixXd k = x * weights.wk;
    const Eigen::MatrixXd v = x * weights.wv;

    Eigen::MatrixXd heads(n, c);
    for (int head = 0; head < weights.head_count; ++head) {
      const Eigen::Index offset = head * head_dim;
      Eigen::MatrixXd scores = q.middleCols(offset, head_dim) *
                               k.middleCols(offset, head_dim).transpose() * scale;
      // Row-wise stable softmax.
      for (Eigen::Index row = 0; row < n; ++row) {
        const double row_max = scores.row(row).maxCoeff();
        scores.row(row) = (scores.row(row).array() - row_max).exp();
        scores.row(row) /= scores.row(row).sum();
      }
      if (probe) {
        probe(b, head, scores);
      }
      heads.middleCols(offset, head_dim) = scores * v.middleCols(offset, head_dim);
    }
    RowMajorMutMap(out.values.data() + b * tokens.tokens * tokens.channels, n, c) =
        heads * weights.wo;
  }
  return out;
}

LatentTensor view_integrated_block(const LatentTensor& tensor,
                                   AttentionLayout layout,
                                   const AttentionWeights& weights,
                                   const AttentionProbe& probe) {
  const TokenTensor tokens = rearrange(tensor, layout);
  const TokenTensor attended = attention(tokens, weights, probe);
  return rearrange_inverse(attended, layout, tensor.dims);
}

LatentTensor concat_plucker(const LatentTensor& tensor,
                            const std::vector<PluckerGrid>& grids) {
  tensor.validate();
  const auto [bd, vd, fd, cd, hd, wd] = tensor.dims;
  if (grids.size() != vd * fd) {
    throw ShapeMismatch("concat_plucker: expected one grid per (view, frame)");
  }
  for (const PluckerGrid& grid : grids) {
    if (static_cast<std::size_t>(grid.height) != hd ||
        static_cast<std::size_t>(grid.width) != wd) {
      throw ShapeMismatch("concat_plucker: grid spatial dims do not match latent");
    }
  }

  LatentTensor out = make_latent({bd, vd, fd, cd + 6, hd, wd});
  for (std::size_t b = 0; b < bd; ++b)
    for (std::size_t v = 0; v < vd; ++v)
      for (std::size_t f = 0; f < fd; ++f) {
        const PluckerGrid& grid = grids[v * fd + f];
        for (std::size_t h = 0; h < hd; ++h)
          for (std::size_t w = 0; w < wd; ++w) {
            for (std::size_t c = 0; c < cd; ++c) {
              out.values[out.index(b, v, f, c, h, w)] = tensor.at(b, v, f, c, h, w);
            }
            for (std::size_t c = 0; c < 6; ++c) {
              out.values[out.index(b, v, f, cd + c, h, w)] =
                  grid.at(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
            }
          }
      }
  return out;
}

}  // namespace cavt
