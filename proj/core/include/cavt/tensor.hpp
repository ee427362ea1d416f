#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cavt {

/// Rank-6 dense value grid with named axes (B, V, F, C, H, W), row-major.
///
/// B: batch, V: views, F: frames, C: channels, H/W: spatial. This is the
/// working layout every attention rearrangement starts from.
struct LatentTensor {
  std::array<std::size_t, 6> dims{};  // B, V, F, C, H, W
  std::vector<double> values;

  std::size_t batch() const { return dims[0]; }
  std::size_t views() const { return dims[1]; }
  std::size_t frames() const { return dims[2]; }
  std::size_t channels() const { return dims[3]; }
  std::size_t height() const { return dims[4]; }
  std::size_t width() const { return dims[5]; }

  std::size_t size() const;
  std::size_t index(std::size_t b, std::size_t v, std::size_t f,
                    std::size_t c, std::size_t h, std::size_t w) const;
  double at(std::size_t b, std::size_t v, std::size_t f, std::size_t c,
            std::size_t h, std::size_t w) const {
    return values[index(b, v, f, c, h, w)];
  }

  /// Checks dims >= 1, value count, and finiteness. Throws on violation.
  void validate() const;
};

/// Allocates a zero-filled tensor of the given dims.
LatentTensor make_latent(std::array<std::size_t, 6> dims);

/// Arbitrary-rank tensor as stored in a binary tensor file.
struct TensorFile {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;  // held as double; files store f32

  std::size_t size() const;
};

// Binary tensor format: magic "CAVT", u32 version (=1), u32 rank,
// rank x u64 dims, then little-endian f32 values in row-major order.
// Readers reject wrong magic, unknown versions, and truncated or
// oversized payloads.

void write_cavt(std::ostream& out, const TensorFile& tensor);
void write_cavt(const std::filesystem::path& path, const TensorFile& tensor);
TensorFile read_cavt(std::istream& in);
TensorFile read_cavt(const std::filesystem::path& path);

TensorFile to_tensor_file(const LatentTensor& tensor);
LatentTensor latent_from_tensor_file(const TensorFile& file);

}  // namespace cavt
