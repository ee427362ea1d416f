#include "cavt/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr char kMagic[4] = {'C', 'A', 'V', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "tensor file IO assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_raw(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(in);
}

std::size_t checked_product(const std::vector<std::uint64_t>& dims) {
  std::size_t total = 1;
  for (const std::uint64_t d : dims) {
    if (d == 0) {
      throw ParseError("tensor file: zero dimension");
    }
    if (d > std::numeric_limits<std::size_t>::max() / total) {
      throw ParseError("tensor file: dimension product overflows");
    }
    total *= static_cast<std::size_t>(d);
  }
  return total;
}

}  // namespace

std::size_t LatentTensor::size() const {
  std::size_t n = 1;
  for (const std::size_t d : dims) n *= d;
  return n;
}

std::size_t LatentTensor::index(std::size_t b, std::size_t v, std::size_t f,
                                std::size_t c, std::size_t h,
                                std::size_t w) const {
  return ((((b * dims[1] + v) * dims[2] + f) * dims[3] + c) * dims[4] + h) *
             dims[5] +
         w;
}

void LatentTensor::validate() const {
  for (const std::size_t d : dims) {
    if (d < 1) {
      throw ShapeMismatch("latent tensor: every axis must be >= 1");
    }
  }
  if (values.size() != size()) {
    throw ShapeMismatch("latent tensor: value count does not match dims");
  }
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("latent tensor: non-finite value");
    }
  }
}

LatentTensor make_latent(std::array<std::size_t, 6> dims) {
  LatentTensor t;
  t.dims = dims;
  t.values.assign(t.size(), 0.0);
  return t;
}

std::size_t TensorFile::size() const {
  std::size_t n = 1;
  for (const std::uint64_t d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void write_cavt(std::ostream& out, const TensorFile& tensor) {
  const std::size_t expected = tensor.dims.empty() ? 0 : checked_product(tensor.dims);
  if (tensor.values.size() != expected) {
    throw ShapeMismatch("tensor file: value count does not match dims");
  }
  out.write(kMagic, 4);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (const std::uint64_t d : tensor.dims) {
    write_raw(out, d);
  }
  for (const double v : tensor.values) {
    write_raw(out, static_cast<float>(v));
  }
  if (!out) {
    throw IoError("tensor file: write failed");
  }
}

void write_cavt(const std::filesystem::path& path, const TensorFile& tensor) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("tensor file: cannot open for writing: " + path.string());
  }
  write_cavt(out, tensor);
}

TensorFile read_cavt(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("tensor file: bad magic");
  }
  std::uint32_t version = 0;
  std::uint32_t rank = 0;
  if (!read_raw(in, version) || version != kVersion) {
    throw ParseError("tensor file: unsupported version");
  }
  if (!read_raw(in, rank)) {
    throw ParseError("tensor file: truncated header");
  }
  TensorFile tensor;
  tensor.dims.resize(rank);
  for (std::uint32_t i = 0; i < rank; ++i) {
    if (!read_raw(in, tensor.dims[i])) {
      throw ParseError("tensor file: truncated dims");
    }
  }
  const std::size_t count = rank == 0 ? 0 : checked_product(tensor.dims);
  tensor.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    float v = 0.0f;
    if (!read_raw(in, v)) {
      throw ParseError("tensor file: truncated payload");
    }
    tensor.values[i] = static_cast<double>(v);
  }
  // A well-formed file ends exactly after the payload.
  in.peek();
  if (!in.eof()) {
    throw ParseError("tensor file: trailing bytes after payload");
  }
  return tensor;
}

TensorFile read_cavt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("tensor file: cannot open: " + path.string());
  }
  return read_cavt(in);
}

TensorFile to_tensor_file(const LatentTensor& tensor) {
  TensorFile file;
  file.dims.assign(tensor.dims.begin(), tensor.dims.end());
  file.values = tensor.values;
  return file;
}

LatentTensor latent_from_tensor_file(const TensorFile& file) {
  if (file.dims.size() != 6) {
    throw ShapeMismatch("latent tensor: expected rank 6, got rank " +
                        std::to_string(file.dims.size()));
  }
  LatentTensor t;
  for (std::size_t i = 0; i < 6; ++i) {
    t.dims[i] = static_cast<std::size_t>(file.dims[i]);
  }
  t.values = file.values;
  t.validate();
  return t;
}

}  // namespace cavt
