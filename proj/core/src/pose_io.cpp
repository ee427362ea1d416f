#include "cavt/pose_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr int kFieldsPerLine = 19;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("pose file line " + std::to_string(line_no) +
                     ": bad number '" + std::string(token) + "'");
  }
  return value;
}

std::uint64_t parse_timestamp(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("pose file line " + std::to_string(line_no) +
                     ": bad timestamp '" + std::string(token) + "'");
  }
  return value;
}

void append_double(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

PoseSequence PoseFile::to_sequence(int width, int height) const {
  PoseSequence seq;
  seq.poses = poses;
  seq.intrinsics = CameraIntrinsics{fx * width, fy * height, cx * width,
                                    cy * height, width, height};
  seq.validate();
  return seq;
}

PoseFile parse_pose_file(std::string_view text) {
  PoseFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_intrinsics = false;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != kFieldsPerLine) {
      throw ParseError("pose file line " + std::to_string(line_no) + ": expected " +
                       std::to_string(kFieldsPerLine) + " fields, got " +
                       std::to_string(fields.size()));
    }

    file.timestamps.push_back(parse_timestamp(fields[0], line_no));
    const double fx = parse_double(fields[1], line_no);
    const double fy = parse_double(fields[2], line_no);
    const double cx = parse_double(fields[3], line_no);
    const double cy = parse_double(fields[4], line_no);
    parse_double(fields[5], line_no);  // reserved columns
    parse_double(fields[6], line_no);

    if (!have_intrinsics) {
      file.fx = fx;
      file.fy = fy;
      file.cx = cx;
      file.cy = cy;
      have_intrinsics = true;
    } else if (fx != file.fx || fy != file.fy || cx != file.cx || cy != file.cy) {
      throw ParseError("pose file line " + std::to_string(line_no) +
                       ": intrinsics differ from earlier frames "
                       "(per-frame intrinsics are unsupported)");
    }

    Eigen::Matrix3d r;
    Eigen::Vector3d t;
    for (int row = 0; row < 3; ++row) {
      const int base = 7 + row * 4;
      for (int col = 0; col < 3; ++col) {
        r(row, col) = parse_double(fields[base + col], line_no);
      }
      t[row] = parse_double(fields[base + 3], line_no);
    }
    try {
      file.poses.emplace_back(r, t);
    } catch (const InvalidRotation& e) {
      throw ParseError("pose file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (file.poses.empty()) {
    throw ParseError("pose file: no frames");
  }
  return file;
}

PoseFile load_pose_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("pose file: cannot open: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_pose_file(buffer.str());
}

std::string serialize_pose_file(const PoseFile& file) {
  if (file.poses.size() != file.timestamps.size()) {
    throw LengthMismatch("pose file: timestamp count does not match poses");
  }
  std::string out;
  out.reserve(file.poses.size() * 192);
  for (std::size_t i = 0; i < file.poses.size(); ++i) {
    out += std::to_string(file.timestamps[i]);
    for (const double v : {file.fx, file.fy, file.cx, file.cy}) {
      out += ' ';
      append_double(out, v);
    }
    out += " 0 0";
    const auto& r = file.poses[i].rotation();
    const auto& t = file.poses[i].translation();
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        out += ' ';
        append_double(out, r(row, col));
      }
      out += ' ';
      append_double(out, t[row]);
    }
    out += '\n';
  }
  return out;
}

void save_pose_file(const std::filesystem::path& path, const PoseFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("pose file: cannot open for writing: " + path.string());
  }
  out << serialize_pose_file(file);
  if (!out) {
    throw IoError("pose file: write failed: " + path.string());
  }
}

PoseFile pose_file_from_sequence(const PoseSequence& seq,
                                 const std::vector<std::uint64_t>& timestamps) {
  seq.validate();
  if (timestamps.size() != seq.poses.size()) {
    throw LengthMismatch("pose file: timestamp count does not match poses");
  }
  PoseFile file;
  file.timestamps = timestamps;
  file.poses = seq.poses;
  file.fx = seq.intrinsics.fx / seq.intrinsics.width;
  file.fy = seq.intrinsics.fy / seq.intrinsics.height;
  file.cx = seq.intrinsics.cx / seq.intrinsics.width;
  file.cy = seq.intrinsics.cy / seq.intrinsics.height;
  return file;
}

}  // namespace cavt
