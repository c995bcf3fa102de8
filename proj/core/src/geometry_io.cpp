#include "sheetgen/geometry_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sheetgen/error.hpp"

namespace sheetgen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::EmptyInput: return "empty-input";
    case ErrorCode::DegenerateCloud: return "degenerate-cloud";
    case ErrorCode::Containment: return "containment";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::InsufficientFeatures: return "insufficient-features";
    case ErrorCode::AmbiguousSplit: return "ambiguous-split";
    case ErrorCode::EmptyCluster: return "empty-cluster";
    case ErrorCode::NoPores: return "no-pores";
    case ErrorCode::Division: return "division";
    case ErrorCode::EmptyInterval: return "empty-interval";
    case ErrorCode::OracleFailure: return "oracle-failure";
    case ErrorCode::Io: return "io";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::EmptyInput, "point cloud has no points");
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw Error(ErrorCode::InvalidArgument, "point cloud contains a non-finite coordinate");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Parses the first three whitespace-separated numbers of a line.
bool parse_xyz(std::string_view line, Vec3& out) {
  std::istringstream ss{std::string(line)};
  std::string token;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (!(ss >> token)) return false;
    double v = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end) return false;
    out[axis] = v;
  }
  return true;
}

}  // namespace

PointCloud read_xyz(std::istream& in) {
  std::vector<Vec3> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    Vec3 p;
    if (!parse_xyz(body, p)) throw ParseError(line_no, "expected three numbers, got '" + std::string(body) + "'");
    points.push_back(p);
  }
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "XYZ input contains no points");
  return PointCloud(std::move(points));
}

PointCloud read_ply(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || trim(line) != "ply") throw ParseError(1, "missing 'ply' magic");

  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::vector<std::string> properties;
  std::array<int, 3> xyz_column{-1, -1, -1};
  while (true) {
    if (!next_line()) throw ParseError(line_no, "unexpected end of header");
    const auto body = trim(line);
    std::istringstream ss{std::string(body)};
    std::string keyword;
    ss >> keyword;
    if (keyword == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii") throw ParseError(line_no, "only ASCII PLY is supported");
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      ss >> name >> count;
      in_vertex = name == "vertex";
      if (in_vertex) {
        if (seen_vertex) throw ParseError(line_no, "duplicate vertex element");
        if (!ss) throw ParseError(line_no, "bad vertex element count");
        vertex_count = count;
        seen_vertex = true;
      } else if (!seen_vertex) {
        throw ParseError(line_no, "vertex element must come first");
      }
    } else if (keyword == "property") {
      if (!in_vertex) continue;
      std::string type;
      std::string name;
      ss >> type;
      if (type == "list") throw ParseError(line_no, "list properties on vertices are not supported");
      ss >> name;
      const int column = static_cast<int>(properties.size());
      if (name == "x") xyz_column[0] = column;
      if (name == "y") xyz_column[1] = column;
      if (name == "z") xyz_column[2] = column;
      properties.push_back(name);
    } else if (keyword == "end_header") {
      break;
    } else if (keyword != "comment" && keyword != "obj_info" && !keyword.empty()) {
      throw ParseError(line_no, "unknown header keyword '" + keyword + "'");
    }
  }
  if (!seen_vertex) throw ParseError(line_no, "no vertex element");
  for (int c : xyz_column)
    if (c < 0) throw ParseError(line_no, "vertex element lacks x, y or z");
  if (vertex_count == 0) throw Error(ErrorCode::EmptyInput, "PLY input contains no vertices");

  std::vector<Vec3> points;
  points.reserve(vertex_count);
  std::vector<double> row(properties.size());
  while (points.size() < vertex_count) {
    if (!next_line()) throw ParseError(line_no, "expected " + std::to_string(vertex_count) + " vertices");
    const auto body = trim(line);
    if (body.empty()) continue;
    std::istringstream ss{std::string(body)};
    for (auto& v : row) {
      std::string token;
      if (!(ss >> token)) throw ParseError(line_no, "too few vertex properties");
      const auto* end = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(token.data(), end, v);
      if (ec != std::errc() || ptr != end) throw ParseError(line_no, "bad number '" + token + "'");
    }
    points.push_back({row[xyz_column[0]], row[xyz_column[1]], row[xyz_column[2]]});
  }
  return PointCloud(std::move(points));
}

CloudFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".ply" ? CloudFormat::Ply : CloudFormat::Xyz;
}

CloudFormat parse_cloud_format(std::string_view name) {
  if (name == "xyz" || name == "XYZ") return CloudFormat::Xyz;
  if (name == "ply" || name == "PLY") return CloudFormat::Ply;
  throw Error(ErrorCode::InvalidArgument, "unknown point cloud format '" + std::string(name) + "'");
}

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return format == CloudFormat::Ply ? read_ply(in) : read_xyz(in);
}

void write_xyz(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.precision(17);
  for (const auto& p : cloud.points()) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
}

Aabb bounding_box(const PointCloud& cloud) {
  Aabb box{cloud[0], cloud[0]};
  for (const auto& p : cloud.points()) {
    box.min = cwise_min(box.min, p);
    box.max = cwise_max(box.max, p);
  }
  return box;
}

Aabb enlarged_aabb(const PointCloud& cloud) {
  const Aabb tight = bounding_box(cloud);
  const Vec3 extent = tight.extent();
  const double largest = std::max({extent.x, extent.y, extent.z});
  if (!(largest > 0.0)) throw Error(ErrorCode::DegenerateCloud, "all points are identical");

  Aabb box = tight;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    const double grow = (extent[axis] > 0.0 ? extent[axis] : largest) / 5.0;
    box.min[axis] -= grow / 2.0;
    box.max[axis] += grow / 2.0;
  }
  return box;
}

NormalizationTransform normalization_for(const Aabb& box) {
  const Vec3 e = box.extent();
  const double longest = std::max({e.x, e.y, e.z});
  if (!(longest > 0.0)) throw Error(ErrorCode::DegenerateCloud, "box has zero extent");
  return NormalizationTransform{1.0 / longest, box.min};
}

Aabb transform_box(const Aabb& box, const NormalizationTransform& t) {
  return Aabb{t.apply(box.min), t.apply(box.max)};
}

std::pair<PointCloud, NormalizationTransform> normalize(const PointCloud& cloud, const Aabb& box) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!box.contains(cloud[i]))
      throw Error(ErrorCode::Containment, "point " + std::to_string(i) + " lies outside the box");
  }
  const auto t = normalization_for(box);
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) {
    Vec3 q = t.apply(p);
    // Rounding can push boundary points a hair outside [0,1].
    q = cwise_max(q, Vec3{0.0, 0.0, 0.0});
    q = cwise_min(q, Vec3{1.0, 1.0, 1.0});
    out.push_back(q);
  }
  return {PointCloud(std::move(out)), t};
}

PointCloud denormalize(const PointCloud& cloud, const NormalizationTransform& t) {
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(t.invert(p));
  return PointCloud(std::move(out));
}

}  // namespace sheetgen
