#include "sheetgen/bspline.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sheetgen/error.hpp"
#include "tensor_ops.hpp"

namespace sheetgen {

CubicBasis::CubicBasis(std::size_t count) : count_(count) {
  if (count < static_cast<std::size_t>(kOrder))
    throw Error(ErrorCode::InvalidArgument, "a cubic B-spline needs at least 4 control points per axis");
  const std::size_t spans = count - kDegree;
  knots_.assign(count + kOrder, 0.0);
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i <= static_cast<std::size_t>(kDegree)) {
      knots_[i] = 0.0;
    } else if (i >= count) {
      knots_[i] = 1.0;
    } else {
      knots_[i] = static_cast<double>(i - kDegree) / static_cast<double>(spans);
    }
  }
}

CubicBasis::Values CubicBasis::evaluate(double u) const noexcept {
  const std::size_t spans = count_ - kDegree;
  auto cell = static_cast<std::size_t>(std::max(0.0, std::floor(u * static_cast<double>(spans))));
  cell = std::min(cell, spans - 1);
  const std::size_t s = cell + kDegree;  // knots_[s] <= u < knots_[s+1]

  // Cox-de Boor triangle for the kOrder non-zero functions on span s.
  Values out;
  std::array<double, kOrder> left{};
  std::array<double, kOrder> right{};
  out.w[0] = 1.0;
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = u - knots_[s + 1 - j];
    right[j] = knots_[s + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out.w[r] / (right[r + 1] + left[j - r]);
      out.w[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out.w[j] = saved;
  }
  out.first = s - kDegree;
  return out;
}

double CubicBasis::greville(std::size_t i) const noexcept {
  return (knots_[i + 1] + knots_[i + 2] + knots_[i + 3]) / 3.0;
}

BSplineField::BSplineField(Dims3 control_dims, Aabb domain)
    : BSplineField(control_dims, domain, std::vector<double>(product(control_dims), 0.0)) {}

BSplineField::BSplineField(Dims3 control_dims, Aabb domain, std::vector<double> coefficients)
    : dims_(control_dims),
      domain_(domain),
      basis_{CubicBasis(control_dims[0]), CubicBasis(control_dims[1]), CubicBasis(control_dims[2])},
      coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != product(dims_))
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match control dimensions");
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(domain_.max[a] > domain_.min[a])) throw Error(ErrorCode::InvalidArgument, "field domain is empty");
  }
}

double BSplineField::parameter(std::size_t axis, double x) const {
  const double lo = domain_.min[axis];
  const double hi = domain_.max[axis];
  const double tol = 1e-9 * (hi - lo);
  if (!(x >= lo - tol && x <= hi + tol))
    throw Error(ErrorCode::Domain, "position outside the field domain");
  return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

double BSplineField::eval(const Vec3& p) const {
  const auto bx = basis_[0].evaluate(parameter(0, p.x));
  const auto by = basis_[1].evaluate(parameter(1, p.y));
  const auto bz = basis_[2].evaluate(parameter(2, p.z));
  double sum = 0.0;
  for (int k = 0; k < CubicBasis::kOrder; ++k) {
    double sy = 0.0;
    for (int j = 0; j < CubicBasis::kOrder; ++j) {
      const double* row = &coeffs_[coefficient_index(bx.first, by.first + j, bz.first + k)];
      double sx = 0.0;
      for (int i = 0; i < CubicBasis::kOrder; ++i) sx += bx.w[i] * row[i];
      sy += by.w[j] * sx;
    }
    sum += bz.w[k] * sy;
  }
  return sum;
}

ScalarGrid evaluate_on_grid(const BSplineField& field, const ScalarGrid& layout) {
  const auto& d = layout.dims();
  const auto bx = detail::axis_basis(field, 0, layout.origin().x, layout.spacing().x, d[0]);
  const auto by = detail::axis_basis(field, 1, layout.origin().y, layout.spacing().y, d[1]);
  const auto bz = detail::axis_basis(field, 2, layout.origin().z, layout.spacing().z, d[2]);
  std::vector<double> samples;
  detail::forward(field.coefficients(), field.control_dims(), bx, by, bz, samples);
  return ScalarGrid(d, layout.origin(), layout.spacing(), std::move(samples));
}

ScalarGrid resample(const BSplineField& field, Dims3 dims) {
  return evaluate_on_grid(field, ScalarGrid::spanning(field.domain(), dims));
}

std::vector<double> evaluate_plane(const BSplineField& field, double z, std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidArgument, "plane lattice needs at least 2x2 samples");
  const auto& box = field.domain();
  const auto bx = detail::axis_basis(field, 0, box.min.x, (box.max.x - box.min.x) / double(nx - 1), nx);
  const auto by = detail::axis_basis(field, 1, box.min.y, (box.max.y - box.min.y) / double(ny - 1), ny);
  const double zs[] = {z};
  const auto bz = detail::axis_basis(field, 2, zs).front();
  const auto& n = field.control_dims();
  const auto c = field.coefficients();
  constexpr int K = CubicBasis::kOrder;

  // Only K control slices touch the plane; contract z first, then x, then y.
  std::vector<double> slab(n[0] * n[1], 0.0);
  for (int q = 0; q < K; ++q) {
    const double w = bz.w[q];
    const double* src = c.data() + n[0] * n[1] * (bz.first + static_cast<std::size_t>(q));
    for (std::size_t i = 0; i < slab.size(); ++i) slab[i] += w * src[i];
  }
  std::vector<double> t1(nx * n[1]);
  for (std::size_t j = 0; j < n[1]; ++j)
    for (std::size_t a = 0; a < nx; ++a) {
      const double* row = slab.data() + bx[a].first + n[0] * j;
      double v = 0.0;
      for (int q = 0; q < K; ++q) v += bx[a].w[q] * row[q];
      t1[a + nx * j] = v;
    }
  std::vector<double> samples(nx * ny, 0.0);
  for (std::size_t b = 0; b < ny; ++b)
    for (int q = 0; q < K; ++q) {
      const double w = by[b].w[q];
      const double* row = t1.data() + nx * (by[b].first + static_cast<std::size_t>(q));
      double* out = samples.data() + nx * b;
      for (std::size_t a = 0; a < nx; ++a) out[a] += w * row[a];
    }
  return samples;
}

namespace {

constexpr char kMagic[8] = {'S', 'G', 'B', 'S', 'P', 'L', 'N', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::Io, "truncated field file");
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const BSplineField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  for (auto d : field.control_dims()) put<std::uint64_t>(out, d);
  for (std::size_t a = 0; a < 3; ++a) put<double>(out, field.domain().min[a]);
  for (std::size_t a = 0; a < 3; ++a) put<double>(out, field.domain().max[a]);
  const auto c = field.coefficients();
  out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size_bytes()));
}

BSplineField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorCode::Io, path.string() + " is not a B-spline field file");
  Dims3 dims{};
  for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(in));
  Aabb box;
  for (std::size_t a = 0; a < 3; ++a) box.min[a] = get<double>(in);
  for (std::size_t a = 0; a < 3; ++a) box.max[a] = get<double>(in);
  std::vector<double> coeffs(product(dims));
  in.read(reinterpret_cast<char*>(coeffs.data()), static_cast<std::streamsize>(coeffs.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::Io, "truncated field file " + path.string());
  return BSplineField(dims, box, std::move(coeffs));
}

void write_field_json(const std::filesystem::path& path, const BSplineField& field, bool include_coefficients) {
  nlohmann::json j;
  j["control_dims"] = field.control_dims();
  j["degree"] = CubicBasis::kDegree;
  j["knots"] = "clamped-uniform";
  j["domain"] = {{"min", {field.domain().min.x, field.domain().min.y, field.domain().min.z}},
                 {"max", {field.domain().max.x, field.domain().max.y, field.domain().max.z}}};
  if (include_coefficients)
    j["coefficients"] = std::vector<double>(field.coefficients().begin(), field.coefficients().end());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace detail {

AxisBasis axis_basis(const BSplineField& field, std::size_t axis, std::span<const double> coords) {
  AxisBasis out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    out[i] = field.basis(axis).evaluate(field.parameter(axis, coords[i]));
  return out;
}

AxisBasis axis_basis(const BSplineField& field, std::size_t axis, double origin, double spacing,
                     std::size_t count) {
  std::vector<double> coords(count);
  for (std::size_t i = 0; i < count; ++i) coords[i] = origin + static_cast<double>(i) * spacing;
  // The last vertex can overshoot the domain by rounding; pin it.
  if (count > 1 && std::abs(coords.back() - field.domain().max[axis]) <
                       1e-9 * (field.domain().max[axis] - field.domain().min[axis]))
    coords.back() = field.domain().max[axis];
  return axis_basis(field, axis, coords);
}

void forward(std::span<const double> control, const Dims3& n, const AxisBasis& bx, const AxisBasis& by,
             const AxisBasis& bz, std::vector<double>& samples) {
  const std::size_t m0 = bx.size();
  const std::size_t m1 = by.size();
  const std::size_t m2 = bz.size();
  constexpr int K = CubicBasis::kOrder;

  // Contract x: t1(a, j, k)
  std::vector<double> t1(m0 * n[1] * n[2]);
#pragma omp parallel for schedule(static)
  for (long long jk = 0; jk < static_cast<long long>(n[1] * n[2]); ++jk) {
    const double* row = &control[static_cast<std::size_t>(jk) * n[0]];
    double* out = &t1[static_cast<std::size_t>(jk) * m0];
    for (std::size_t a = 0; a < m0; ++a) {
      const auto& b = bx[a];
      double s = 0.0;
      for (int r = 0; r < K; ++r) s += b.w[r] * row[b.first + r];
      out[a] = s;
    }
  }
  // Contract y: t2(a, b, k)
  std::vector<double> t2(m0 * m1 * n[2]);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < static_cast<long long>(n[2]); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t b = 0; b < m1; ++b) {
      const auto& w = by[b];
      double* out = &t2[m0 * (b + m1 * kk)];
      std::fill(out, out + m0, 0.0);
      for (int r = 0; r < K; ++r) {
        const double* in = &t1[m0 * (w.first + r + n[1] * kk)];
        const double wr = w.w[r];
        for (std::size_t a = 0; a < m0; ++a) out[a] += wr * in[a];
      }
    }
  }
  t1 = {};
  // Contract z
  samples.assign(m0 * m1 * m2, 0.0);
  const std::size_t plane = m0 * m1;
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(m2); ++c) {
    const auto& w = bz[static_cast<std::size_t>(c)];
    double* out = &samples[plane * static_cast<std::size_t>(c)];
    for (int r = 0; r < K; ++r) {
      const double* in = &t2[plane * (w.first + r)];
      const double wr = w.w[r];
      for (std::size_t ab = 0; ab < plane; ++ab) out[ab] += wr * in[ab];
    }
  }
}

void transpose(std::span<const double> samples, const AxisBasis& bx, const AxisBasis& by, const AxisBasis& bz,
               const Dims3& n, std::vector<double>& control) {
  const std::size_t m0 = bx.size();
  const std::size_t m1 = by.size();
  const std::size_t m2 = bz.size();
  constexpr int K = CubicBasis::kOrder;
  const std::size_t plane = m0 * m1;

  // Scatter along z into t2(a, b, k), parallel over output k so every
  // accumulation has a fixed order.
  std::vector<std::vector<std::size_t>> z_sources(n[2]);
  for (std::size_t c = 0; c < m2; ++c)
    for (int r = 0; r < K; ++r)
      if (bz[c].w[r] != 0.0) z_sources[bz[c].first + r].push_back(c * K + static_cast<std::size_t>(r));

  std::vector<double> t2(plane * n[2], 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < static_cast<long long>(n[2]); ++k) {
    double* out = &t2[plane * static_cast<std::size_t>(k)];
    for (auto src : z_sources[static_cast<std::size_t>(k)]) {
      const std::size_t c = src / K;
      const double wr = bz[c].w[src % K];
      const double* in = &samples[plane * c];
      for (std::size_t ab = 0; ab < plane; ++ab) out[ab] += wr * in[ab];
    }
  }

  // Along y into t1(a, j, k).
  std::vector<std::vector<std::size_t>> y_sources(n[1]);
  for (std::size_t b = 0; b < m1; ++b)
    for (int r = 0; r < K; ++r)
      if (by[b].w[r] != 0.0) y_sources[by[b].first + r].push_back(b * K + static_cast<std::size_t>(r));

  std::vector<double> t1(m0 * n[1] * n[2], 0.0);
#pragma omp parallel for schedule(static)
  for (long long jk = 0; jk < static_cast<long long>(n[1] * n[2]); ++jk) {
    const std::size_t j = static_cast<std::size_t>(jk) % n[1];
    const std::size_t k = static_cast<std::size_t>(jk) / n[1];
    double* out = &t1[m0 * static_cast<std::size_t>(jk)];
    for (auto src : y_sources[j]) {
      const std::size_t b = src / K;
      const double wr = by[b].w[src % K];
      const double* in = &t2[m0 * (b + m1 * k)];
      for (std::size_t a = 0; a < m0; ++a) out[a] += wr * in[a];
    }
  }
  t2 = {};

  // Along x into control(i, j, k).
  control.assign(product(n), 0.0);
#pragma omp parallel for schedule(static)
  for (long long jk = 0; jk < static_cast<long long>(n[1] * n[2]); ++jk) {
    const double* in = &t1[m0 * static_cast<std::size_t>(jk)];
    double* out = &control[n[0] * static_cast<std::size_t>(jk)];
    for (std::size_t a = 0; a < m0; ++a) {
      const auto& b = bx[a];
      for (int r = 0; r < K; ++r) out[b.first + r] += b.w[r] * in[a];
    }
  }
}

std::vector<double> basis_sums(const AxisBasis& b, std::size_t count) {
  std::vector<double> sums(count, 0.0);
  for (const auto& v : b)
    for (int r = 0; r < CubicBasis::kOrder; ++r) sums[v.first + r] += v.w[r];
  return sums;
}

}  // namespace detail

}  // namespace sheetgen
