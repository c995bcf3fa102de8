#include "sheetgen/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "sheetgen/error.hpp"

namespace sheetgen {

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  for (const auto& p : pairs) {
    if (p.multiplicity == 0) continue;
    if (!(p.birth <= p.death)) throw Error(ErrorCode::InvalidArgument, "persistence pair with birth > death");
    if (!pairs_.empty() && pairs_.back().dimension == p.dimension && pairs_.back().birth == p.birth &&
        pairs_.back().death == p.death) {
      pairs_.back().multiplicity += p.multiplicity;
    } else {
      pairs_.push_back(p);
    }
  }
}

std::vector<PersistencePair> PersistenceDiagram::dimension(int k) const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs_)
    if (p.dimension == k) out.push_back(p);
  return out;
}

std::size_t PersistenceDiagram::total_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : pairs_) n += p.multiplicity;
  return n;
}

std::size_t PersistenceDiagram::count(int k) const noexcept {
  std::size_t n = 0;
  for (const auto& p : pairs_)
    if (p.dimension == k) n += p.multiplicity;
  return n;
}

namespace {

using Index = std::uint32_t;
constexpr Index kNone = 0xFFFFFFFFU;

struct Keyed {
  double value;
  Index cell;
};

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<Index>(i);
  }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Roots are always the largest id of their set.
  void link(Index younger, Index elder) { parent_[younger] = elder; }

private:
  std::vector<Index> parent_;
};

class Persistence {
public:
  explicit Persistence(const CubicalComplex& cx) : cx_(cx), cd_(cx.cell_dims()) {
    stride_[0] = 1;
    stride_[1] = cd_[0];
    stride_[2] = cd_[0] * cd_[1];
  }

  PersistenceDiagram run() {
    sort_cells();
    const int top = cx_.top_dimension();
    if (top == 0) {
      emit(0, value(order_[0][0]), kInfinity);
      return PersistenceDiagram(std::move(pairs_));
    }
    zero_dimensional();
    if (top >= 2) top_dimensional(top);
    if (top == 3) reduce_middle();
    essential_edges(top);
    return PersistenceDiagram(std::move(pairs_));
  }

private:
  double value(Index cell) const { return cx_.value(cell); }

  void emit(int dim, double birth, double death) {
    if (birth == death) return;
    pairs_.push_back(PersistencePair{birth, death, dim, 1});
  }

  int cell_dim(Index cell) const {
    const std::size_t a = cell % cd_[0];
    const std::size_t r = cell / cd_[0];
    return static_cast<int>((a & 1U) + ((r % cd_[1]) & 1U) + ((r / cd_[1]) & 1U));
  }

  // Filtration order within one dimension is (value, cell index); across
  // dimensions faces come first, which the per-dimension passes respect.
  void sort_cells() {
    std::array<std::vector<Keyed>, 4> keyed;
    const auto n = static_cast<Index>(cx_.cell_count());
    for (Index c = 0; c < n; ++c) keyed[cell_dim(c)].push_back({value(c), c});
    rank_.assign(n, kNone);
    for (int d = 0; d < 4; ++d) {
      auto& kv = keyed[d];
      std::sort(kv.begin(), kv.end(), [](const Keyed& a, const Keyed& b) {
        return a.value < b.value || (a.value == b.value && a.cell < b.cell);
      });
      order_[d].resize(kv.size());
      for (std::size_t r = 0; r < kv.size(); ++r) {
        order_[d][r] = kv[r].cell;
        rank_[kv[r].cell] = static_cast<Index>(r);
      }
      kv = {};
    }
  }

  // Faces along the odd axes, as ranks within dimension - 1.
  int face_ranks(Index cell, Index* out) const {
    const std::size_t a = cell % cd_[0];
    const std::size_t r = cell / cd_[0];
    const std::size_t co[3] = {a, r % cd_[1], r / cd_[1]};
    int n = 0;
    for (int ax = 0; ax < 3; ++ax) {
      if (co[ax] & 1U) {
        out[n++] = rank_[cell - stride_[ax]];
        out[n++] = rank_[cell + stride_[ax]];
      }
    }
    return n;
  }

  void zero_dimensional() {
    const auto& vertices = order_[0];
    UnionFind uf(vertices.size());
    negative_edge_.assign(order_[1].size(), 0);
    for (Index e = 0; e < order_[1].size(); ++e) {
      Index f[6];
      face_ranks(order_[1][e], f);
      Index r0 = uf.find(f[0]);
      Index r1 = uf.find(f[1]);
      if (r0 == r1) continue;
      if (r0 < r1) std::swap(r0, r1);  // r0 is the younger root
      emit(0, value(vertices[r0]), value(order_[1][e]));
      uf.link(r0, r1);
      negative_edge_[e] = 1;
    }
    emit(0, value(vertices[0]), kInfinity);
  }

  // Pairs between (top-1)-cells and top cells via union-find on the dual
  // graph, sweeping the filtration backwards. Top cells on the boundary of the
  // grid connect to an outside node that never dies.
  void top_dimensional(int top) {
    const auto& tops = order_[top];
    const auto& faces = order_[top - 1];
    const auto outside = static_cast<Index>(tops.size());
    UnionFind uf(tops.size() + 1);
    positive_face_.assign(faces.size(), 0);
    for (Index r = static_cast<Index>(faces.size()); r-- > 0;) {
      const Index cell = faces[r];
      const std::size_t a = cell % cd_[0];
      const std::size_t rr = cell / cd_[0];
      const std::size_t co[3] = {a, rr % cd_[1], rr / cd_[1]};
      Index nodes[2] = {outside, outside};
      int n = 0;
      for (int ax = 0; ax < 3; ++ax) {
        if ((co[ax] & 1U) || cd_[ax] == 1) continue;
        // The single even, non-degenerate axis carries the cofaces.
        if (co[ax] > 0) nodes[n++] = rank_[cell - stride_[ax]];
        if (co[ax] + 1 < cd_[ax]) nodes[n++] = rank_[cell + stride_[ax]];
      }
      Index r0 = uf.find(nodes[0]);
      Index r1 = uf.find(nodes[1]);
      if (r0 == r1) continue;
      if (r0 > r1) std::swap(r0, r1);  // r0 is the younger (earlier in forward order)
      emit(top - 1, value(cell), value(tops[r0]));
      uf.link(r0, r1);
      positive_face_[r] = 1;
    }
    if (top == 2) paired_edge_ = positive_face_;
  }

  // Mod-2 reduction of the square columns that were not already paired with
  // cubes. Columns hold edge ranks in ascending order.
  void reduce_middle() {
    const auto& squares = order_[2];
    std::vector<Index> owner(order_[1].size(), kNone);
    std::unordered_map<Index, std::vector<Index>> reduced;
    std::vector<Index> column;
    std::vector<Index> scratch;
    paired_edge_.assign(order_[1].size(), 0);

    auto boundary = [&](Index square, std::vector<Index>& out) {
      Index f[6];
      const int n = face_ranks(squares[square], f);
      out.assign(f, f + n);
      std::sort(out.begin(), out.end());
    };

    for (Index s = 0; s < squares.size(); ++s) {
      if (positive_face_[s]) continue;
      boundary(s, column);
      bool modified = false;
      while (!column.empty()) {
        const Index pivot = column.back();
        const Index other = owner[pivot];
        if (other == kNone) break;
        const std::vector<Index>* add = nullptr;
        std::vector<Index> fresh;
        if (auto it = reduced.find(other); it != reduced.end()) {
          add = &it->second;
        } else {
          boundary(other, fresh);
          add = &fresh;
        }
        scratch.clear();
        std::set_symmetric_difference(column.begin(), column.end(), add->begin(), add->end(),
                                      std::back_inserter(scratch));
        column.swap(scratch);
        modified = true;
      }
      if (column.empty()) continue;  // only reachable for non-generic input
      const Index pivot = column.back();
      owner[pivot] = s;
      paired_edge_[pivot] = 1;
      emit(1, value(order_[1][pivot]), value(squares[s]));
      if (modified) reduced.emplace(s, column);
    }
  }

  // Edges that neither merge components nor get killed by a square.
  void essential_edges(int top) {
    if (top < 2) return;
    for (Index e = 0; e < order_[1].size(); ++e) {
      if (negative_edge_[e] || paired_edge_[e]) continue;
      emit(1, value(order_[1][e]), kInfinity);
    }
  }

  const CubicalComplex& cx_;
  Dims3 cd_;
  std::size_t stride_[3];
  std::array<std::vector<Index>, 4> order_;
  std::vector<Index> rank_;
  std::vector<std::uint8_t> negative_edge_;
  std::vector<std::uint8_t> positive_face_;
  std::vector<std::uint8_t> paired_edge_;
  std::vector<PersistencePair> pairs_;
};

}  // namespace

PersistenceDiagram compute_persistence(const CubicalComplex& complex) {
  return Persistence(complex).run();
}

std::size_t betti_curve(const std::vector<PersistencePair>& points, double c) {
  std::size_t n = 0;
  for (const auto& p : points)
    if (p.birth <= c && c < p.death) n += p.multiplicity;
  return n;
}

std::size_t betti_curve(const PersistenceDiagram& pd, int k, double c) {
  std::size_t n = 0;
  for (const auto& p : pd.pairs())
    if (p.dimension == k && p.birth <= c && c < p.death) n += p.multiplicity;
  return n;
}

namespace {

std::string format_value(double v) {
  if (v == kInfinity) return "inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& pd) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "dimension,birth,death,multiplicity\n";
  for (const auto& p : pd.pairs())
    out << p.dimension << ',' << format_value(p.birth) << ',' << format_value(p.death) << ',' << p.multiplicity
        << '\n';
}

PersistenceDiagram read_diagram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("dimension,birth,death,multiplicity", 0) != 0)
    throw ParseError(1, "missing diagram CSV header");
  std::vector<PersistencePair> pairs;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::string dim;
    std::string birth;
    std::string death;
    std::string mult;
    if (!std::getline(ss, dim, ',') || !std::getline(ss, birth, ',') || !std::getline(ss, death, ',') ||
        !std::getline(ss, mult, ','))
      throw ParseError(line_no, "expected 4 fields");
    try {
      PersistencePair p;
      p.dimension = std::stoi(dim);
      p.birth = std::stod(birth);
      if (!death.empty() && death.back() == '\r') death.pop_back();
      p.death = death == "inf" ? kInfinity : std::stod(death);
      p.multiplicity = static_cast<std::size_t>(std::stoull(mult));
      pairs.push_back(p);
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "malformed number");
    }
  }
  return PersistenceDiagram(std::move(pairs));
}

void write_diagram_json(const std::filesystem::path& path, const PersistenceDiagram& pd) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pd.pairs()) {
    nlohmann::json j{{"dimension", p.dimension}, {"birth", p.birth}, {"multiplicity", p.multiplicity}};
    if (p.essential())
      j["death"] = "inf";
    else
      j["death"] = p.death;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << nlohmann::json{{"pairs", arr}}.dump(2) << '\n';
}

}  // namespace sheetgen
