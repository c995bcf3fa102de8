#include "sheetgen/slice_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "sheetgen/error.hpp"

namespace sheetgen {

void write_layers_json(const std::filesystem::path& path, const std::vector<Layer>& layers) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& layer : layers) {
    nlohmann::json contours = nlohmann::json::array();
    for (const auto& c : layer.contours) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : c) pts.push_back({p.x, p.y});
      contours.push_back(std::move(pts));
    }
    out.push_back({{"z", layer.z}, {"contours", std::move(contours)}});
  }
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string());
  os << out.dump() << '\n';
  if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::vector<Layer> read_layers_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<Layer> layers;
  try {
    const auto doc = nlohmann::json::parse(is);
    for (const auto& item : doc) {
      Layer layer;
      layer.z = item.at("z").get<double>();
      for (const auto& c : item.at("contours")) {
        Contour contour;
        for (const auto& p : c) contour.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        layer.contours.push_back(std::move(contour));
      }
      layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return layers;
}

void write_layers_svg(const std::filesystem::path& directory, const std::vector<Layer>& layers, const Aabb& domain) {
  std::filesystem::create_directories(directory);
  const double w = domain.max.x - domain.min.x;
  const double h = domain.max.y - domain.min.y;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "layer_%04zu.svg", i);
    std::ofstream os(directory / name);
    if (!os) throw Error(ErrorCode::Io, "cannot open " + (directory / name).string());
    os.precision(9);
    // y is flipped so the picture matches the usual axis orientation.
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << domain.min.x << ' ' << -domain.max.y << ' ' << w
       << ' ' << h << "\" width=\"800\" height=\"" << (w > 0 ? 800.0 * h / w : 800.0) << "\">\n";
    os << "<!-- z = " << layers[i].z << " -->\n";
    os << "<path fill=\"black\" fill-rule=\"evenodd\" stroke=\"none\" d=\"";
    for (const auto& c : layers[i].contours) {
      for (std::size_t k = 0; k + 1 < c.size(); ++k) os << (k == 0 ? 'M' : 'L') << c[k].x << ',' << -c[k].y << ' ';
      if (!c.empty()) os << "Z ";
    }
    os << "\"/>\n</svg>\n";
    if (!os) throw Error(ErrorCode::Io, "failed writing " + (directory / name).string());
  }
}

}  // namespace sheetgen
