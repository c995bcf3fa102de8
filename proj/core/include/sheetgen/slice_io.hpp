#pragma once

#include <filesystem>
#include <vector>

#include "sheetgen/slicing.hpp"

namespace sheetgen {

/// [{"z": z, "contours": [[[x,y], ...], ...]}, ...]
void write_layers_json(const std::filesystem::path& path, const std::vector<Layer>& layers);
std::vector<Layer> read_layers_json(const std::filesystem::path& path);

/// One SVG per layer named layer_%04d.svg inside `directory`.
void write_layers_svg(const std::filesystem::path& directory, const std::vector<Layer>& layers,
                      const Aabb& domain);

}  // namespace sheetgen
