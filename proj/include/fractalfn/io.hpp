#pragma once

#include <filesystem>
#include <string>

#include "fractalfn/geometry.hpp"
#include "fractalfn/rb.hpp"
#include "fractalfn/tensor.hpp"

// File artifacts: text PGM rasters and CSV tables. All numbers are written
// with the shortest round-trip decimal representation so outputs are
// diffable and reproducible byte for byte.

namespace fractalfn {

std::string format_double(double v);

// P2 graymap, one cell per pixel, 0 = absent, 255 = present, top row = max y
void write_pgm(const GridSet& s, const std::filesystem::path& path);

// rows "x,y" of the occupied cell centers, in cell order
void write_csv_cells(const GridSet& s, const std::filesystem::path& path);

// rows "x,value"
void write_csv_samples(const SampledFunction& f, const std::filesystem::path& path);

// matrix rows over grid_x, columns over grid_y
void write_csv_matrix(const TensorSurface& s, const std::filesystem::path& path);

// values mapped affinely onto 0..255; the mapping is recorded in the sidecar
void write_pgm_heightmap(const TensorSurface& s, const std::filesystem::path& path,
                         const std::filesystem::path& sidecar);

}  // namespace fractalfn
