#include "fractalfn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fractalfn {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // no newline translation
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_pgm(const GridSet& s, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "P2\n" << s.nx() << " " << s.ny() << "\n255\n";
    for (int iy = s.ny() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < s.nx(); ++ix) {
            out << (s.contains_cell(ix, iy) ? "255" : "0");
            out << (ix + 1 == s.nx() ? '\n' : ' ');
        }
    }
}

void write_csv_cells(const GridSet& s, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "x,y\n";
    for (auto key : s.cells()) {
        const Vec2 c = s.cell_center(key);
        out << format_double(c.x) << "," << format_double(c.y) << "\n";
    }
}

void write_csv_samples(const SampledFunction& f, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "x,value\n";
    for (int j = 0; j <= f.intervals(); ++j)
        out << format_double(f.x(j)) << "," << format_double(f.values[static_cast<std::size_t>(j)])
            << "\n";
}

void write_csv_matrix(const TensorSurface& s, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& row : s.values) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << format_double(row[j]) << (j + 1 == row.size() ? '\n' : ',');
    }
}

void write_pgm_heightmap(const TensorSurface& s, const std::filesystem::path& path,
                         const std::filesystem::path& sidecar) {
    double lo = s.values.at(0).at(0), hi = lo;
    for (const auto& row : s.values)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi - lo;
    auto out = open_for_write(path);
    out << "P2\n" << s.values[0].size() << " " << s.values.size() << "\n255\n";
    for (auto it = s.values.rbegin(); it != s.values.rend(); ++it) {
        const auto& row = *it;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const int g = span > 0.0
                              ? static_cast<int>(std::lround(255.0 * (row[j] - lo) / span))
                              : 0;
            out << g << (j + 1 == row.size() ? '\n' : ' ');
        }
    }
    auto side = open_for_write(sidecar);
    side << "min = " << format_double(lo) << "\n";
    side << "max = " << format_double(hi) << "\n";
    side << "gray = round(255 * (value - min) / (max - min))\n";
}

}  // namespace fractalfn
