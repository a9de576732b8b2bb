#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractalfn/geometry.hpp"
#include "fractalfn/local_ifs.hpp"
#include "fractalfn/rb.hpp"

// Declarative job description: a line-oriented "key = value" format with
// [piece i] blocks. Polynomials are written poly(c0, c1, ...) with monomial
// coefficients low to high in the global variable, straight segments
// line(v_lo, v_hi), and B-spline scalings bspline(order, amplitude).

namespace fractalfn {

enum class Mode { Solve, Attract, GlobalAttract, Check, Interp, Tensor, GraphIfs };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

struct PolySpec {
    enum class Kind { Poly, Line, Bspline };
    Kind kind = Kind::Poly;
    std::vector<double> args;

    bool operator==(const PolySpec&) const = default;
};

struct PieceSpec {
    std::optional<PolySpec> lambda;
    std::optional<PolySpec> scale;
    std::optional<Interval> subset;      // general partitions
    std::optional<Rect> domain;          // attract modes
    std::optional<AffineMap2D> map;      // attract modes

    bool operator==(const PieceSpec&) const = default;
};

struct SystemSpec {
    bool binary = true;
    int binary_n = 0;  // 0: inferred from the piece count
    std::vector<double> knots;
    std::vector<PieceSpec> pieces;

    bool operator==(const SystemSpec&) const = default;
};

struct JobConfig {
    Mode mode = Mode::Solve;
    SystemSpec system;
    SystemSpec system_b;  // second factor in tensor mode

    std::string style;  // interp: "affine" or "property-s"
    std::vector<double> data_x;
    std::vector<double> data_y;
    std::vector<double> scalings;
    std::vector<double> midpoints;

    std::string space;  // check: "lp", "holder", "cn", "sobolev"
    double p = 2.0;
    double s_exp = 0.5;
    int n = 0;
    int m = 0;

    Rect bounds{0.0, 1.0, 0.0, 1.0};
    double h = 1.0 / 512;

    int grid = 4096;
    double tol = 1e-10;
    int max_iter = 200;
    std::string out_dir = "out";
    long long seed = 0;

    bool operator==(const JobConfig&) const = default;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// parses, validates, and fills mode defaults; every error carries its line
JobConfig parse_config(const std::string& text);
JobConfig parse_config_file(const std::filesystem::path& path);

// canonical text form with all defaults echoed; parse(print(c)) == c
std::string print_config(const JobConfig& config);

// --- construction of module objects from a validated config ---

struct BuiltSystem {
    PartitionSpec partition;
    std::vector<PiecewisePoly> lambda;
    std::vector<PiecewisePoly> scale;
};

// data, when present, supplies the default lambda of general partitions
// (the straight segment through the neighbouring knot values)
BuiltSystem build_system(const SystemSpec& spec, const InterpolationData* data = nullptr);
RBSystem make_rb_system(const SystemSpec& spec, const InterpolationData* data = nullptr);
LocalIFS make_local_ifs(const JobConfig& config);
InterpolationData make_data(const JobConfig& config);

}  // namespace fractalfn
