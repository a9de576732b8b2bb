#include "fractalfn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fractalfn/io.hpp"

namespace fractalfn {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::Solve: return "solve";
        case Mode::Attract: return "attract";
        case Mode::GlobalAttract: return "global-attract";
        case Mode::Check: return "check";
        case Mode::Interp: return "interp";
        case Mode::Tensor: return "tensor";
        case Mode::GraphIfs: return "graph-ifs";
    }
    return "?";
}

Mode mode_from_string(const std::string& text) {
    for (Mode m : {Mode::Solve, Mode::Attract, Mode::GlobalAttract, Mode::Check, Mode::Interp,
                   Mode::Tensor, Mode::GraphIfs})
        if (text == to_string(m)) return m;
    throw ConfigError("unknown mode '" + text + "'");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& text, int line) {
    const std::string t = trim(text);
    if (t == "inf") return std::numeric_limits<double>::infinity();
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size() || t.empty()) fail(line, "expected a number, got '" + t + "'");
    return v;
}

long long parse_integer(const std::string& text, int line) {
    const double v = parse_number(text, line);
    if (std::floor(v) != v) fail(line, "expected an integer, got '" + trim(text) + "'");
    return static_cast<long long>(v);
}

std::vector<std::string> split_items(const std::string& text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) items.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) items.push_back(current);
    return items;
}

std::vector<double> parse_list(const std::string& text, int line) {
    std::vector<double> out;
    for (const auto& item : split_items(text)) out.push_back(parse_number(item, line));
    if (out.empty()) fail(line, "expected a list of numbers");
    return out;
}

std::vector<double> parse_fixed_list(const std::string& text, int line, std::size_t arity,
                                     const char* what) {
    auto v = parse_list(text, line);
    if (v.size() != arity)
        fail(line, std::string(what) + " needs " + std::to_string(arity) + " numbers, got " +
                       std::to_string(v.size()));
    return v;
}

PolySpec parse_polyspec(const std::string& text, int line) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        fail(line, "expected poly(...), line(...) or bspline(...), got '" + t + "'");
    const std::string name = trim(t.substr(0, open));
    PolySpec spec;
    if (name == "poly") spec.kind = PolySpec::Kind::Poly;
    else if (name == "line") spec.kind = PolySpec::Kind::Line;
    else if (name == "bspline") spec.kind = PolySpec::Kind::Bspline;
    else fail(line, "unknown coefficient function '" + name + "'");
    spec.args = parse_list(t.substr(open + 1, t.size() - open - 2), line);
    if (spec.kind == PolySpec::Kind::Line && spec.args.size() != 2)
        fail(line, "line(...) needs exactly two values");
    if (spec.kind == PolySpec::Kind::Bspline) {
        if (spec.args.size() != 2) fail(line, "bspline(...) needs order and amplitude");
        if (spec.args[0] != std::floor(spec.args[0]) || spec.args[0] < 3)
            fail(line, "bspline order must be an integer >= 3");
    }
    return spec;
}

void parse_data_pairs(const std::string& text, int line, std::vector<double>& xs,
                      std::vector<double>& ys) {
    xs.clear();
    ys.clear();
    for (const auto& item : split_items(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) fail(line, "data entries must look like x:y");
        xs.push_back(parse_number(item.substr(0, colon), line));
        ys.push_back(parse_number(item.substr(colon + 1), line));
    }
    if (xs.empty()) fail(line, "data must not be empty");
}

struct ParseState {
    JobConfig job;
    bool mode_set = false;
    bool grid_set = false, tol_set = false, max_iter_set = false;
    // line numbers of entries revalidated after the whole file is read
    std::map<std::pair<int, std::size_t>, int> scale_lines;  // (system, piece) -> line
    int scalings_line = 0;
    std::map<std::string, int> seen;
};

PieceSpec& piece_at(SystemSpec& sys, std::size_t index1, int line) {
    if (index1 < 1 || index1 > 4096) fail(line, "piece index out of range");
    if (sys.pieces.size() < index1) sys.pieces.resize(index1);
    return sys.pieces[index1 - 1];
}

void apply_global_key(ParseState& st, const std::string& key, const std::string& value,
                      int line) {
    JobConfig& job = st.job;
    // tensor factors use the a./b. prefix
    std::string bare = key;
    SystemSpec* sys = &job.system;
    if (key.rfind("a.", 0) == 0) {
        bare = key.substr(2);
        sys = &job.system;
    } else if (key.rfind("b.", 0) == 0) {
        bare = key.substr(2);
        sys = &job.system_b;
    }

    if (st.seen.count(key)) fail(line, "duplicate key '" + key + "'");
    st.seen[key] = line;

    if (bare == "mode") {
        try {
            job.mode = mode_from_string(trim(value));
        } catch (const ConfigError& e) {
            fail(line, e.what());
        }
        st.mode_set = true;
    } else if (bare == "partition") {
        const auto items = split_items(value);
        if (items.size() == 2 && items[0] == "binary") {
            sys->binary = true;
            sys->binary_n = static_cast<int>(parse_integer(items[1], line));
            if (sys->binary_n < 2 || sys->binary_n % 2 != 0)
                fail(line, "binary partition needs an even piece count >= 2");
        } else if (items.size() == 1 && items[0] == "general") {
            sys->binary = false;
        } else {
            fail(line, "partition must be 'binary N' or 'general'");
        }
    } else if (bare == "knots") {
        sys->knots = parse_list(value, line);
    } else if (bare == "grid") {
        job.grid = static_cast<int>(parse_integer(value, line));
        if (job.grid < 2) fail(line, "grid must be at least 2");
        st.grid_set = true;
    } else if (bare == "tol") {
        job.tol = parse_number(value, line);
        if (!(job.tol > 0.0)) fail(line, "tol must be positive");
        st.tol_set = true;
    } else if (bare == "max_iter") {
        job.max_iter = static_cast<int>(parse_integer(value, line));
        if (job.max_iter < 1) fail(line, "max_iter must be positive");
        st.max_iter_set = true;
    } else if (bare == "out") {
        job.out_dir = trim(value);
    } else if (bare == "seed") {
        job.seed = parse_integer(value, line);
    } else if (bare == "style") {
        job.style = trim(value);
        if (job.style != "affine" && job.style != "property-s")
            fail(line, "style must be 'affine' or 'property-s'");
    } else if (bare == "data") {
        parse_data_pairs(value, line, job.data_x, job.data_y);
    } else if (bare == "scalings") {
        job.scalings = parse_list(value, line);
        st.scalings_line = line;
    } else if (bare == "midpoints") {
        job.midpoints = parse_list(value, line);
    } else if (bare == "space") {
        job.space = trim(value);
        if (job.space != "lp" && job.space != "holder" && job.space != "cn" &&
            job.space != "sobolev")
            fail(line, "space must be one of lp, holder, cn, sobolev");
    } else if (bare == "p") {
        job.p = parse_number(value, line);
    } else if (bare == "s") {
        job.s_exp = parse_number(value, line);
    } else if (bare == "n") {
        job.n = static_cast<int>(parse_integer(value, line));
    } else if (bare == "m") {
        job.m = static_cast<int>(parse_integer(value, line));
    } else if (bare == "bounds") {
        const auto v = parse_fixed_list(value, line, 4, "bounds");
        job.bounds = {v[0], v[1], v[2], v[3]};
    } else if (bare == "h") {
        job.h = parse_number(value, line);
        if (!(job.h > 0.0)) fail(line, "h must be positive");
    } else {
        fail(line, "unknown key '" + key + "'");
    }
}

void apply_piece_key(ParseState& st, int system_index, std::size_t piece_index,
                     const std::string& key, const std::string& value, int line) {
    SystemSpec& sys = system_index == 0 ? st.job.system : st.job.system_b;
    PieceSpec& piece = piece_at(sys, piece_index, line);
    if (key == "lambda") {
        piece.lambda = parse_polyspec(value, line);
    } else if (key == "s") {
        piece.scale = parse_polyspec(value, line);
        st.scale_lines[{system_index, piece_index - 1}] = line;
    } else if (key == "subset") {
        const auto v = parse_fixed_list(value, line, 2, "subset");
        if (!(v[0] < v[1])) fail(line, "subset must have positive length");
        piece.subset = Interval::closed(v[0], v[1]);
    } else if (key == "domain") {
        const auto v = parse_fixed_list(value, line, 4, "domain");
        piece.domain = Rect{v[0], v[1], v[2], v[3]};
    } else if (key == "map") {
        const auto v = parse_fixed_list(value, line, 6, "map");
        AffineMap2D m;
        m.linear = {v[0], v[1], v[2], v[3]};
        m.translation = {v[4], v[5]};
        piece.map = m;
    } else {
        fail(line, "unknown piece key '" + key + "'");
    }
}

bool contractive_mode(Mode mode) {
    return mode == Mode::Solve || mode == Mode::Interp || mode == Mode::Tensor ||
           mode == Mode::GraphIfs;
}

// semantic validation that needs the whole file: piece counts, required keys,
// and the contraction bound on every scale function in a contractive mode
void validate(ParseState& st) {
    JobConfig& job = st.job;
    if (!st.mode_set) throw ConfigError("line 1: missing required key 'mode'");

    // fill mode-dependent defaults so they are echoed by print_config
    if (!st.grid_set) job.grid = job.mode == Mode::Tensor ? 256 : 4096;
    if (!st.max_iter_set)
        job.max_iter = (job.mode == Mode::Attract || job.mode == Mode::GlobalAttract) ? 256 : 200;
    if (!st.tol_set)
        job.tol = (job.mode == Mode::Attract || job.mode == Mode::GlobalAttract) ? job.h : 1e-10;

    const auto check_system = [&](const SystemSpec& spec, int system_index) {
        InterpolationData data;
        BuiltSystem built;
        try {
            const InterpolationData* data_ptr = nullptr;
            if (!job.data_x.empty() && !spec.binary) {
                data = InterpolationData::simple(job.data_x, job.data_y);
                data_ptr = &data;
            }
            built = build_system(spec, data_ptr);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (!contractive_mode(job.mode)) return;
        for (std::size_t i = 0; i < built.scale.size(); ++i) {
            if (built.scale[i].sup_upper_bound() < 1.0) continue;
            const auto it = st.scale_lines.find({system_index, i});
            const int line = it == st.scale_lines.end() ? 1 : it->second;
            fail(line, "piece " + std::to_string(i + 1) +
                           ": scale function has sup >= 1 in a contractive mode");
        }
    };

    switch (job.mode) {
        case Mode::Solve:
        case Mode::Check:
        case Mode::GraphIfs:
            check_system(job.system, 0);
            break;
        case Mode::Tensor:
            check_system(job.system, 0);
            check_system(job.system_b, 1);
            break;
        case Mode::Interp: {
            if (job.style.empty()) throw ConfigError("config: interp mode needs style");
            if (job.data_x.empty()) throw ConfigError("config: interp mode needs data");
            if (job.style == "affine") {
                const std::size_t want = 2 * (job.data_x.size() - 1);
                if (job.scalings.size() != want)
                    fail(std::max(1, st.scalings_line),
                         "affine interpolation needs one scaling per piece (" +
                             std::to_string(want) + ")");
                for (std::size_t i = 0; i < job.scalings.size(); ++i)
                    if (!(std::abs(job.scalings[i]) < 1.0))
                        fail(std::max(1, st.scalings_line),
                             "scaling " + std::to_string(i + 1) + " has magnitude >= 1");
                if (!job.midpoints.empty() && job.midpoints.size() != job.data_x.size() - 1)
                    throw ConfigError("config: need one midpoint per odd knot");
            } else {
                check_system(job.system, 0);
            }
            break;
        }
        case Mode::Attract:
        case Mode::GlobalAttract: {
            if (job.system.pieces.empty())
                throw ConfigError("config: attract modes need at least one [piece]");
            for (std::size_t i = 0; i < job.system.pieces.size(); ++i) {
                const auto& piece = job.system.pieces[i];
                if (!piece.map)
                    throw ConfigError("config: piece " + std::to_string(i + 1) + " needs a map");
                if (job.mode == Mode::Attract && !piece.domain)
                    throw ConfigError("config: piece " + std::to_string(i + 1) +
                                      " needs a domain");
            }
            try {
                if (job.mode == Mode::Attract) make_local_ifs(job);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            break;
        }
    }
    if (job.space == "sobolev" && job.scalings.empty() && job.mode == Mode::Check)
        throw ConfigError("config: sobolev check needs scalings");
}

}  // namespace

JobConfig parse_config(const std::string& text) {
    ParseState st;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int section_system = -1;           // -1: global scope
    std::size_t section_piece = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const auto inner = trim(line.substr(1, line.size() - 2));
            auto items = split_items(inner);
            int system_index = 0;
            std::string word = items.empty() ? "" : items[0];
            if (word.rfind("a.", 0) == 0) {
                word = word.substr(2);
            } else if (word.rfind("b.", 0) == 0) {
                word = word.substr(2);
                system_index = 1;
            }
            if (items.size() != 2 || word != "piece")
                fail(line_no, "expected [piece N], [a.piece N] or [b.piece N]");
            const long long idx = parse_integer(items[1], line_no);
            if (idx < 1) fail(line_no, "piece index must be positive");
            section_system = system_index;
            section_piece = static_cast<std::size_t>(idx);
            // materialize the piece so empty blocks still count
            piece_at(section_system == 0 ? st.job.system : st.job.system_b, section_piece,
                     line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + key + "'");
        if (section_system < 0)
            apply_global_key(st, key, value, line_no);
        else
            apply_piece_key(st, section_system, section_piece, key, value, line_no);
    }
    validate(st);
    return st.job;
}

JobConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

std::string poly_to_string(const PolySpec& spec) {
    std::string name;
    switch (spec.kind) {
        case PolySpec::Kind::Poly: name = "poly"; break;
        case PolySpec::Kind::Line: name = "line"; break;
        case PolySpec::Kind::Bspline: name = "bspline"; break;
    }
    std::string out = name + "(";
    for (std::size_t i = 0; i < spec.args.size(); ++i) {
        if (i) out += ", ";
        out += format_double(spec.args[i]);
    }
    return out + ")";
}

std::string list_to_string(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

void print_system_header(std::ostringstream& out, const SystemSpec& sys,
                         const std::string& prefix) {
    if (sys.binary) {
        if (sys.binary_n > 0)
            out << prefix << "partition = binary " << sys.binary_n << "\n";
    } else {
        out << prefix << "partition = general\n";
        if (!sys.knots.empty()) out << prefix << "knots = " << list_to_string(sys.knots) << "\n";
    }
}

void print_system_pieces(std::ostringstream& out, const SystemSpec& sys,
                         const std::string& prefix) {
    for (std::size_t i = 0; i < sys.pieces.size(); ++i) {
        const auto& piece = sys.pieces[i];
        out << "[" << prefix << "piece " << (i + 1) << "]\n";
        if (piece.subset)
            out << "subset = " << format_double(piece.subset->lo) << ", "
                << format_double(piece.subset->hi) << "\n";
        if (piece.lambda) out << "lambda = " << poly_to_string(*piece.lambda) << "\n";
        if (piece.scale) out << "s = " << poly_to_string(*piece.scale) << "\n";
        if (piece.domain)
            out << "domain = " << format_double(piece.domain->x0) << ", "
                << format_double(piece.domain->x1) << ", " << format_double(piece.domain->y0)
                << ", " << format_double(piece.domain->y1) << "\n";
        if (piece.map) {
            const auto& m = *piece.map;
            out << "map = " << format_double(m.linear.m00) << ", " << format_double(m.linear.m01)
                << ", " << format_double(m.linear.m10) << ", " << format_double(m.linear.m11)
                << ", " << format_double(m.translation.x) << ", "
                << format_double(m.translation.y) << "\n";
        }
    }
}

}  // namespace

std::string print_config(const JobConfig& job) {
    const JobConfig defaults;
    std::ostringstream out;
    out << "mode = " << to_string(job.mode) << "\n";
    out << "grid = " << job.grid << "\n";
    out << "tol = " << format_double(job.tol) << "\n";
    out << "max_iter = " << job.max_iter << "\n";
    out << "out = " << job.out_dir << "\n";
    out << "seed = " << job.seed << "\n";
    if (job.h != defaults.h) out << "h = " << format_double(job.h) << "\n";
    if (job.bounds != defaults.bounds)
        out << "bounds = " << format_double(job.bounds.x0) << ", " << format_double(job.bounds.x1)
            << ", " << format_double(job.bounds.y0) << ", " << format_double(job.bounds.y1)
            << "\n";
    if (!job.style.empty()) out << "style = " << job.style << "\n";
    if (!job.data_x.empty()) {
        out << "data = ";
        for (std::size_t i = 0; i < job.data_x.size(); ++i) {
            if (i) out << ", ";
            out << format_double(job.data_x[i]) << ":" << format_double(job.data_y[i]);
        }
        out << "\n";
    }
    if (!job.scalings.empty()) out << "scalings = " << list_to_string(job.scalings) << "\n";
    if (!job.midpoints.empty()) out << "midpoints = " << list_to_string(job.midpoints) << "\n";
    if (!job.space.empty()) out << "space = " << job.space << "\n";
    if (job.p != defaults.p)
        out << "p = " << (std::isinf(job.p) ? std::string("inf") : format_double(job.p)) << "\n";
    if (job.s_exp != defaults.s_exp) out << "s = " << format_double(job.s_exp) << "\n";
    if (job.n != defaults.n) out << "n = " << job.n << "\n";
    if (job.m != defaults.m) out << "m = " << job.m << "\n";
    const std::string prefix_a = job.mode == Mode::Tensor ? "a." : "";
    print_system_header(out, job.system, prefix_a);
    if (job.mode == Mode::Tensor) print_system_header(out, job.system_b, "b.");
    print_system_pieces(out, job.system, prefix_a);
    if (job.mode == Mode::Tensor) print_system_pieces(out, job.system_b, "b.");
    return out.str();
}

BuiltSystem build_system(const SystemSpec& spec, const InterpolationData* data) {
    BuiltSystem built;
    const int n_pieces = static_cast<int>(spec.pieces.size());
    if (spec.binary) {
        const int n = spec.binary_n > 0 ? spec.binary_n : n_pieces;
        if (n_pieces != 0 && n_pieces != n)
            throw std::invalid_argument("expected " + std::to_string(n) + " pieces, got " +
                                        std::to_string(n_pieces));
        built.partition = make_binary_partition(n);
    } else {
        if (n_pieces == 0) throw std::invalid_argument("general partition needs pieces");
        if (spec.knots.size() != spec.pieces.size() + 1)
            throw std::invalid_argument("general partition needs one more knot than pieces");
        std::vector<Interval> subsets;
        for (int i = 0; i < n_pieces; ++i) {
            const auto& piece = spec.pieces[static_cast<std::size_t>(i)];
            if (!piece.subset)
                throw std::invalid_argument("piece " + std::to_string(i + 1) +
                                            " of a general partition needs a subset");
            subsets.push_back(*piece.subset);
        }
        built.partition = PartitionSpec::general(spec.knots, std::move(subsets));
    }

    const auto build_poly = [](const PolySpec& poly, const Interval& dom) {
        switch (poly.kind) {
            case PolySpec::Kind::Poly:
                return PiecewisePoly::from_monomial(dom, poly.args);
            case PolySpec::Kind::Line:
                return PiecewisePoly::linear(dom, poly.args[0], poly.args[1]);
            case PolySpec::Kind::Bspline:
                return PiecewisePoly::bspline(static_cast<int>(poly.args[0]), dom, poly.args[1]);
        }
        throw std::invalid_argument("unknown coefficient function kind");
    };

    for (int i = 0; i < built.partition.N; ++i) {
        const Interval& dom = built.partition.subsets[static_cast<std::size_t>(i)];
        const PieceSpec* piece =
            i < n_pieces ? &spec.pieces[static_cast<std::size_t>(i)] : nullptr;
        if (piece && piece->lambda) {
            built.lambda.push_back(build_poly(*piece->lambda, dom));
        } else if (data && !spec.binary) {
            // default for general partitions: the segment through the data
            built.lambda.push_back(PiecewisePoly::linear(dom, data->y(static_cast<std::size_t>(i)),
                                                         data->y(static_cast<std::size_t>(i) + 1)));
        } else {
            built.lambda.push_back(PiecewisePoly::constant(dom, 0.0));
        }
        if (piece && piece->scale)
            built.scale.push_back(build_poly(*piece->scale, dom));
        else
            built.scale.push_back(PiecewisePoly::constant(dom, 0.0));
    }
    return built;
}

RBSystem make_rb_system(const SystemSpec& spec, const InterpolationData* data) {
    BuiltSystem built = build_system(spec, data);
    return RBSystem(std::move(built.partition), std::move(built.lambda),
                    std::move(built.scale));
}

LocalIFS make_local_ifs(const JobConfig& job) {
    LocalIFS ifs;
    ifs.bounds = job.bounds;
    for (std::size_t i = 0; i < job.system.pieces.size(); ++i) {
        const auto& piece = job.system.pieces[i];
        if (!piece.map)
            throw std::invalid_argument("piece " + std::to_string(i + 1) + " needs a map");
        LocalIFSPiece out;
        out.map = *piece.map;
        out.domain = piece.domain ? *piece.domain : job.bounds;
        ifs.pieces.push_back(out);
    }
    ifs.validate();
    return ifs;
}

InterpolationData make_data(const JobConfig& job) {
    return InterpolationData::simple(job.data_x, job.data_y);
}

}  // namespace fractalfn
