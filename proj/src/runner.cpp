#include "fractalfn/runner.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fractalfn/analysis.hpp"
#include "fractalfn/io.hpp"
#include "fractalfn/local_ifs.hpp"
#include "fractalfn/tensor.hpp"

namespace fractalfn {

namespace {

namespace fs = std::filesystem;

void append_trace(std::ostringstream& report, const ConvergenceTrace& trace) {
    report << "[trace]\n";
    report << "iteration,cells,dh\n";
    for (const auto& rec : trace.records)
        report << rec.iteration << "," << rec.cell_count << "," << format_double(rec.dh_prev)
               << "\n";
}

void append_residuals(std::ostringstream& report, const std::vector<double>& residuals) {
    report << "[residuals]\n";
    for (double r : residuals) report << format_double(r) << "\n";
}

int run_solve(const JobConfig& job, const fs::path& out, std::ostringstream& report) {
    RBSystem sys = make_rb_system(job.system);
    InterpolationData data;
    if (!job.data_x.empty()) data = make_data(job);
    SampledFunction f0 =
        initial_iterate(data, sys.partition.base.lo, sys.partition.base.hi, job.grid);
    const SolveResult res = solve_fixed_point(sys, std::move(f0), {job.tol, job.max_iter});
    write_csv_samples(res.fixed_point, out / "solution.csv");
    report << "contraction_bound = " << format_double(sys.scale_sup()) << "\n";
    report << "iterations = " << res.residuals.size() << "\n";
    report << "final_residual = " << format_double(res.residuals.back()) << "\n";
    report << "self_referential_residual = "
           << format_double(verify_self_referential(sys, res.fixed_point)) << "\n";
    append_residuals(report, res.residuals);
    return 0;
}

int run_interp(const JobConfig& job, const fs::path& out, std::ostringstream& report) {
    const InterpolationData data = make_data(job);
    RBSystem sys = job.style == "affine"
                       ? build_affine_fif(data, job.scalings, job.midpoints)
                       : [&] {
                             BuiltSystem built = build_system(job.system, &data);
                             return build_property_S_system(
                                 built.partition.knots, built.partition.subsets, data,
                                 std::move(built.scale), std::move(built.lambda));
                         }();
    // a grid divisible by the piece count keeps the binary maps and their
    // data sites exactly on grid points; general partitions additionally need
    // grid-representable knots for a sharp knot check
    const int n = sys.partition.N;
    const int grid = (job.grid + n - 1) / n * n;
    SampledFunction f0 =
        initial_iterate(data, sys.partition.base.lo, sys.partition.base.hi, grid);
    const SolveResult res = solve_fixed_point(sys, std::move(f0), {job.tol, job.max_iter});
    write_csv_samples(res.fixed_point, out / "solution.csv");

    double knot_residual = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j)
        knot_residual = std::max(
            knot_residual, std::abs(res.fixed_point.value_at(data.sites[j]) - data.y(j)));
    const bool data_hit = knot_residual <= 1e-9;

    report << "style = " << job.style << "\n";
    report << "contraction_bound = " << format_double(sys.scale_sup()) << "\n";
    report << "iterations = " << res.residuals.size() << "\n";
    report << "knot_residual = " << format_double(knot_residual) << "\n";
    report << "knots_interpolated = " << (data_hit ? "true" : "false") << "\n";
    if (job.style == "affine") {
        const PropertyJReport j_rep = check_property_J(sys, data);
        report << "join_up_residual = " << format_double(j_rep.max_residual) << "\n";
        report << "join_up_pass = " << (j_rep.pass ? "true" : "false") << "\n";
    }
    append_residuals(report, res.residuals);
    return data_hit ? 0 : 2;
}

int run_check(const JobConfig& job, const fs::path&, std::ostringstream& report) {
    ConditionReport rep;
    if (job.space == "sobolev") {
        BuiltSystem built = build_system(job.system);
        rep = check_sobolev(built.partition, job.scalings, job.m, job.p);
    } else {
        RBSystem sys = make_rb_system(job.system);
        if (job.space == "lp")
            rep = check_Lp(sys, job.p);
        else if (job.space == "holder")
            rep = check_holder(sys, job.s_exp);
        else
            rep = check_Cn(sys, job.n);
    }
    report << rep.to_text();
    return rep.pass ? 0 : 2;
}

int run_attract(const JobConfig& job, const fs::path& out, std::ostringstream& report) {
    const GridSet k0 = GridSet::full(job.bounds, job.h);
    ConvergenceTrace trace;
    GridSet attractor(job.bounds, job.h);
    bool converged = false;
    if (job.mode == Mode::Attract) {
        const LocalIFS ifs = make_local_ifs(job);
        auto res = iterate_local_attractor(ifs, k0, {job.max_iter, job.tol});
        report << "became_empty = " << (res.became_empty ? "true" : "false") << "\n";
        trace = std::move(res.trace);
        attractor = std::move(res.attractor);
        converged = res.converged;
    } else {
        std::vector<AffineMap2D> maps;
        for (const auto& piece : job.system.pieces) maps.push_back(*piece.map);
        auto res = iterate_global_attractor(maps, k0, {job.max_iter, job.tol});
        trace = std::move(res.trace);
        attractor = std::move(res.attractor);
        converged = res.converged;
    }
    report << "converged = " << (converged ? "true" : "false") << "\n";
    report << "iterations = " << trace.records.size() << "\n";
    report << "final_cells = " << attractor.size() << "\n";
    if (!attractor.is_empty()) {
        write_pgm(attractor, out / "attractor.pgm");
        write_csv_cells(attractor, out / "attractor.csv");
    }
    append_trace(report, trace);
    return 0;
}

int run_tensor(const JobConfig& job, const fs::path& out, std::ostringstream& report) {
    const RBSystem sys_a = make_rb_system(job.system);
    const RBSystem sys_b = make_rb_system(job.system_b);
    const TensorResult res = tensor_fixed_point(sys_a, sys_b, {job.grid, job.tol, job.max_iter});
    write_csv_matrix(res.surface, out / "surface.csv");
    write_pgm_heightmap(res.surface, out / "surface.pgm", out / "surface_scale.txt");
    report << "contraction_bound = "
           << format_double(std::max(sys_a.scale_sup(), sys_b.scale_sup())) << "\n";
    report << "iterations = " << res.residuals.size() << "\n";
    append_residuals(report, res.residuals);
    return 0;
}

int run_graph_ifs(const JobConfig& job, const fs::path& out, std::ostringstream& report) {
    const RBSystem sys = make_rb_system(job.system);
    const GraphSystem g = graph_ifs_from_rb(sys, {job.grid, {job.tol, job.max_iter}});
    const Rect raster = g.ifs.bounds.snapped_outward(job.h);
    const GridSet graph = rasterize_graph(g.fixed_point, raster, job.h);
    const GridSet image = apply_local_operator(g.ifs, graph);
    const double dh = hausdorff_distance(image, graph);
    write_pgm(graph, out / "graph.pgm");
    write_csv_cells(graph, out / "graph.csv");
    write_csv_samples(g.fixed_point, out / "solution.csv");
    report << "theta = " << format_double(g.theta) << "\n";
    report << "q = " << format_double(g.q) << "\n";
    report << "graph_invariance_dh = " << format_double(dh) << "\n";
    report << "dh_tolerance = " << format_double(2.0 * job.h * std::sqrt(2.0)) << "\n";
    report << "pieces = " << g.ifs.pieces.size() << "\n";
    return 0;
}

}  // namespace

RunResult run(const JobConfig& job) {
    const fs::path out(job.out_dir);
    fs::create_directories(out);
    std::ostringstream report;
    report << "mode = " << to_string(job.mode) << "\n";
    int code = 0;
    switch (job.mode) {
        case Mode::Solve: code = run_solve(job, out, report); break;
        case Mode::Interp: code = run_interp(job, out, report); break;
        case Mode::Check: code = run_check(job, out, report); break;
        case Mode::Attract:
        case Mode::GlobalAttract: code = run_attract(job, out, report); break;
        case Mode::Tensor: code = run_tensor(job, out, report); break;
        case Mode::GraphIfs: code = run_graph_ifs(job, out, report); break;
    }
    report << "exit = " << code << "\n";

    std::ofstream report_file(out / "report.txt", std::ios::binary);
    report_file << report.str();
    std::ofstream echo(out / "config_echo.cfg", std::ios::binary);
    echo << print_config(job);
    return {code, report.str()};
}

}  // namespace fractalfn
