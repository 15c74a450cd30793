#include "phasesep/harness.hpp"

#include "phasesep/mesh_io.hpp"

#include "energy_internal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace phasesep {

namespace {

constexpr double kMembraneSlack = 0.10;
constexpr double kLiminfSlack = 0.05;

std::filesystem::path resolve(const Config& cfg, const std::string& path)
{
    std::filesystem::path p(path);
    if (p.is_relative() && !cfg.base_directory().empty())
        p = cfg.base_directory() / p;
    return p;
}

void prepare_out_dir(const HarnessOptions& opts)
{
    if (!opts.out_dir.empty())
        std::filesystem::create_directories(opts.out_dir);
}

Interpolant interpolant_from(const Config& cfg, const std::string& section)
{
    return Interpolant(cfg.get_double(section, "a1", 1.0), cfg.get_double(section, "a2", 1.0));
}

VertexField constant_field(const TriMesh& mesh, double value)
{
    return VertexField{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(mesh.vertex_count()), value)};
}

} // namespace

TriMesh mesh_from_config(const Config& cfg)
{
    cfg.require_known("mesh", {"kind", "subdivisions", "radius", "nx", "ny", "lx", "ly", "amplitude", "frequency",
                               "path", "copies", "separation", "scale"});
    const auto kind = cfg.get_string("mesh", "kind");
    TriMesh mesh = [&] {
        if (kind == "icosphere")
            return generate(Icosphere{cfg.get_int("mesh", "subdivisions", 3), cfg.get_double("mesh", "radius", 1.0)});
        if (kind == "strip")
            return generate(FlatStrip{cfg.get_int("mesh", "nx", 8), cfg.get_int("mesh", "ny", 8),
                                      cfg.get_double("mesh", "lx", 1.0), cfg.get_double("mesh", "ly", 1.0)});
        if (kind == "perturbed_sphere")
            return generate(PerturbedSphere{cfg.get_int("mesh", "subdivisions", 3), cfg.get_double("mesh", "radius", 1.0),
                                            cfg.get_double("mesh", "amplitude", 0.0),
                                            cfg.get_int("mesh", "frequency", 6)});
        if (kind == "file")
            return read_mesh(resolve(cfg, cfg.get_string("mesh", "path")));
        fail(ErrorKind::Parse, cfg.source() + ": unknown mesh kind '" + kind + "'");
    }();
    if (cfg.has("mesh", "scale"))
        mesh = scaled(mesh, cfg.get_double("mesh", "scale"));

    const int copies = cfg.get_int("mesh", "copies", 1);
    if (copies < 1)
        fail(ErrorKind::Input, "mesh copies must be at least 1");
    if (copies > 1) {
        Vec3 lo = mesh.vertex(0), hi = mesh.vertex(0);
        for (const auto& p : mesh.vertices()) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const double separation = cfg.get_double("mesh", "separation", 2.0 * (hi.x() - lo.x()));
        if (!(separation > hi.x() - lo.x()))
            fail(ErrorKind::Input, "copy separation must exceed the mesh width");
        const TriMesh single = mesh;
        for (int c = 1; c < copies; ++c)
            mesh = disjoint_union(mesh, translated(single, Vec3(c * separation, 0.0, 0.0)));
    }
    return mesh;
}

DoubleWell potential_from_config(const Config& cfg)
{
    cfg.require_known("potential", {"kind", "path", "growth_exponent", "growth_constant", "growth_threshold"});
    const auto kind = cfg.get_string("potential", "kind", "quartic");
    if (kind == "quartic")
        return DoubleWell::quartic();
    if (kind == "tabulated") {
        const GrowthCondition defaults;
        GrowthCondition g{cfg.get_double("potential", "growth_exponent", defaults.exponent),
                          cfg.get_double("potential", "growth_constant", defaults.constant),
                          cfg.get_double("potential", "growth_threshold", defaults.threshold)};
        return DoubleWell::load(resolve(cfg, cfg.get_string("potential", "path")), g);
    }
    fail(ErrorKind::Parse, cfg.source() + ": unknown potential kind '" + kind + "'");
}

MinimizeOptions solver_options_from_config(const Config& cfg, const SurfaceMeasure& measure)
{
    cfg.require_known("solver", {"mass", "mass_fraction", "max_iterations", "grad_tolerance", "step_init",
                                 "backtrack_factor", "seed", "trace"});
    MinimizeOptions o;
    if (cfg.has("solver", "mass"))
        o.mass_target = cfg.get_double("solver", "mass");
    else
        o.mass_target = cfg.get_double("solver", "mass_fraction", 0.5) * measure.total_area;
    o.max_iterations = cfg.get_int("solver", "max_iterations", o.max_iterations);
    o.grad_tolerance = cfg.get_double("solver", "grad_tolerance", o.grad_tolerance);
    o.step_init = cfg.get_double("solver", "step_init", o.step_init);
    o.backtrack_factor = cfg.get_double("solver", "backtrack_factor", o.backtrack_factor);
    o.seed = static_cast<std::uint64_t>(cfg.get_int("solver", "seed", static_cast<int>(o.seed)));
    if (cfg.has("solver", "trace"))
        o.trace_path = resolve(cfg, cfg.get_string("solver", "trace"));
    o.validate();
    return o;
}

FaceField threshold_field(const TriMesh& mesh, const VertexField& field)
{
    FaceField out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.triangle_count()))};
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        int votes = 0;
        for (int v : mesh.triangle(static_cast<int>(t)))
            votes += field.values[v] >= 0.5 ? 1 : 0;
        out.values[static_cast<Eigen::Index>(t)] = votes >= 2 ? 1.0 : 0.0;
    }
    return out;
}

SweepRecord make_sweep_record(const TriMesh& mesh, const SurfaceMeasure& measure, const ContinuationStep& step,
                              const DoubleWell& w, const Interpolant& ip)
{
    SweepRecord r;
    r.eps = step.eps;
    r.mm_value = step.energy.mm_value;
    r.dirichlet = step.energy.dirichlet;
    r.potential = step.energy.potential;
    r.willmore = mesh.closed() ? willmore(mesh, measure, step.field, ip) : 0.0;
    r.jump_length = level_curve_p1(mesh, step.field, 0.5).length;
    r.sharp_line_energy = 2.0 * w.tension_constant() * r.jump_length;
    r.ratio = r.sharp_line_energy > 0.0 ? r.mm_value / r.sharp_line_energy : 0.0;
    r.iterations = step.iterations;
    return r;
}

SweepResult run_sweep(const Config& cfg, const HarnessOptions& opts)
{
    cfg.require_known("sweep", {"eps", "start", "a1", "a2"});
    const auto mesh = mesh_from_config(cfg);
    const auto measure = measures(mesh);
    const auto w = potential_from_config(cfg);
    const auto solver = solver_options_from_config(cfg, measure);
    const auto ip = interpolant_from(cfg, "sweep");
    const auto eps_list = cfg.get_list("sweep", "eps");
    if (eps_list.empty())
        fail(ErrorKind::Input, "sweep needs at least one epsilon");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            fail(ErrorKind::Input, "sweep epsilons must be strictly decreasing");

    const auto start_name = cfg.get_string("sweep", "start", "axis");
    ContinuationStart start;
    if (start_name == "axis")
        start = AxisSplitStart{};
    else if (start_name == "random")
        start = RandomStart{};
    else
        fail(ErrorKind::Parse, cfg.source() + ": unknown sweep start '" + start_name + "'");

    SweepResult result;
    std::optional<VertexField> last;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const auto clock = std::chrono::steady_clock::now();
        ContinuationStart from = last ? ContinuationStart{*last} : start;
        auto cont = epsilon_continuation(mesh, measure, {eps_list[i]}, w, solver, from);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
        if (cont.error) {
            result.errors.push_back({eps_list[i], cont.error->what()});
            continue;
        }
        auto& step = cont.steps.front();
        auto record = make_sweep_record(mesh, measure, step, w, ip);
        record.wallclock_seconds = opts.deterministic ? 0.0 : seconds;
        result.records.push_back(record);
        result.fields.push_back(step.field);
        last = step.field;
    }

    if (!opts.out_dir.empty()) {
        prepare_out_dir(opts);
        write_report(result.records, ReportFormat::Csv, opts.out_dir / "sweep.csv");
        write_report(result.records, ReportFormat::Json, opts.out_dir / "sweep.json");
        write_mesh(opts.out_dir / "mesh.off", mesh);
        for (std::size_t i = 0; i < result.fields.size(); ++i)
            write_scalar_field(opts.out_dir / ("field_" + std::to_string(i) + ".txt"), result.fields[i].values);
        auto errors = nlohmann::json::array();
        for (const auto& e : result.errors)
            errors.push_back({{"eps", e.eps}, {"message", e.message}});
        write_json(opts.out_dir / "sweep_errors.json", errors);
    }
    return result;
}

nlohmann::json MembraneReport::to_json() const
{
    return {{"diffuse", phasesep::to_json(diffuse)},
            {"sharp", phasesep::to_json(sharp)},
            {"willmore_threshold", willmore_threshold},
            {"willmore_hypothesis", willmore_hypothesis ? "PASS" : "FAIL"},
            {"density", phasesep::to_json(density)},
            {"lower_bound", lower_bound_holds ? "PASS" : "FAIL"}};
}

MembraneReport run_membrane(const Config& cfg, const HarnessOptions& opts)
{
    cfg.require_known("membrane", {"a1", "a2", "delta", "eps", "eps_schedule", "field", "value", "probe_radii",
                                   "max_samples"});
    const auto mesh = mesh_from_config(cfg);
    if (!mesh.closed())
        fail(ErrorKind::UnsupportedGeometry, "membrane study needs a closed surface");
    const auto measure = measures(mesh);
    const auto w = potential_from_config(cfg);
    const auto ip = interpolant_from(cfg, "membrane");
    const double eps = cfg.get_double("membrane", "eps", 0.05);
    const double delta = cfg.get_double("membrane", "delta", 1.0);
    const auto recipe = cfg.get_string("membrane", "field", "minimize");

    VertexField field;
    if (recipe == "constant") {
        field = constant_field(mesh, cfg.get_double("membrane", "value", 1.0));
    } else if (recipe == "axis") {
        const auto solver = solver_options_from_config(cfg, measure);
        field = recovery_field(mesh, measure, axis_split(mesh, measure, solver.mass_target), eps, w);
    } else if (recipe == "minimize") {
        const auto solver = solver_options_from_config(cfg, measure);
        auto schedule = cfg.get_list("membrane", "eps_schedule", {eps});
        if (schedule.empty() || schedule.back() != eps)
            fail(ErrorKind::Input, "eps_schedule must end at eps");
        auto cont = epsilon_continuation(mesh, measure, schedule, w, solver);
        if (cont.error)
            throw *cont.error;
        field = cont.steps.back().field;
    } else {
        fail(ErrorKind::Parse, cfg.source() + ": unknown membrane field recipe '" + recipe + "'");
    }

    MembraneReport r;
    r.diffuse = total_energy(mesh, measure, field, eps, w, ip, EnergyMode::Full);
    r.sharp = sharp_energy(mesh, measure, threshold_field(mesh, field), w, ip);
    r.willmore_threshold = 8.0 * std::numbers::pi * std::min(ip.a1(), ip.a2()) - delta;
    r.willmore_hypothesis = r.diffuse.willmore < r.willmore_threshold;
    r.density = density_bound(mesh, measure, field, ip, cfg.get_list("membrane", "probe_radii", {0.3}),
                              cfg.get_int("membrane", "max_samples", 256));
    r.lower_bound_holds = r.diffuse.total >= (1.0 - kMembraneSlack) * r.sharp.total;

    if (!opts.out_dir.empty()) {
        prepare_out_dir(opts);
        write_json(opts.out_dir / "membrane.json", r.to_json());
        write_mesh(opts.out_dir / "mesh.off", mesh);
        write_scalar_field(opts.out_dir / "field.txt", field.values);
    }
    return r;
}

nlohmann::json VaryingReport::to_json() const
{
    return {{"amplitudes", amplitudes},
            {"strictness", phasesep::to_json(strictness)},
            {"mfp", phasesep::to_json(mfp)},
            {"member_mm_values", member_mm_values},
            {"limit_jump_length", limit_jump_length},
            {"limit_sharp_line_energy", limit_sharp_line_energy},
            {"liminf", liminf_holds ? "PASS" : "FAIL"}};
}

VaryingReport run_varying(const Config& cfg, const HarnessOptions& opts)
{
    cfg.require_known("varying", {"subdivisions", "radius", "frequency", "amplitudes", "base_amplitude", "members",
                                  "field", "value", "eps"});
    const int subdivisions = cfg.get_int("varying", "subdivisions", 4);
    const double radius = cfg.get_double("varying", "radius", 1.0);
    const int frequency = cfg.get_int("varying", "frequency", 6);
    const double eps = cfg.get_double("varying", "eps", 0.1);
    const auto w = potential_from_config(cfg);

    VaryingReport r;
    if (cfg.has("varying", "amplitudes")) {
        r.amplitudes = cfg.get_list("varying", "amplitudes");
    } else {
        const double base = cfg.get_double("varying", "base_amplitude", 0.2);
        const int members = cfg.get_int("varying", "members", 5);
        for (int j = 1; j <= members; ++j)
            r.amplitudes.push_back(base / j);
    }
    if (r.amplitudes.empty())
        fail(ErrorKind::Input, "varying-surface family is empty");

    auto limit = measured(generate(Icosphere{subdivisions, radius}));
    const auto recipe = cfg.get_string("varying", "field", "recovery");
    VertexField field;
    if (recipe == "constant")
        field = constant_field(limit.mesh, cfg.get_double("varying", "value", 1.0));
    else if (recipe == "recovery")
        field = recovery_field(limit.mesh, limit.measure,
                               axis_split(limit.mesh, limit.measure, 0.5 * limit.measure.total_area), eps, w);
    else
        fail(ErrorKind::Parse, cfg.source() + ": unknown field recipe '" + recipe + "'");

    std::vector<MeasuredSurface> surfaces;
    std::vector<FieldSurface> pairs;
    for (double a : r.amplitudes) {
        auto member = measured(generate(PerturbedSphere{subdivisions, radius, a, frequency}));
        r.member_mm_values.push_back(
            detail::modica_mortola_quiet(member.mesh, member.measure, field, eps, w).mm_value);
        pairs.push_back(FieldSurface{member, field});
        surfaces.push_back(std::move(member));
    }
    r.strictness = strictness_report(surfaces, limit);
    r.mfp = mfp_test(pairs, FieldSurface{limit, field}, standard_test_functions());
    r.limit_jump_length = level_curve_p1(limit.mesh, field, 0.5).length;
    r.limit_sharp_line_energy = 2.0 * w.tension_constant() * r.limit_jump_length;
    const double worst = *std::min_element(r.member_mm_values.begin(), r.member_mm_values.end());
    r.liminf_holds = worst >= (1.0 - kLiminfSlack) * r.limit_sharp_line_energy;

    if (!opts.out_dir.empty()) {
        prepare_out_dir(opts);
        write_json(opts.out_dir / "varying.json", r.to_json());
    }
    return r;
}

} // namespace phasesep
