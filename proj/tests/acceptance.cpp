// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "phasesep/config.hpp"
#include "phasesep/currents.hpp"
#include "phasesep/energy.hpp"
#include "phasesep/harness.hpp"
#include "phasesep/minimize.hpp"
#include "phasesep/surface.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace phasesep;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double budget_seconds, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && seconds > budget_seconds) {
        o.pass = false;
        o.detail += "; over the time budget";
    }
    if (!o.pass)
        ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Eigen::VectorXd uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = d(rng);
    return v;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome mass_identity()
{
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> height(0.0, 10.0);
    std::bernoulli_distribution coin(0.5);
    int cases = 0, violations = 0;
    double worst = 0.0;
    for (const MeshSpec& spec : std::vector<MeshSpec>{Icosphere{3, 1.0}, FlatStrip{8, 8, 1.0, 1.0}}) {
        const auto mesh = generate(spec);
        const auto m = measures(mesh);
        const auto nt = Eigen::Index(mesh.triangle_count());
        for (int trial = 0; trial < 100; ++trial, ++cases) {
            double b = 0.0;
            while (b <= 0.0)
                b = 10.0 - height(rng); // (0, 10]
            FaceField f{Eigen::VectorXd(nt)};
            for (Eigen::Index t = 0; t < nt; ++t)
                f.values[t] = coin(rng) ? b : 0.0;
            const double lhs = graph_mass_p0(mesh, m, f).total_mass - m.total_area;
            const double rhs = b * jump_curve_p0(mesh, f).length;
            const double rel = std::abs(lhs - rhs) / std::max(rhs, m.total_area);
            worst = std::max(worst, rel);
            violations += rel > 1e-12;
        }
    }
    return {violations == 0, fmt("%d fields, %d violations, worst relative error %.2e", cases, violations, worst)};
}

struct RandomSet {
    int fields = 0, trick_violations = 0, mass_violations = 0;
    double trick_margin = std::numeric_limits<double>::infinity();
    double mass_margin = std::numeric_limits<double>::infinity();
};

// 1000 random fields, rough and smooth, split over a sphere and a square, each at three epsilons
const RandomSet& random_set()
{
    static const RandomSet set = [] {
        RandomSet s;
        const auto w = DoubleWell::quartic();
        std::mt19937_64 rng(2002);
        const std::vector<TriMesh> meshes{generate(Icosphere{3, 1.0}), generate(FlatStrip{16, 16, 1.0, 1.0})};
        std::vector<SurfaceMeasure> ms;
        for (const auto& mesh : meshes)
            ms.push_back(measures(mesh));
        for (int i = 0; i < 1000; ++i) {
            const auto& mesh = meshes[std::size_t(i % 2)];
            const auto& m = ms[std::size_t(i % 2)];
            VertexField u{uniform(rng, Eigen::Index(mesh.vertex_count()), -0.5, 1.5)};
            if (i % 4 >= 2) {
                // smooth interface profiles, where the trick is nearly sharp
                std::normal_distribution<double> gauss;
                std::uniform_real_distribution<double> width(0.02, 1.0), offset(-0.5, 0.5);
                const Vec3 dir = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
                const double s = width(rng), c = offset(rng);
                for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
                    u.values[Eigen::Index(v)] = w.optimal_profile((dir.dot(mesh.vertex(int(v))) - c) / s);
            }
            const VertexField theta{u.values.unaryExpr([&](double t) { return w.first_integral(t); })};
            const double lifted = graph_mass_p1(mesh, m, theta).total_mass;
            ++s.fields;
            for (double eps : {0.01, 0.1, 1.0}) {
                const auto e = modica_mortola(mesh, m, u, eps, w);
                s.trick_violations += e.trick_lhs > e.mm_value;
                s.trick_margin = std::min(s.trick_margin, (e.mm_value - e.trick_lhs) / e.mm_value);
                const double bound = m.total_area + e.mm_value / 2;
                s.mass_violations += lifted > bound;
                s.mass_margin = std::min(s.mass_margin, (bound - lifted) / bound);
            }
        }
        return s;
    }();
    return set;
}

double isoline_ratio(const TriMesh& mesh, const VertexField& u, double mm, const DoubleWell& w)
{
    return mm / (2 * w.tension_constant() * level_curve_p1(mesh, u, 0.5).length);
}

Outcome strip_interface()
{
    const auto w = DoubleWell::quartic();
    const auto mesh = generate(FlatStrip{64, 64, 1.0, 1.0});
    const auto m = measures(mesh);
    MinimizeOptions opts;
    opts.mass_target = 0.5;
    const auto r = minimize_mm(mesh, m, 0.05, w, opts);
    const double scaled = r.energy.mm_value * 3.0;
    const double ratio = isoline_ratio(mesh, r.field, r.energy.mm_value, w);
    const bool pass = r.converged && scaled >= 0.95 && scaled <= 1.05 && ratio >= 0.95 && ratio <= 1.10;
    return {pass, fmt("mm_value = %.6f (%.4f of 1/3), ratio = %.4f, %d iterations, converged = %d", r.energy.mm_value,
                      scaled, ratio, r.iterations, int(r.converged))};
}

Outcome sphere_equator()
{
    const auto w = DoubleWell::quartic();
    const auto mesh = generate(Icosphere{4, 1.0});
    const auto m = measures(mesh);
    MinimizeOptions opts;
    opts.mass_target = 2 * pi;
    const auto c = epsilon_continuation(mesh, m, {0.2, 0.1, 0.05}, w, opts);
    if (c.error)
        return {false, std::string("continuation failed: ") + c.error->what()};
    std::vector<double> ratios;
    std::string seq;
    for (const auto& s : c.steps) {
        ratios.push_back(isoline_ratio(mesh, s.field, s.energy.mm_value, w));
        seq += fmt("%s%.4f", seq.empty() ? "" : ", ", ratios.back());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        decreasing = decreasing && ratios[i] < ratios[i - 1];
    const double final_mm = c.steps.back().energy.mm_value;
    const double rel = std::abs(final_mm / (2 * pi / 3) - 1);
    return {rel <= 0.10 && decreasing,
            fmt("final mm_value = %.6f (%.2f%% from 2pi/3); ratio over eps = 0.2, 0.1, 0.05: %s (%s)", final_mm,
                100 * rel, seq.c_str(), decreasing ? "decreasing" : "not decreasing")};
}

Outcome willmore_benchmarks()
{
    const auto mesh = generate(Icosphere{4, 1.0});
    const auto m = measures(mesh);
    const VertexField u{Eigen::VectorXd::Constant(Eigen::Index(mesh.vertex_count()), 0.5)};
    const Interpolant ip(1, 1);
    const double base = willmore(mesh, m, u, ip);
    bool pass = base >= 0.97 * 4 * pi && base <= 1.03 * 4 * pi;
    std::string detail = fmt("W = %.5f (%.4f of 4pi)", base, base / (4 * pi));
    for (double lambda : {0.5, 2.0}) {
        const auto s = scaled(mesh, lambda);
        const double ws = willmore(s, measures(s), u, ip);
        const double rel = std::abs(ws / base - 1);
        pass = pass && rel <= 0.02;
        detail += fmt("; scale %.1f changes W by %.2e", lambda, rel);
    }
    return {pass, detail};
}

Outcome li_yau()
{
    const auto sphere = generate(Icosphere{4, 1.0});
    const auto ms = measures(sphere);
    const VertexField one{Eigen::VectorXd::Ones(Eigen::Index(sphere.vertex_count()))};
    const auto d = density_bound(sphere, ms, one, Interpolant(1, 1), {0.3});
    const bool sphere_ok = d.max_density <= 1.1 * d.bound && !d.violation;

    const auto two = run_membrane(Config::parse("[mesh]\nkind = icosphere\nsubdivisions = 4\ncopies = 2\n"
                                                "separation = 5\n[membrane]\na1 = 1\na2 = 1\ndelta = 0.5\n"
                                                "field = constant\nvalue = 1\nprobe_radii = 0.3\n",
                                                "two_spheres"),
                                  {});
    const bool flagged = !two.willmore_hypothesis;
    return {sphere_ok && flagged,
            fmt("sphere: max density %.4f vs bound %.4f; two spheres: W = %.4f vs threshold %.4f, hypothesis %s",
                d.max_density, d.bound, two.diffuse.willmore, two.willmore_threshold,
                flagged ? "flagged as failing" : "NOT flagged")};
}

Outcome gradient_check()
{
    const auto w = DoubleWell::quartic();
    std::mt19937_64 rng(3003);
    const std::vector<TriMesh> meshes{generate(FlatStrip{8, 8, 1.0, 1.0}), generate(Icosphere{2, 1.0})};
    const std::vector<double> epsilons{0.05, 0.1, 0.3, 1.0, 2.0};
    double worst = 0.0;
    int cases = 0;
    for (int i = 0; i < 20; ++i, ++cases) {
        const auto& mesh = meshes[std::size_t(i % 2)];
        const auto m = measures(mesh);
        const double eps = epsilons[std::size_t(i / 2) % epsilons.size()];
        const VertexField u{uniform(rng, Eigen::Index(mesh.vertex_count()), -0.3, 1.3)};
        const Eigen::VectorXd g = mm_gradient(mesh, m, u, eps, w);
        Eigen::VectorXd fd(g.size());
        for (Eigen::Index v = 0; v < g.size(); ++v) {
            VertexField up = u, dn = u;
            up.values[v] += 1e-6;
            dn.values[v] -= 1e-6;
            fd[v] = (modica_mortola(mesh, m, up, eps, w).mm_value - modica_mortola(mesh, m, dn, eps, w).mm_value) / 2e-6;
        }
        worst = std::max(worst, (g - fd).norm() / g.norm());
    }
    return {worst <= 1e-5, fmt("%d cases, worst relative error %.2e", cases, worst)};
}

Outcome strict_convergence()
{
    const auto w = DoubleWell::quartic();
    auto limit = measured(generate(Icosphere{4, 1.0}));
    const auto field = recovery_field(limit.mesh, limit.measure,
                                      axis_split(limit.mesh, limit.measure, 0.5 * limit.measure.total_area), 0.1, w);
    std::vector<MeasuredSurface> surfaces;
    std::vector<FieldSurface> pairs;
    for (int j = 1; j <= 5; ++j) {
        auto s = measured(generate(PerturbedSphere{4, 1.0, 0.2 / j, 6}));
        pairs.push_back({s, field});
        surfaces.push_back(std::move(s));
    }
    const auto strict = strictness_report(surfaces, limit);
    const auto mfp = mfp_test(pairs, FieldSurface{limit, field}, standard_test_functions());
    bool pass = strict.strictly_decreasing && mfp.series.size() == 4;
    std::string detail = fmt("area gaps %.4f ... %.4f %s", strict.gaps.front(), strict.gaps.back(),
                             strict.strictly_decreasing ? "strictly decreasing" : "NOT strictly decreasing");
    for (const auto& s : mfp.series) {
        pass = pass && s.strictly_decreasing;
        detail += fmt("; %s %s", s.name.c_str(), s.strictly_decreasing ? "decreasing" : "NOT decreasing");
    }
    return {pass, detail};
}

Outcome determinism()
{
    const fs::path dir = fs::absolute("acceptance_determinism");
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path conf = dir / "sphere_equator.conf";
    std::ofstream(conf) << "[mesh]\nkind = icosphere\nsubdivisions = 4\nradius = 1\n"
                        << "[solver]\nmass = " << fmt("%.17g", 2 * pi) << "\nseed = 1\n"
                        << "[sweep]\neps = 0.2, 0.1, 0.05\n";
    for (const char* run : {"run_a", "run_b"}) {
        const std::string cmd = std::string("\"") + PHASESEP_CLI + "\" sweep --config \"" + conf.string() +
                                "\" --out \"" + (dir / run).string() + "\" --deterministic > \"" +
                                (dir / (std::string(run) + ".log")).string() + "\" 2>&1";
        if (std::system(cmd.c_str()) != 0)
            return {false, std::string("CLI run failed: ") + run};
    }
    int compared = 0, differing = 0;
    for (const auto& entry : fs::directory_iterator(dir / "run_a")) {
        const auto other = dir / "run_b" / entry.path().filename();
        ++compared;
        differing += !fs::exists(other) || slurp(entry.path()) != slurp(other);
    }
    return {compared > 0 && differing == 0, fmt("%d report files compared, %d differ", compared, differing)};
}

} // namespace

int main()
{
    set_warning_handler([](std::string_view) {});

    run(1, "exact mass identity", 5, mass_identity);
    run(2, "discrete Modica-Mortola trick", 10, [] {
        const auto& s = random_set();
        return Outcome{s.trick_violations == 0, fmt("%d fields x 3 epsilons, %d violations, smallest relative margin %.3e",
                                                    s.fields, s.trick_violations, s.trick_margin)};
    });
    run(3, "graph-mass bound", 0, [] {
        const auto& s = random_set();
        return Outcome{s.mass_violations == 0, fmt("%d fields x 3 epsilons, %d violations, smallest relative margin %.3e",
                                                   s.fields, s.mass_violations, s.mass_margin)};
    });
    run(4, "1D interface constant", 120, strip_interface);
    run(5, "sphere equator continuation", 600, sphere_equator);
    run(6, "Willmore benchmarks", 0, willmore_benchmarks);
    run(7, "Li-Yau diagnostic", 0, li_yau);
    run(8, "gradient correctness", 0, gradient_check);
    run(9, "strict-convergence diagnostics", 0, strict_convergence);
    run(10, "determinism", 0, determinism);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
