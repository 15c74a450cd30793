#include "phasesep/currents.hpp"
#include "phasesep/energy.hpp"
#include "phasesep/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <string>

using namespace phasesep;

namespace {

constexpr double pi = std::numbers::pi;

VertexField constant(const TriMesh& mesh, double c)
{
    return VertexField{Eigen::VectorXd::Constant(Eigen::Index(mesh.vertex_count()), c)};
}

FaceField hemisphere_split(const TriMesh& mesh)
{
    FaceField f{Eigen::VectorXd(Eigen::Index(mesh.triangle_count()))};
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(int(t));
        f.values[Eigen::Index(t)] = (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2])).z() > 0 ? 1.0 : 0.0;
    }
    return f;
}

struct QuietWarnings {
    std::vector<std::string> seen;
    QuietWarnings()
    {
        set_warning_handler([this](std::string_view m) { seen.emplace_back(m); });
    }
    ~QuietWarnings() { set_warning_handler({}); }
};

} // namespace

TEST_CASE("modica_mortola examples")
{
    QuietWarnings quiet;
    const auto w = DoubleWell::quartic();
    const auto strip = generate(FlatStrip{1, 1, 1.0, 1.0});
    const auto m = measures(strip);
    CHECK(modica_mortola(strip, m, constant(strip, 0.0), 1.0, w).total == 0.0);
    const auto half = modica_mortola(strip, m, constant(strip, 0.5), 1.0, w);
    CHECK(half.mm_value == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(half.dirichlet == 0.0);

    // logistic profile across x = 1/2
    const double eps = 0.05;
    const auto fine = generate(FlatStrip{128, 128, 1.0, 1.0});
    VertexField u{Eigen::VectorXd(Eigen::Index(fine.vertex_count()))};
    for (std::size_t v = 0; v < fine.vertex_count(); ++v)
        u.values[Eigen::Index(v)] = 1.0 / (1.0 + std::exp(-(fine.vertex(int(v)).x() - 0.5) / eps));
    const auto e = modica_mortola(fine, measures(fine), u, eps, w);
    CHECK(std::abs(e.mm_value * 3.0 - 1.0) < 0.03);
    CHECK(e.trick_lhs <= e.mm_value);
    // equipartition along the optimal profile
    CHECK(e.dirichlet == doctest::Approx(e.potential).epsilon(0.05));

    CHECK_THROWS_AS(modica_mortola(strip, m, constant(strip, 0.5), 0.0, w), Error);
    CHECK_THROWS_AS(modica_mortola(strip, m, constant(strip, 0.5), -1.0, w), Error);
}

TEST_CASE("resolution guard warns without failing")
{
    QuietWarnings quiet;
    const auto w = DoubleWell::quartic();
    const auto strip = generate(FlatStrip{4, 4, 1.0, 1.0});
    const auto m = measures(strip);
    modica_mortola(strip, m, constant(strip, 0.5), 1.0, w);
    CHECK(quiet.seen.empty());
    modica_mortola(strip, m, constant(strip, 0.5), 0.1, w);
    CHECK(quiet.seen.size() == 1);
}

TEST_CASE("interpolant")
{
    const Interpolant ip(2.0, 1.0);
    CHECK(interpolant_eval(ip, 0.0) == 1.0);
    CHECK(interpolant_eval(ip, 1.0) == 2.0);
    CHECK(interpolant_eval(ip, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(ip(-3.0) == 1.0);
    CHECK(ip(4.0) == 2.0);
    for (double r = -0.5; r <= 1.5; r += 0.01) {
        CHECK(ip(r) >= 1.0);
        CHECK(ip(r) <= 2.0);
    }
    CHECK_THROWS_AS(Interpolant(0.0, 1.0), Error);
    CHECK_THROWS_AS(Interpolant(1.0, -2.0), Error);
}

TEST_CASE("willmore")
{
    const auto s41 = generate(Icosphere{4, 1.0});
    const auto m41 = measures(s41);
    std::mt19937_64 rng(2);
    const VertexField any{oracle::random_vector(rng, Eigen::Index(s41.vertex_count()), -0.2, 1.2)};
    CHECK(std::abs(willmore(s41, m41, any, Interpolant(1, 1)) / (4 * pi) - 1) < 0.03);
    CHECK(std::abs(willmore(s41, m41, constant(s41, 1.0), Interpolant(2, 1)) / (8 * pi) - 1) < 0.03);
    CHECK(willmore(s41, m41, constant(s41, 0.0), Interpolant(2, 1)) ==
          doctest::Approx(willmore(s41, m41, constant(s41, 0.0), Interpolant(1, 1))));

    const auto s42 = generate(Icosphere{4, 2.0});
    CHECK(std::abs(willmore(s42, measures(s42), constant(s42, 0.0), Interpolant(1, 1)) / (4 * pi) - 1) < 0.03);

    const double base = willmore(s41, m41, any, Interpolant(1, 2));
    for (double lambda : {0.5, 2.0}) {
        const auto s = scaled(s41, lambda);
        CHECK(std::abs(willmore(s, measures(s), any, Interpolant(1, 2)) / base - 1) < 0.02);
    }

    const auto strip = generate(FlatStrip{2, 2, 1.0, 1.0});
    try {
        willmore(strip, measures(strip), constant(strip, 0.5), Interpolant(1, 1));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedGeometry);
    }
}

TEST_CASE("total_energy")
{
    QuietWarnings quiet;
    const auto w = DoubleWell::quartic();
    const auto sphere = generate(Icosphere{4, 1.0});
    const auto ms = measures(sphere);
    const auto e = total_energy(sphere, ms, constant(sphere, 1.0), 0.1, w, Interpolant(1, 1));
    CHECK(e.mm_value == 0.0);
    CHECK(e.total == e.willmore);
    CHECK(std::abs(e.total / (4 * pi) - 1) < 0.03);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const VertexField u{oracle::random_vector(rng, Eigen::Index(sphere.vertex_count()), 0, 1)};
        const auto r = total_energy(sphere, ms, u, 0.3, w, Interpolant(1.5, 0.5));
        CHECK(std::abs(r.total - (r.mm_value + r.willmore)) <= 1e-12 * r.total);
        CHECK(r.dirichlet >= 0);
        CHECK(r.potential >= 0);
        CHECK(r.field_l1 >= 0);
    }

    const auto strip = generate(FlatStrip{4, 4, 1.0, 1.0});
    const auto mst = measures(strip);
    CHECK_THROWS_AS(total_energy(strip, mst, constant(strip, 0.5), 1.0, w, Interpolant(1, 1)), Error);
    const auto mm_only =
        total_energy(strip, mst, constant(strip, 0.5), 1.0, w, Interpolant(1, 1), EnergyMode::ModicaMortolaOnly);
    CHECK(mm_only.willmore == 0.0);
    CHECK(mm_only.total == mm_only.mm_value);
    CHECK(mm_only.mm_value == doctest::Approx(0.0625));
}

TEST_CASE("sharp_energy")
{
    const auto w = DoubleWell::quartic();
    const auto sphere = generate(Icosphere{4, 1.0});
    const auto ms = measures(sphere);
    const auto nt = Eigen::Index(sphere.triangle_count());

    const auto one = sharp_energy(sphere, ms, FaceField{Eigen::VectorXd::Ones(nt)}, w, Interpolant(1, 1));
    CHECK(one.line == 0.0);
    CHECK(std::abs(one.total / (4 * pi) - 1) < 0.03);
    CHECK(sharp_energy(sphere, ms, FaceField{Eigen::VectorXd::Zero(nt)}, w, Interpolant(2, 1)).line == 0.0);

    const auto split = hemisphere_split(sphere);
    const auto s = sharp_energy(sphere, ms, split, w, Interpolant(1, 1));
    const double zigzag = jump_curve_p0(sphere, split).length;
    CHECK(zigzag >= 2 * pi);
    CHECK(s.line == doctest::Approx(zigzag / 3.0).epsilon(1e-14));
    CHECK(std::abs(s.bending / (4 * pi) - 1) < 0.03);
    CHECK(s.total == doctest::Approx(s.bending + s.line));
    // line term is 2k times the unit-height wall mass
    CHECK(s.line == doctest::Approx(2 * w.tension_constant() * graph_mass_p0(sphere, ms, split).vertical_mass)
                        .epsilon(1e-14));

    // phase-dependent bending: a1 on the upper half, a2 on the lower
    const auto weighted = sharp_energy(sphere, ms, split, w, Interpolant(3, 1));
    CHECK(std::abs(weighted.bending / (8 * pi) - 1) < 0.03);

    FaceField bad = split;
    bad.values[0] = 0.5;
    CHECK_THROWS_AS(sharp_energy(sphere, ms, bad, w, Interpolant(1, 1)), Error);
    const auto strip = generate(FlatStrip{2, 2, 1.0, 1.0});
    CHECK_THROWS_AS(sharp_energy(strip, measures(strip), FaceField{Eigen::VectorXd::Zero(8)}, w, Interpolant(1, 1)),
                    Error);
}

TEST_CASE("triangle_ball_area against subdivision oracle")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 a(d(rng), d(rng), d(rng)), b(d(rng), d(rng), d(rng)), c(d(rng), d(rng), d(rng));
        const TriMesh tri({a, b, c}, {{0, 1, 2}});
        const Vec3 center(0.5 * d(rng), 0.5 * d(rng), 0.5 * d(rng));
        const double r = 0.2 + 0.8 * std::abs(d(rng));
        const double exact = triangle_ball_area(tri, 0, center, r);
        const double approx = oracle::subdivided_ball_area(a, b, c, center, r, 9);
        const double area = 0.5 * (b - a).cross(c - a).norm();
        CHECK(std::abs(exact - approx) <= 2e-3 * area + 1e-12);
        CHECK(exact >= 0.0);
        CHECK(exact <= area * (1 + 1e-12));
    }
}

TEST_CASE("density_bound")
{
    const auto sphere = generate(Icosphere{4, 1.0});
    const auto ms = measures(sphere);
    const auto one = constant(sphere, 1.0);
    const auto r = density_bound(sphere, ms, one, Interpolant(1, 1), {0.3});
    CHECK(r.max_density == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(r.bound - 1.0) < 0.03);
    CHECK_FALSE(r.violation);

    // exact area summation at one sampled vertex agrees with the oracle
    const int v = r.sampled_vertices.at(0);
    double oracle_area = 0.0;
    for (std::size_t t = 0; t < sphere.triangle_count(); ++t) {
        const auto& tri = sphere.triangle(int(t));
        oracle_area += oracle::subdivided_ball_area(sphere.vertex(tri[0]), sphere.vertex(tri[1]), sphere.vertex(tri[2]),
                                                    sphere.vertex(v), 0.3, 6);
    }
    double exact_area = 0.0;
    for (std::size_t t = 0; t < sphere.triangle_count(); ++t)
        exact_area += triangle_ball_area(sphere, int(t), sphere.vertex(v), 0.3);
    CHECK(exact_area == doctest::Approx(oracle_area).epsilon(2e-3));

    const auto pair = disjoint_union(sphere, translated(sphere, Vec3(5, 0, 0)));
    const auto mp = measures(pair);
    const auto two = density_bound(pair, mp, constant(pair, 1.0), Interpolant(1, 1), {0.3});
    CHECK(std::abs(two.bound - 2.0) < 0.06);
    CHECK(std::abs(two.max_density - 1.0) < 0.05);
    CHECK_FALSE(two.violation);

    const auto asym = density_bound(sphere, ms, one, Interpolant(2, 1), {0.3});
    CHECK(asym.bound == doctest::Approx(asym.willmore / (4 * pi)));
    CHECK_THROWS_AS(density_bound(generate(FlatStrip{2, 2, 1, 1}), measures(generate(FlatStrip{2, 2, 1, 1})),
                                  VertexField{Eigen::VectorXd::Zero(9)}, Interpolant(1, 1), {0.3}),
                    Error);
}

TEST_CASE("discrete trick and graph-mass chain")
{
    QuietWarnings quiet;
    const auto w = DoubleWell::quartic();
    std::mt19937_64 rng(41);
    for (const MeshSpec& spec : std::vector<MeshSpec>{Icosphere{2, 1.0}, FlatStrip{8, 8, 1.0, 1.0}}) {
        const auto mesh = generate(spec);
        const auto m = measures(mesh);
        for (double eps : {0.01, 0.1, 1.0}) {
            for (int trial = 0; trial < 30; ++trial) {
                const VertexField u{oracle::random_vector(rng, Eigen::Index(mesh.vertex_count()), -0.5, 1.5)};
                const auto e = modica_mortola(mesh, m, u, eps, w);
                CHECK(e.trick_lhs <= e.mm_value);
                VertexField v{u.values.unaryExpr([&](double t) { return w.first_integral(t); })};
                CHECK(graph_mass_p1(mesh, m, v).total_mass <= m.total_area + e.mm_value / 2);
            }
        }
    }
}

TEST_CASE("mm_value vanishes exactly on well-valued constant fields")
{
    QuietWarnings quiet;
    const auto w = DoubleWell::quartic();
    const auto sphere = generate(Icosphere{2, 1.0});
    const auto m = measures(sphere);
    CHECK(modica_mortola(sphere, m, constant(sphere, 1.0), 0.1, w).mm_value == 0.0);
    CHECK(modica_mortola(sphere, m, constant(sphere, 0.0), 0.1, w).mm_value == 0.0);
    CHECK(modica_mortola(sphere, m, constant(sphere, 1e-3), 0.1, w).mm_value > 0.0);
    // wells everywhere but with jumps: potential vanishes, Dirichlet does not
    auto mixed = constant(sphere, 0.0);
    mixed.values[0] = 1.0;
    const auto e = modica_mortola(sphere, m, mixed, 0.1, w);
    CHECK(e.potential == 0.0);
    CHECK(e.mm_value > 0.0);
}
