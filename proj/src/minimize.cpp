#include "phasesep/minimize.hpp"

#include "energy_internal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <string>

namespace phasesep {

namespace {

constexpr double kPrecisionFloor = 1e-10;
constexpr int kMaxBacktracks = 60;
constexpr double kArmijo = 1e-4;

void check_vertex_field(const SurfaceMeasure& measure, const VertexField& field)
{
    if (field.values.size() != measure.vertex_masses.size())
        fail(ErrorKind::Input, "P1 field size " + std::to_string(field.values.size()) +
                                   " does not match vertex count " + std::to_string(measure.vertex_masses.size()));
}

double lumped_mass(const Eigen::VectorXd& u, const SurfaceMeasure& measure)
{
    return measure.vertex_masses.dot(u);
}

double weighted_norm_sq(const Eigen::VectorXd& x, const SurfaceMeasure& measure)
{
    return measure.vertex_masses.dot(x.cwiseProduct(x));
}

// Riesz representative of the gradient in the lumped L2 metric, with its mean removed
// so that steps along it keep the lumped integral fixed.
Eigen::VectorXd projected_direction(const Eigen::VectorXd& gradient, const SurfaceMeasure& measure)
{
    Eigen::VectorXd p = gradient.cwiseQuotient(measure.vertex_masses);
    p.array() -= gradient.sum() / measure.total_area;
    return p;
}

std::string csv_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void MinimizeOptions::validate() const
{
    if (max_iterations < 1)
        fail(ErrorKind::Input, "max_iterations must be at least 1");
    if (!(grad_tolerance > 0.0))
        fail(ErrorKind::Input, "grad_tolerance must be positive");
    if (!(step_init > 0.0))
        fail(ErrorKind::Input, "step_init must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        fail(ErrorKind::Input, "backtrack_factor must lie in (0, 1)");
    if (!std::isfinite(mass_target))
        fail(ErrorKind::Input, "mass target must be finite");
}

StagnationError::StagnationError(const std::string& message, VertexField last, int iterations)
    : Error(ErrorKind::Stagnation, message), last_(std::move(last)), iterations_(iterations)
{
}

VertexField project_mass(const VertexField& field, const SurfaceMeasure& measure, double m)
{
    check_vertex_field(measure, field);
    if (!(measure.total_area > 0.0))
        fail(ErrorKind::Input, "mass projection needs positive total area");
    VertexField out = field;
    const double shift = (m - lumped_mass(field.values, measure)) / measure.total_area;
    out.values.array() += shift;
    return out;
}

Eigen::VectorXd mm_gradient(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                            double eps, const DoubleWell& w)
{
    if (!w.supports_gradient())
        fail(ErrorKind::Capability, "the potential has no derivative suitable for gradient evaluation");
    check_vertex_field(measure, field);
    return detail::MmFunctional(mesh, measure, eps, w).gradient(field.values);
}

VertexField random_initial_field(const SurfaceMeasure& measure, double mass_target, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.45, 0.55);
    VertexField u{Eigen::VectorXd(measure.vertex_masses.size())};
    for (Eigen::Index v = 0; v < u.values.size(); ++v)
        u.values[v] = dist(rng);
    return project_mass(u, measure, mass_target);
}

MinimizeResult minimize_mm(const TriMesh& mesh, const SurfaceMeasure& measure, double eps, const DoubleWell& w,
                           const MinimizeOptions& opts, std::optional<VertexField> init)
{
    opts.validate();
    if (!w.supports_gradient())
        fail(ErrorKind::Capability, "minimization needs a differentiable potential");
    const detail::MmFunctional functional(mesh, measure, eps, w);

    VertexField u = init ? project_mass(*init, measure, opts.mass_target)
                         : random_initial_field(measure, opts.mass_target, opts.seed);
    check_vertex_field(measure, u);

    std::ofstream trace;
    if (!opts.trace_path.empty()) {
        trace.open(opts.trace_path);
        if (!trace)
            fail(ErrorKind::Io, "cannot write trace " + opts.trace_path.string());
        trace << "iteration,energy,gradient_norm,step\n";
    }

    const double step_lo = 1e-6 * opts.step_init;
    const double step_hi = 1e2 * opts.step_init;
    double energy = functional.value(u.values);
    Eigen::VectorXd direction = projected_direction(functional.gradient(u.values), measure);
    double norm_sq = weighted_norm_sq(direction, measure);
    double step = opts.step_init;

    MinimizeResult result;
    int iteration = 0;
    for (; iteration < opts.max_iterations; ++iteration) {
        result.gradient_norm = std::sqrt(norm_sq);
        if (trace)
            trace << iteration << ',' << csv_number(energy) << ',' << csv_number(result.gradient_norm) << ','
                  << csv_number(step) << '\n';
        if (result.gradient_norm <= opts.grad_tolerance) {
            result.converged = true;
            break;
        }

        double trial_step = step;
        VertexField candidate;
        double candidate_energy = 0.0;
        bool accepted = false;
        for (int k = 0; k <= kMaxBacktracks; ++k) {
            candidate = project_mass(VertexField{u.values - trial_step * direction}, measure, opts.mass_target);
            candidate_energy = functional.value(candidate.values);
            if (candidate_energy <= energy - kArmijo * trial_step * norm_sq) {
                accepted = true;
                break;
            }
            trial_step *= opts.backtrack_factor;
        }
        if (!accepted) {
            // Even the longest admissible step predicts a decrease below the
            // resolution of the energy sum: stationary up to round-off.
            if (step_hi * norm_sq <= kPrecisionFloor * std::max(1.0, std::abs(energy))) {
                result.converged = true;
                break;
            }
            throw StagnationError("line search failed after " + std::to_string(kMaxBacktracks) +
                                      " reductions at iteration " + std::to_string(iteration),
                                  u, iteration);
        }
        if (candidate_energy > energy)
            fail(ErrorKind::Numeric, "accepted step increased the energy");

        const Eigen::VectorXd next_direction = projected_direction(functional.gradient(candidate.values), measure);
        const Eigen::VectorXd s = candidate.values - u.values;
        const Eigen::VectorXd y = next_direction - direction;
        const double sy = measure.vertex_masses.dot(s.cwiseProduct(y));
        const double ss = weighted_norm_sq(s, measure);
        step = sy > 0.0 ? std::clamp(ss / sy, step_lo, step_hi) : opts.step_init;

        u = std::move(candidate);
        energy = candidate_energy;
        direction = next_direction;
        norm_sq = weighted_norm_sq(direction, measure);
    }
    if (iteration == opts.max_iterations)
        result.gradient_norm = std::sqrt(norm_sq);

    result.iterations = iteration;
    result.energy = detail::modica_mortola_quiet(mesh, measure, u, eps, w);
    result.field = std::move(u);
    return result;
}

FaceField axis_split(const TriMesh& mesh, const SurfaceMeasure& measure, double mass_target)
{
    Vec3 lo = mesh.vertex(0), hi = mesh.vertex(0);
    for (const auto& p : mesh.vertices()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec3 extent = hi - lo;
    int axis = 0;
    for (int k = 1; k < 3; ++k)
        if (extent[k] > extent[axis])
            axis = k;

    const auto nt = static_cast<int>(mesh.triangle_count());
    std::vector<double> key(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        key[static_cast<std::size_t>(t)] =
            (mesh.vertex(tri[0])[axis] + mesh.vertex(tri[1])[axis] + mesh.vertex(tri[2])[axis]) / 3.0;
    }
    std::vector<int> order(static_cast<std::size_t>(nt));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)]; });

    FaceField phase{Eigen::VectorXd::Zero(nt)};
    double filled = 0.0;
    for (int t : order) {
        if (filled >= mass_target)
            break;
        phase.values[t] = 1.0;
        filled += measure.triangle_areas[t];
    }
    return phase;
}

VertexField recovery_field(const TriMesh& mesh, const SurfaceMeasure& /*measure*/, const FaceField& phase, double eps,
                           const DoubleWell& w)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        fail(ErrorKind::Input, "epsilon must be positive");
    if (static_cast<std::size_t>(phase.values.size()) != mesh.triangle_count())
        fail(ErrorKind::Input, "P0 phase size does not match triangle count");
    for (Eigen::Index t = 0; t < phase.values.size(); ++t)
        if (phase.values[t] != 0.0 && phase.values[t] != 1.0)
            fail(ErrorKind::Input, "recovery needs a {0,1}-valued phase field");

    const auto nv = static_cast<Eigen::Index>(mesh.vertex_count());
    // Vertices off the jump set see a single phase in all incident triangles.
    std::vector<bool> inside(static_cast<std::size_t>(nv), false);
    for (Eigen::Index t = 0; t < phase.values.size(); ++t)
        if (phase.values[t] == 1.0)
            for (int v : mesh.triangle(static_cast<int>(t)))
                inside[static_cast<std::size_t>(v)] = true;

    // Multi-source Dijkstra from the endpoints of the jump edges.
    std::vector<std::vector<std::pair<int, double>>> adjacency(static_cast<std::size_t>(nv));
    std::vector<double> dist(static_cast<std::size_t>(nv), std::numeric_limits<double>::infinity());
    for (const auto& e : mesh.edges()) {
        const double len = mesh.edge_length(e);
        adjacency[static_cast<std::size_t>(e.v0)].emplace_back(e.v1, len);
        adjacency[static_cast<std::size_t>(e.v1)].emplace_back(e.v0, len);
        if (e.interior() && phase.values[e.faces[0]] != phase.values[e.faces[1]]) {
            dist[static_cast<std::size_t>(e.v0)] = 0.0;
            dist[static_cast<std::size_t>(e.v1)] = 0.0;
        }
    }

    VertexField u{Eigen::VectorXd(nv)};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (Eigen::Index v = 0; v < nv; ++v)
        if (std::isfinite(dist[static_cast<std::size_t>(v)]))
            queue.emplace(dist[static_cast<std::size_t>(v)], static_cast<int>(v));
    if (queue.empty()) {
        // no interface: each connected piece keeps its phase
        for (Eigen::Index v = 0; v < nv; ++v)
            u.values[v] = inside[static_cast<std::size_t>(v)] ? 1.0 : 0.0;
        return u;
    }
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[static_cast<std::size_t>(v)])
            continue;
        for (const auto& [n, len] : adjacency[static_cast<std::size_t>(v)]) {
            if (d + len < dist[static_cast<std::size_t>(n)]) {
                dist[static_cast<std::size_t>(n)] = d + len;
                queue.emplace(d + len, n);
            }
        }
    }
    for (Eigen::Index v = 0; v < nv; ++v) {
        const double d = dist[static_cast<std::size_t>(v)];
        const bool in = inside[static_cast<std::size_t>(v)];
        if (!std::isfinite(d))
            u.values[v] = in ? 1.0 : 0.0; // component without interface
        else
            u.values[v] = std::clamp(w.optimal_profile((in ? d : -d) / eps), 0.0, 1.0);
    }
    return u;
}

ContinuationResult epsilon_continuation(const TriMesh& mesh, const SurfaceMeasure& measure,
                                        const std::vector<double>& eps_list, const DoubleWell& w,
                                        const MinimizeOptions& opts, const ContinuationStart& start)
{
    if (eps_list.empty())
        fail(ErrorKind::Input, "epsilon list is empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            fail(ErrorKind::Input, "epsilon values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            fail(ErrorKind::Input, "epsilon list must be strictly decreasing");
    }
    opts.validate();
    const double h = mean_edge_length(mesh);
    for (double eps : eps_list)
        if (eps < 3.0 * h)
            warn("epsilon " + std::to_string(eps) + " is below three mean edge lengths (" + std::to_string(3.0 * h) +
                 "); the interface is under-resolved");

    std::optional<VertexField> init = std::visit(
        [&](const auto& s) -> std::optional<VertexField> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, AxisSplitStart>)
                return recovery_field(mesh, measure, axis_split(mesh, measure, opts.mass_target), eps_list.front(), w);
            else if constexpr (std::is_same_v<S, RandomStart>)
                return std::nullopt;
            else if constexpr (std::is_same_v<S, VertexField>)
                return s;
            else
                return recovery_field(mesh, measure, s, eps_list.front(), w);
        },
        start);

    ContinuationResult out;
    for (double eps : eps_list) {
        try {
            auto r = minimize_mm(mesh, measure, eps, w, opts, init);
            init = r.field;
            out.steps.push_back(ContinuationStep{eps, std::move(r.field), r.energy, r.iterations, r.converged});
        } catch (const Error& e) {
            out.error = e;
            break;
        }
    }
    return out;
}

} // namespace phasesep
