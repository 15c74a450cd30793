#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace phasesep {

enum class PotentialKind { Quartic, UserTabulated };

/// Growth parameters of the condition c|t|^p <= W(t) <= |t|^p / c for |t| >= T.
struct GrowthCondition {
    double exponent = 4.0;   // p >= 2
    double constant = 0.125; // c > 0
    double threshold = 2.0;  // T
};

/// Double-well potential with wells at 0 and 1.
///
/// The quartic W(t) = t^2 (1-t)^2 has closed forms for everything. Tabulated
/// potentials are piecewise-linear interpolants of (t, W) samples; their
/// first integral is evaluated by adaptive quadrature and the heteroclinic
/// profile by integrating sigma' = sqrt(W(sigma)).
class DoubleWell {
public:
    static DoubleWell quartic();
    static DoubleWell tabulated(std::vector<double> t, std::vector<double> w,
                                GrowthCondition growth = {});
    /// Two whitespace-separated columns (t, W) per line, strictly increasing t.
    /// Blank lines and lines starting with '#' are skipped.
    static DoubleWell load(const std::filesystem::path& path, GrowthCondition growth = {});

    PotentialKind kind() const noexcept { return kind_; }
    const GrowthCondition& growth() const noexcept { return growth_; }

    /// W(t) for order 0, W'(t) for order 1.
    double evaluate(double t, int order = 0) const;
    double value(double t) const { return evaluate(t, 0); }
    double derivative(double t) const { return evaluate(t, 1); }

    // Gradient-based minimization needs a genuine derivative; tabulated
    // potentials only provide an interpolant slope.
    bool supports_gradient() const noexcept { return kind_ == PotentialKind::Quartic; }

    /// theta(r) = integral from 0 to r of sqrt(W).
    double first_integral(double r) const;

    /// k = theta(1).
    double tension_constant() const;

    /// One-dimensional optimal transition profile sigma with sigma(0) = 1/2,
    /// sigma' = sqrt(W(sigma)), clamped to [0, 1].
    double optimal_profile(double t) const;

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> samples() const noexcept { return samples_; }

private:
    DoubleWell() = default;

    double tabulated_value(double t) const;
    double tabulated_slope(double t) const;
    void build_profile();

    PotentialKind kind_ = PotentialKind::Quartic;
    GrowthCondition growth_;
    std::vector<double> knots_;
    std::vector<double> samples_;
    std::vector<double> knot_integrals_; // theta at each knot
    double tension_ = 1.0 / 6.0;
    // sampled profile on a uniform grid [-profile_half_width_, profile_half_width_]
    std::vector<double> profile_;
    double profile_half_width_ = 0.0;
    double profile_step_ = 0.0;
};

/// Checks both growth bounds on the given sample points with |t| >= T.
bool satisfies_growth(const DoubleWell& w, std::span<const double> samples);

/// Adaptive quadrature of sqrt(W) over [a, b]; absolute tolerance 1e-10.
double integrate_sqrt_potential(const DoubleWell& w, double a, double b);

} // namespace phasesep
