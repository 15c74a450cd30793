#include "phasesep/potential.hpp"

#include "phasesep/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace phasesep {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kProfileHalfWidth = 60.0;
constexpr double kProfileStep = 1e-3;

// Antiderivative of t(1-t).
double quartic_primitive(double t) { return t * t / 2.0 - t * t * t / 3.0; }

double quartic_first_integral(double r)
{
    if (r < 0.0)
        return -quartic_primitive(r);
    if (r <= 1.0)
        return quartic_primitive(r);
    return 1.0 / 3.0 - quartic_primitive(r);
}

void require_finite(double t, const char* what)
{
    if (!std::isfinite(t))
        fail(ErrorKind::Input, std::string(what) + " must be finite");
}

} // namespace

DoubleWell DoubleWell::quartic()
{
    DoubleWell w;
    w.kind_ = PotentialKind::Quartic;
    w.growth_ = GrowthCondition{4.0, 0.125, 2.0};
    w.tension_ = 1.0 / 6.0;
    return w;
}

DoubleWell DoubleWell::tabulated(std::vector<double> t, std::vector<double> values,
                                 GrowthCondition growth)
{
    if (t.size() != values.size())
        fail(ErrorKind::Input, "tabulated potential: column lengths differ");
    if (t.size() < 3)
        fail(ErrorKind::Input, "tabulated potential: need at least three samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
        require_finite(t[i], "tabulated potential abscissa");
        require_finite(values[i], "tabulated potential value");
        if (i > 0 && !(t[i] > t[i - 1]))
            fail(ErrorKind::Input, "tabulated potential: abscissae must be strictly increasing");
        if (values[i] < 0.0)
            fail(ErrorKind::Input, "tabulated potential: negative value at t=" + std::to_string(t[i]));
    }
    if (!(t.front() < 0.0 && t.back() > 1.0))
        fail(ErrorKind::Input, "tabulated potential: samples must extend beyond [0, 1]");
    for (std::size_t i = 0; i < t.size(); ++i) {
        const bool well = t[i] == 0.0 || t[i] == 1.0;
        if (well && values[i] != 0.0)
            fail(ErrorKind::Input, "tabulated potential: W must vanish at the wells");
        if (!well && values[i] <= 0.0)
            fail(ErrorKind::Input, "tabulated potential: W must be positive away from the wells");
    }
    if (std::find(t.begin(), t.end(), 0.0) == t.end() || std::find(t.begin(), t.end(), 1.0) == t.end())
        fail(ErrorKind::Input, "tabulated potential: t = 0 and t = 1 must be sample points");
    const std::size_t n = t.size();
    if (!((values[1] - values[0]) < 0.0) || !((values[n - 1] - values[n - 2]) > 0.0))
        fail(ErrorKind::Input, "tabulated potential: linear extrapolation must grow outward");

    DoubleWell w;
    w.kind_ = PotentialKind::UserTabulated;
    w.growth_ = growth;
    w.knots_ = std::move(t);
    w.samples_ = std::move(values);

    const auto zero = std::find(w.knots_.begin(), w.knots_.end(), 0.0) - w.knots_.begin();
    w.knot_integrals_.assign(n, 0.0);
    for (auto i = zero + 1; i < static_cast<std::ptrdiff_t>(n); ++i)
        w.knot_integrals_[i] = w.knot_integrals_[i - 1] + integrate_sqrt_potential(w, w.knots_[i - 1], w.knots_[i]);
    for (auto i = zero - 1; i >= 0; --i)
        w.knot_integrals_[i] = w.knot_integrals_[i + 1] - integrate_sqrt_potential(w, w.knots_[i], w.knots_[i + 1]);
    w.tension_ = w.first_integral(1.0);
    w.build_profile();
    return w;
}

DoubleWell DoubleWell::load(const std::filesystem::path& path, GrowthCondition growth)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::NotFound, "cannot open potential table " + path.string());
    std::vector<double> t, w;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        double a = 0.0, b = 0.0;
        std::string extra;
        if (!(fields >> a >> b) || (fields >> extra))
            fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": expected two numbers");
        if (!t.empty() && !(a > t.back()))
            fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": t is not strictly increasing");
        t.push_back(a);
        w.push_back(b);
    }
    return tabulated(std::move(t), std::move(w), growth);
}

double DoubleWell::tabulated_value(double t) const
{
    const std::size_t n = knots_.size();
    std::size_t seg;
    if (t <= knots_.front())
        seg = 0;
    else if (t >= knots_.back())
        seg = n - 2;
    else
        seg = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
    const double t0 = knots_[seg], t1 = knots_[seg + 1];
    const double s = (t - t0) / (t1 - t0);
    return std::max(0.0, samples_[seg] + s * (samples_[seg + 1] - samples_[seg]));
}

double DoubleWell::tabulated_slope(double t) const
{
    const std::size_t n = knots_.size();
    std::size_t seg;
    if (t <= knots_.front())
        seg = 0;
    else if (t >= knots_.back())
        seg = n - 2;
    else
        seg = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
    return (samples_[seg + 1] - samples_[seg]) / (knots_[seg + 1] - knots_[seg]);
}

double DoubleWell::evaluate(double t, int order) const
{
    require_finite(t, "potential argument");
    if (order != 0 && order != 1)
        fail(ErrorKind::Input, "potential derivative order must be 0 or 1");
    if (kind_ == PotentialKind::Quartic) {
        const double s = t * (1.0 - t);
        return order == 0 ? s * s : 2.0 * s * (1.0 - 2.0 * t);
    }
    return order == 0 ? tabulated_value(t) : tabulated_slope(t);
}

double DoubleWell::first_integral(double r) const
{
    require_finite(r, "first integral argument");
    if (kind_ == PotentialKind::Quartic)
        return quartic_first_integral(r);

    if (r <= knots_.front())
        return knot_integrals_.front() - integrate_sqrt_potential(*this, r, knots_.front());
    if (r >= knots_.back())
        return knot_integrals_.back() + integrate_sqrt_potential(*this, knots_.back(), r);
    const std::size_t seg = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), r) - knots_.begin()) - 1;
    return knot_integrals_[seg] + integrate_sqrt_potential(*this, knots_[seg], r);
}

double DoubleWell::tension_constant() const { return tension_; }

void DoubleWell::build_profile()
{
    profile_half_width_ = kProfileHalfWidth;
    profile_step_ = kProfileStep;
    const auto half = static_cast<std::size_t>(std::llround(kProfileHalfWidth / kProfileStep));
    profile_.assign(2 * half + 1, 0.5);

    auto rate = [this](double s) { return std::sqrt(value(s)); };
    auto integrate = [&](double direction) {
        double s = 0.5;
        for (std::size_t i = 1; i <= half; ++i) {
            const double h = direction * kProfileStep;
            const double k1 = rate(s);
            const double k2 = rate(std::clamp(s + 0.5 * h * k1, 0.0, 1.0));
            const double k3 = rate(std::clamp(s + 0.5 * h * k2, 0.0, 1.0));
            const double k4 = rate(std::clamp(s + h * k3, 0.0, 1.0));
            s = std::clamp(s + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, 0.0, 1.0);
            profile_[direction > 0 ? half + i : half - i] = s;
        }
    };
    integrate(1.0);
    integrate(-1.0);
}

double DoubleWell::optimal_profile(double t) const
{
    require_finite(t, "profile argument");
    if (kind_ == PotentialKind::Quartic)
        return 1.0 / (1.0 + std::exp(-t));
    if (t <= -profile_half_width_)
        return profile_.front();
    if (t >= profile_half_width_)
        return profile_.back();
    const double x = (t + profile_half_width_) / profile_step_;
    const auto i = std::min(static_cast<std::size_t>(x), profile_.size() - 2);
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * profile_[i] + f * profile_[i + 1];
}

bool satisfies_growth(const DoubleWell& w, std::span<const double> samples)
{
    const auto& g = w.growth();
    for (double t : samples) {
        if (std::abs(t) < g.threshold)
            continue;
        const double power = std::pow(std::abs(t), g.exponent);
        const double value = w.value(t);
        if (value < g.constant * power || value > power / g.constant)
            return false;
    }
    return true;
}

double integrate_sqrt_potential(const DoubleWell& w, double a, double b)
{
    require_finite(a, "integration bound");
    require_finite(b, "integration bound");
    if (a == b)
        return 0.0;
    if (a > b)
        return -integrate_sqrt_potential(w, b, a);

    // Split at kinks of sqrt(W): wells and, for tables, the knots.
    std::vector<double> breaks{a, b, 0.0, 1.0};
    for (double t : w.knots())
        breaks.push_back(t);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    boost::math::quadrature::tanh_sinh<double> integrator;
    auto integrand = [&w](double t) { return std::sqrt(w.value(t)); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (!(hi > lo))
            continue;
        double error = 0.0;
        double l1 = 0.0;
        const double piece = integrator.integrate(integrand, lo, hi, 1e-12, &error, &l1);
        if (!std::isfinite(piece) || error > kQuadratureTolerance)
            fail(ErrorKind::Numeric, "quadrature of sqrt(W) did not converge on [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
        total += piece;
    }
    return total;
}

} // namespace phasesep
