#include "mlap/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mlap/errors.hpp"

namespace mlap {

double Domain::distance(double x) const noexcept {
    return is_radial() ? 1.0 - x : std::min(x, 1.0 - x);
}

std::string to_string(const Domain& domain) {
    if (!domain.is_radial()) return "interval";
    return "ball" + std::to_string(domain.dimension);
}

double ProblemSpec::k_value(double x, double delta) const {
    double weight = k_low;
    if (k_high != k_low) {
        weight += (k_high - k_low) * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * x));
    }
    return q == 0.0 ? weight : weight * std::pow(delta, -q);
}

ProblemSpec validate_spec(const ProblemSpec& spec) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    if (!std::isfinite(spec.m) || !(spec.m > 1.0)) {
        throw AdmissibilityViolation("m > 1", "m = " + fmt(spec.m));
    }
    if (!std::isfinite(spec.p) || spec.p < 0.0) {
        throw AdmissibilityViolation("p >= 0", "p = " + fmt(spec.p));
    }
    if (!std::isfinite(spec.q) || spec.q < 0.0) {
        throw AdmissibilityViolation("q >= 0", "q = " + fmt(spec.q));
    }
    const double bound = 2.0 - (1.0 - spec.p) / spec.m;
    if (!(spec.p + spec.q < bound)) {
        throw AdmissibilityViolation("p + q < 2 - (1 - p)/m",
                                     "p + q = " + fmt(spec.p + spec.q) + " but bound is " +
                                         fmt(bound));
    }
    if (!(spec.k_low > 0.0) || !std::isfinite(spec.k_low)) {
        throw NonPositiveK("k_low must be positive, got " + fmt(spec.k_low));
    }
    if (!(spec.k_high >= spec.k_low) || !std::isfinite(spec.k_high)) {
        throw NonPositiveK("k_high must satisfy k_high >= k_low, got " + fmt(spec.k_high));
    }
    if (spec.domain.is_radial() && spec.domain.dimension < 2) {
        throw AdmissibilityViolation("N >= 2", "radial dimension " +
                                                   std::to_string(spec.domain.dimension));
    }
    return spec;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Subcritical: return "Subcritical";
        case Regime::Critical: return "Critical";
        case Regime::Supercritical: return "Supercritical";
    }
    return "?";
}

RegimeReport classify_regime(const ProblemSpec& raw) {
    const ProblemSpec spec = validate_spec(raw);
    const double m = spec.m;
    const double p = spec.p;
    const double q = spec.q;
    const double excess = p + q - 1.0;

    RegimeReport report;
    if (std::abs(excess) <= kCriticalTolerance) {
        report.regime = Regime::Critical;
        report.boundary_exponent = 1.0;
        report.log_exponent = 1.0 / (m + p - 1.0);
        report.tau_sup = std::numeric_limits<double>::infinity();
        report.theta_exponent = p / (m + p - 1.0);
        report.c0_beta_regular = true;
    } else if (excess < 0.0) {
        report.regime = Regime::Subcritical;
        report.boundary_exponent = 1.0;
        report.tau_sup = std::numeric_limits<double>::infinity();
        report.theta_exponent = p + q;
        report.c1_alpha_regular = true;
        report.c0_beta_regular = true;
    } else {
        report.regime = Regime::Supercritical;
        report.boundary_exponent = (m - q) / (m + p - 1.0);
        report.tau_sup = (m + p - 1.0) / excess;
        report.theta_exponent = (m * p + (m - 1.0) * q) / (m + p - 1.0);
        report.c0_beta_regular = true;
    }
    return report;
}

}  // namespace mlap
