#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mlap {

enum class DomainKind { Interval01, RadialBall };

/// Computational domain: the unit interval (0,1) or the unit ball of
/// dimension `dimension` >= 2 reduced to the radial coordinate r in [0,1).
struct Domain {
    DomainKind kind = DomainKind::Interval01;
    int dimension = 1;

    static Domain interval() { return {DomainKind::Interval01, 1}; }
    static Domain ball(int dimension) { return {DomainKind::RadialBall, dimension}; }

    bool is_radial() const noexcept { return kind == DomainKind::RadialBall; }
    double diameter() const noexcept { return is_radial() ? 2.0 : 1.0; }
    /// Distance to the boundary at coordinate x (x is r for the ball).
    double distance(double x) const noexcept;

    friend bool operator==(const Domain&, const Domain&) = default;
};

std::string to_string(const Domain& domain);

/// Parameters of -Delta_m u = K(x) u^{-p}, u = 0 on the boundary, with
/// K(x) * delta(x)^q confined to [k_low, k_high].
///
/// The K profile is delta^{-q} times a weight that equals k_low when
/// k_low == k_high and otherwise oscillates smoothly between the two bounds.
struct ProblemSpec {
    double m = 2.0;
    double p = 0.0;
    double q = 0.0;
    double k_low = 1.0;
    double k_high = 1.0;
    Domain domain = Domain::interval();

    /// K(x) evaluated from the coordinate and its boundary distance.
    double k_value(double x, double delta) const;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Returns `spec` unchanged when every invariant holds.
/// Throws AdmissibilityViolation or NonPositiveK otherwise.
ProblemSpec validate_spec(const ProblemSpec& spec);

enum class Regime { Subcritical, Critical, Supercritical };

std::string_view to_string(Regime regime);

/// Closed-form predictions for a validated spec.
struct RegimeReport {
    Regime regime = Regime::Subcritical;
    double boundary_exponent = 1.0;        // gamma in u ~ delta^gamma
    std::optional<double> log_exponent;    // s in u ~ delta log^s(1/delta), Critical only
    double tau_sup = 0.0;                  // +inf unless Supercritical
    double theta_exponent = 0.0;           // a in K u^{-p} ~ delta^{-a}; log power when Critical
    // Holder regularity is only known to exist; no exponent is computed.
    bool c1_alpha_regular = false;
    bool c0_beta_regular = false;
};

/// Tolerance applied to |p + q - 1| when deciding the critical case.
inline constexpr double kCriticalTolerance = 1e-12;

RegimeReport classify_regime(const ProblemSpec& spec);

}  // namespace mlap
