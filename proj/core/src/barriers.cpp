#include "mlap/barriers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "mlap/mlaplacian.hpp"

namespace mlap {

std::string_view to_string(BarrierSide side) { return side == BarrierSide::Sub ? "Sub" : "Super"; }

namespace {

std::string shortest(double value) {
    char buffer[32];
    const auto end = std::to_chars(buffer, buffer + sizeof buffer, value).ptr;
    return std::string(buffer, end);
}

}  // namespace

std::string describe(const BarrierFamily& family) {
    if (const auto* power = std::get_if<PowerOfEigen>(&family)) return "phi^" + shortest(power->gamma);
    if (const auto* log_power = std::get_if<LogPowerOfEigen>(&family)) {
        return "phi*log^" + shortest(log_power->s) + "(" + shortest(log_power->a) + "/phi)";
    }
    const auto& corrected = std::get<CorrectedEigen>(family);
    return "phi-" + shortest(corrected.kappa) + "*phi^" + shortest(1.0 + corrected.nu);
}

GridFunction barrier_profile(const BarrierFamily& family, const GridFunction& phi) {
    const Grid1D& g = *phi.grid;
    GridFunction out(phi.grid);
    double top = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) top = std::max(top, phi[i]);

    if (const auto* log_power = std::get_if<LogPowerOfEigen>(&family)) {
        if (!(log_power->a > top)) {
            std::ostringstream os;
            os << "log barrier needs A > max phi, got A = " << log_power->a << ", max phi = " << top;
            throw DomainError(os.str());
        }
    }
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        const double v = phi[i];
        if (!(v > 0.0)) throw DomainError("barrier base must be positive at free nodes");
        if (const auto* power = std::get_if<PowerOfEigen>(&family)) {
            out[i] = std::pow(v, power->gamma);
        } else if (const auto* log_power = std::get_if<LogPowerOfEigen>(&family)) {
            out[i] = v * std::pow(std::log(log_power->a / v), log_power->s);
        } else {
            const auto& corrected = std::get<CorrectedEigen>(family);
            out[i] = v - corrected.kappa * std::pow(v, 1.0 + corrected.nu);
        }
    }
    return out;
}

GridFunction build_barrier(const BarrierSpec& spec, const GridPtr& grid) {
    GridFunction base = spec.base.eigenfunction;
    if (!base.grid) throw GridMismatch("barrier base eigenfunction has no grid");
    require_same_grid(base, GridFunction(grid));
    if (!(spec.c > 0.0)) throw DomainError("barrier scale c must be positive");
    GridFunction out = barrier_profile(spec.family, base);
    const double factor = spec.side == BarrierSide::Sub ? 1.0 / spec.c : spec.c;
    for (double& v : out.values) v *= factor;
    return out;
}

namespace {

const GridFunction& rhs_grid_function(const BarrierRhs& rhs) {
    if (const auto* fixed = std::get_if<FixedRhs>(&rhs)) return fixed->theta;
    return std::get<SingularRhs>(rhs).k;
}

}  // namespace

BarrierCertificate check_barrier(const GridFunction& candidate, BarrierSide side,
                                 const BarrierRhs& rhs, double m, double slack) {
    require_same_grid(candidate, rhs_grid_function(rhs));
    const Grid1D& g = *candidate.grid;
    const auto* singular = std::get_if<SingularRhs>(&rhs);
    if (singular) {
        for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
            if (!(candidate[i] > 0.0)) {
                throw NonPositiveCandidate("candidate is not positive at node " + std::to_string(i));
            }
        }
    }

    const GridFunction lap = apply_mlap(candidate, m, 0.0);
    const std::size_t n = g.size();
    const std::size_t first = g.domain().is_radial() ? 0 : kBarrierSkipCells + 1;
    const std::size_t last = n - 2 - kBarrierSkipCells;

    BarrierCertificate cert;
    cert.side = side;
    cert.worst_margin = side == BarrierSide::Sub ? -std::numeric_limits<double>::infinity()
                                                 : std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i <= last; ++i) {
        const double target = singular ? singular->k[i] * std::pow(candidate[i], -singular->p)
                                       : std::get<FixedRhs>(rhs).theta[i];
        const double margin = (lap[i] - target) / std::max(std::abs(target), 1e-300);
        const bool worse = side == BarrierSide::Sub ? margin > cert.worst_margin
                                                    : margin < cert.worst_margin;
        if (worse) {
            cert.worst_margin = margin;
            cert.worst_node = i;
        }
        ++cert.nodes_checked;
    }
    cert.certified = side == BarrierSide::Sub ? cert.worst_margin <= slack
                                              : cert.worst_margin >= -slack;
    return cert;
}

ScaleResult auto_scale(const BarrierFamily& family, BarrierSide side, const BarrierRhs& rhs,
                       const EigenPair& base, double c_max, double slack) {
    const GridFunction profile = barrier_profile(family, base.eigenfunction);
    GridFunction candidate = profile;
    BarrierCertificate last;
    for (double c = 2.0; c <= c_max; c *= 2.0) {
        const double factor = side == BarrierSide::Sub ? 1.0 / c : c;
        for (std::size_t i = 0; i < profile.size(); ++i) candidate[i] = factor * profile[i];
        last = check_barrier(candidate, side, rhs, base.m, slack);
        if (last.certified) return {c, last};
    }
    std::ostringstream os;
    os << to_string(side) << " barrier " << describe(family) << " does not certify for c <= "
       << c_max << " (worst margin " << last.worst_margin << " at node " << last.worst_node << ")";
    throw NoCertifiableScale(os.str());
}

BarrierFamily regime_barrier_family(const ProblemSpec& spec) {
    const RegimeReport regime = classify_regime(spec);
    switch (regime.regime) {
        case Regime::Supercritical:
            return PowerOfEigen{regime.boundary_exponent};
        case Regime::Critical: {
            const double s = *regime.log_exponent;
            double a = 1.0 + spec.domain.diameter();
            // The profile is increasing in phi only while log(A/phi) > s.
            if (!(std::log(a) > s)) a = std::exp(s + 1.0);
            return LogPowerOfEigen{s, a};
        }
        case Regime::Subcritical:
            break;
    }
    const double nu = 1.0 - (spec.p + spec.q);
    return CorrectedEigen{nu, 0.5 / (1.0 + nu)};
}

BarrierPair certify_pair(const BarrierFamily& family, const BarrierRhs& rhs, const EigenPair& base,
                         double c_max, double slack) {
    BarrierPair pair;
    pair.family = family;
    pair.c_sub = auto_scale(family, BarrierSide::Sub, rhs, base, c_max, slack).c;
    pair.c_super = auto_scale(family, BarrierSide::Super, rhs, base, c_max, slack).c;
    pair.c = std::max(pair.c_sub, pair.c_super);

    const GridPtr& grid = base.eigenfunction.grid;
    pair.sub = build_barrier({family, pair.c, BarrierSide::Sub, base}, grid);
    pair.super = build_barrier({family, pair.c, BarrierSide::Super, base}, grid);
    pair.sub_certificate = check_barrier(pair.sub, BarrierSide::Sub, rhs, base.m, slack);
    pair.super_certificate = check_barrier(pair.super, BarrierSide::Super, rhs, base.m, slack);
    return pair;
}

ScaleRefinementStudy study_scale_under_refinement(const ProblemSpec& spec,
                                                  const BarrierFamily& family, BarrierSide side,
                                                  const std::vector<std::size_t>& levels,
                                                  double grading, const SolverConfig& config) {
    ScaleRefinementStudy study;
    study.levels = levels;
    for (std::size_t n : levels) {
        const GridPtr grid = make_graded_grid(n, grading, spec.domain);
        const EigenPair base = first_eigenpair(grid, spec.m, 1e-12, config);
        const GridFunction k = sample_k(spec, grid);
        try {
            study.scales.push_back(auto_scale(family, side, SingularRhs{k, spec.p}, base, config.c_max).c);
        } catch (const NoCertifiableScale&) {
            study.scales.push_back(std::nullopt);
        }
    }
    const bool all = !study.scales.empty() &&
                     std::all_of(study.scales.begin(), study.scales.end(),
                                 [](const auto& c) { return c.has_value(); });
    study.bounded = all && *study.scales.back() <= 2.0 * *study.scales.front();
    return study;
}

}  // namespace mlap
