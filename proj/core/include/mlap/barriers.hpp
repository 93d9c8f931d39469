#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mlap/eigen.hpp"
#include "mlap/grid.hpp"
#include "mlap/problem.hpp"
#include "mlap/solver.hpp"

namespace mlap {

enum class BarrierSide { Sub, Super };

std::string_view to_string(BarrierSide side);

/// phi^gamma
struct PowerOfEigen {
    double gamma = 1.0;
};

/// phi log^s(A / phi)
struct LogPowerOfEigen {
    double s = 1.0;
    double a = 2.0;
};

/// phi - kappa phi^{1+nu}; the profile used for p + q < 1, where a plain
/// multiple of phi cannot dominate the singular right-hand side.
struct CorrectedEigen {
    double nu = 1.0;
    double kappa = 0.25;
};

using BarrierFamily = std::variant<PowerOfEigen, LogPowerOfEigen, CorrectedEigen>;

std::string describe(const BarrierFamily& family);

/// A barrier is c^{-1} * profile (Sub) or c * profile (Super).
struct BarrierSpec {
    BarrierFamily family;
    double c = 1.0;
    BarrierSide side = BarrierSide::Super;
    EigenPair base;
};

/// Unscaled profile sampled from the base eigenfunction; zero on Dirichlet nodes.
/// Throws DomainError when a log family has A <= max phi.
GridFunction barrier_profile(const BarrierFamily& family, const GridFunction& phi);

GridFunction build_barrier(const BarrierSpec& spec, const GridPtr& grid);

/// Right-hand side a candidate is measured against.
struct FixedRhs {
    GridFunction theta;
};
struct SingularRhs {
    GridFunction k;
    double p = 0.0;
};
using BarrierRhs = std::variant<FixedRhs, SingularRhs>;

struct BarrierCertificate {
    bool certified = false;
    BarrierSide side = BarrierSide::Sub;
    /// Node with the least favourable normalized margin.
    std::size_t worst_node = 0;
    /// (-Delta_m v - rhs(v)) / |rhs(v)| at worst_node.
    double worst_margin = 0.0;
    std::size_t nodes_checked = 0;
};

/// Cells adjacent to the boundary skipped by check_barrier.
inline constexpr std::size_t kBarrierSkipCells = 2;

/// Checks the discrete sub/supersolution inequality at free nodes away from
/// the boundary skip-zone. Sub needs margin <= slack, Super margin >= -slack.
BarrierCertificate check_barrier(const GridFunction& candidate, BarrierSide side,
                                 const BarrierRhs& rhs, double m, double slack = 1e-6);

struct ScaleResult {
    double c = 0.0;
    BarrierCertificate certificate;
};

/// Smallest c in {2, 4, ..., c_max} whose barrier certifies.
/// Throws NoCertifiableScale when none does.
ScaleResult auto_scale(const BarrierFamily& family, BarrierSide side, const BarrierRhs& rhs,
                       const EigenPair& base, double c_max = 1048576.0, double slack = 1e-6);

/// Barrier family predicted for the spec's regime, built on the m-Laplace eigenfunction.
BarrierFamily regime_barrier_family(const ProblemSpec& spec);

/// Sub/super pair sharing one constant c = max of the two one-sided scales.
struct BarrierPair {
    BarrierFamily family;
    double c = 0.0;
    double c_sub = 0.0;
    double c_super = 0.0;
    GridFunction sub;
    GridFunction super;
    BarrierCertificate sub_certificate;
    BarrierCertificate super_certificate;
};

BarrierPair certify_pair(const BarrierFamily& family, const BarrierRhs& rhs, const EigenPair& base,
                         double c_max = 1048576.0, double slack = 1e-6);

/// Certified scale of one side of a family on a refinement sequence.
/// `bounded` holds when every level certifies and the scale grows by at most
/// one ladder step (a factor 2) from the first to the last level.
struct ScaleRefinementStudy {
    std::vector<std::size_t> levels;
    std::vector<std::optional<double>> scales;
    bool bounded = false;
};

ScaleRefinementStudy study_scale_under_refinement(const ProblemSpec& spec,
                                                  const BarrierFamily& family, BarrierSide side,
                                                  const std::vector<std::size_t>& levels,
                                                  double grading, const SolverConfig& config = {});

}  // namespace mlap
