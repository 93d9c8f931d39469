#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mlap/problem.hpp"

namespace mlap {

/// Immutable node set on [0,1] for either domain kind.
///
/// Nodes cluster toward the Dirichlet boundary as (boundary distance)^grading.
/// Boundary distances and cell widths are computed from the grading map
/// directly, so the tiny cells next to x = 1 keep full relative precision.
class Grid1D {
public:
    /// Builds a grid from explicit nodes; distances follow the domain.
    static Grid1D from_nodes(std::vector<double> nodes, Domain domain);

    Grid1D(std::vector<double> nodes, std::vector<double> deltas, std::vector<double> widths,
           double grading, Domain domain);

    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t intervals() const noexcept { return widths_.size(); }
    const Domain& domain() const noexcept { return domain_; }
    double grading() const noexcept { return grading_; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> deltas() const noexcept { return deltas_; }
    std::span<const double> widths() const noexcept { return widths_; }

    double node(std::size_t i) const { return nodes_[i]; }
    double delta(std::size_t i) const { return deltas_[i]; }
    double width(std::size_t j) const { return widths_[j]; }
    double midpoint(std::size_t j) const { return nodes_[j] + 0.5 * widths_[j]; }
    /// Boundary distance at the midpoint of interval j.
    double midpoint_delta(std::size_t j) const;

    /// Measure weight of interval j in flux terms: r^{N-1} at the midpoint (1 on the interval).
    double flux_weight(std::size_t j) const { return flux_weights_[j]; }
    /// Dual-cell measure of node i (radially weighted in the ball case).
    double cell_weight(std::size_t i) const { return cell_weights_[i]; }

    /// Unknown nodes are [first_free(), last_free()]; the others carry u = 0.
    std::size_t first_free() const noexcept { return domain_.is_radial() ? 0 : 1; }
    std::size_t last_free() const noexcept { return nodes_.size() - 2; }
    bool is_dirichlet(std::size_t i) const noexcept {
        return i == nodes_.size() - 1 || (!domain_.is_radial() && i == 0);
    }

    /// Smallest boundary-adjacent cell width.
    double min_width() const;
    /// True when the node set is mirror-symmetric about 1/2 (Interval01 only).
    bool symmetric() const;

private:
    std::vector<double> nodes_;
    std::vector<double> deltas_;
    std::vector<double> widths_;
    std::vector<double> flux_weights_;
    std::vector<double> cell_weights_;
    double grading_ = 1.0;
    Domain domain_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Graded grid with n nodes. On Interval01 the map is x = (2t)^g / 2 for
/// t <= 1/2 with mirror reflection; on RadialBall it is r = 1 - (1 - t)^g.
/// Throws InvalidGrading for grading < 1 and InvalidGrid for n < 16.
GridPtr make_graded_grid(std::size_t n, double grading, Domain domain = Domain::interval());

/// Real values sampled on a grid.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(GridPtr g);
    GridFunction(GridPtr g, std::vector<double> v);

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    /// Samples f(x, delta) at free nodes; Dirichlet nodes are set to 0.
    static GridFunction sample(const GridPtr& grid, const std::function<double(double, double)>& f);
    /// Samples f(x, delta) at every node.
    static GridFunction sample_all(const GridPtr& grid,
                                   const std::function<double(double, double)>& f);

    bool has_dirichlet_zeros() const;
    double max_abs() const;
};

/// Throws GridMismatch unless both functions live on the same node set.
void require_same_grid(const GridFunction& a, const GridFunction& b);

double max_abs_difference(const GridFunction& a, const GridFunction& b);

}  // namespace mlap
