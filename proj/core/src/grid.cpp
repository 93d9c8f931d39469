#include "mlap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlap/errors.hpp"

namespace mlap {

Grid1D Grid1D::from_nodes(std::vector<double> nodes, Domain domain) {
    const std::size_t n = nodes.size();
    if (n < 3) throw InvalidGrid("a grid needs at least 3 nodes");
    std::vector<double> deltas(n);
    std::vector<double> widths(n - 1);
    for (std::size_t i = 0; i < n; ++i) deltas[i] = domain.distance(nodes[i]);
    for (std::size_t j = 0; j + 1 < n; ++j) widths[j] = nodes[j + 1] - nodes[j];
    return Grid1D(std::move(nodes), std::move(deltas), std::move(widths), 1.0, domain);
}

Grid1D::Grid1D(std::vector<double> nodes, std::vector<double> deltas, std::vector<double> widths,
               double grading, Domain domain)
    : nodes_(std::move(nodes)),
      deltas_(std::move(deltas)),
      widths_(std::move(widths)),
      grading_(grading),
      domain_(domain) {
    const std::size_t n = nodes_.size();
    if (n < 3 || deltas_.size() != n || widths_.size() != n - 1) {
        throw InvalidGrid("inconsistent grid arrays");
    }
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
        throw InvalidGrid("grid endpoints must be exactly 0 and 1");
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(widths_[j] > 0.0) || !(nodes_[j + 1] > nodes_[j])) {
            throw InvalidGrid("grid nodes must be strictly increasing (interval " +
                              std::to_string(j) + ")");
        }
    }

    flux_weights_.assign(n - 1, 1.0);
    cell_weights_.assign(n, 0.0);
    if (!domain_.is_radial()) {
        cell_weights_[0] = 0.5 * widths_[0];
        cell_weights_[n - 1] = 0.5 * widths_[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            cell_weights_[i] = 0.5 * (widths_[i - 1] + widths_[i]);
        }
        return;
    }

    const double dim = domain_.dimension;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        flux_weights_[j] = std::pow(midpoint(j), dim - 1.0);
    }
    cell_weights_[0] = std::pow(0.5 * widths_[0], dim) / dim;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        cell_weights_[i] = std::pow(nodes_[i], dim - 1.0) * 0.5 * (widths_[i - 1] + widths_[i]);
    }
    cell_weights_[n - 1] = 0.5 * widths_[n - 2];
}

double Grid1D::midpoint_delta(std::size_t j) const {
    if (domain_.is_radial()) return 0.5 * (deltas_[j] + deltas_[j + 1]);
    const bool left = nodes_[j + 1] <= 0.5;
    const bool right = nodes_[j] >= 0.5;
    if (left || right) return 0.5 * (deltas_[j] + deltas_[j + 1]);
    return domain_.distance(midpoint(j));
}

double Grid1D::min_width() const { return *std::min_element(widths_.begin(), widths_.end()); }

bool Grid1D::symmetric() const {
    if (domain_.is_radial()) return false;
    const std::size_t n = deltas_.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double a = deltas_[i];
        const double b = deltas_[n - 1 - i];
        if (std::abs(a - b) > 1e-13 * std::max(a, b)) return false;
    }
    return true;
}

GridPtr make_graded_grid(std::size_t n, double grading, Domain domain) {
    if (!(grading >= 1.0) || !std::isfinite(grading)) {
        throw InvalidGrading("grading must be >= 1, got " + std::to_string(grading));
    }
    if (n < 16) throw InvalidGrid("graded grids need n >= 16 nodes, got " + std::to_string(n));
    if (domain.is_radial() && domain.dimension < 2) {
        throw InvalidGrid("radial grids need dimension >= 2");
    }

    const double intervals = static_cast<double>(n - 1);
    std::vector<double> nodes(n);
    std::vector<double> deltas(n);
    std::vector<double> widths(n - 1);

    if (!domain.is_radial()) {
        // Distance of node k from its nearer endpoint, computed from the
        // integer index so both halves are exact mirror images.
        auto side_distance = [&](std::size_t k) {
            return 0.5 * std::pow(2.0 * static_cast<double>(k) / intervals, grading);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t mirror = n - 1 - i;
            if (2 * i <= n - 1) {
                deltas[i] = side_distance(i);
                nodes[i] = deltas[i];
            } else {
                deltas[i] = side_distance(mirror);
                nodes[i] = 1.0 - deltas[i];
            }
        }
        if ((n - 1) % 2 == 0) {
            nodes[(n - 1) / 2] = 0.5;
            deltas[(n - 1) / 2] = 0.5;
        }
        nodes.front() = 0.0;
        nodes.back() = 1.0;
        deltas.front() = 0.0;
        deltas.back() = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (2 * (j + 1) <= n - 1) {
                widths[j] = nodes[j + 1] - nodes[j];
            } else if (2 * j >= n - 1) {
                widths[j] = deltas[j] - deltas[j + 1];
            } else {
                widths[j] = nodes[j + 1] - nodes[j];
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            deltas[i] = std::pow(static_cast<double>(n - 1 - i) / intervals, grading);
            nodes[i] = 1.0 - deltas[i];
        }
        nodes.front() = 0.0;
        deltas.front() = 1.0;
        nodes.back() = 1.0;
        deltas.back() = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) widths[j] = deltas[j] - deltas[j + 1];
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(nodes[j + 1] > nodes[j])) {
            throw InvalidGrid("grading " + std::to_string(grading) + " is too strong for n = " +
                              std::to_string(n) + ": nodes next to x = 1 coincide in double precision");
        }
    }
    return std::make_shared<const Grid1D>(std::move(nodes), std::move(deltas), std::move(widths),
                                          grading, domain);
}

GridFunction::GridFunction(GridPtr g) : grid(std::move(g)), values(grid ? grid->size() : 0, 0.0) {}

GridFunction::GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size()) {
        throw GridMismatch("value count does not match grid size");
    }
}

GridFunction GridFunction::sample(const GridPtr& grid,
                                  const std::function<double(double, double)>& f) {
    GridFunction out(grid);
    for (std::size_t i = grid->first_free(); i <= grid->last_free(); ++i) {
        out.values[i] = f(grid->node(i), grid->delta(i));
    }
    return out;
}

GridFunction GridFunction::sample_all(const GridPtr& grid,
                                      const std::function<double(double, double)>& f) {
    GridFunction out(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) out.values[i] = f(grid->node(i), grid->delta(i));
    return out;
}

bool GridFunction::has_dirichlet_zeros() const {
    if (values.back() != 0.0) return false;
    return grid->domain().is_radial() || values.front() == 0.0;
}

double GridFunction::max_abs() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, std::abs(v));
    return best;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.grid || !b.grid) throw GridMismatch("grid function without a grid");
    if (a.grid == b.grid) return;
    const auto na = a.grid->nodes();
    const auto nb = b.grid->nodes();
    if (a.grid->domain() != b.grid->domain() || !std::equal(na.begin(), na.end(), nb.begin(), nb.end())) {
        throw GridMismatch("grid functions live on different grids");
    }
}

double max_abs_difference(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

}  // namespace mlap
