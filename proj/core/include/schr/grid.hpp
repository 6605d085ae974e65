#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace schr {

/// Uniform 1D grid on [0, length] with cells + 1 nodes.
class Grid1D {
public:
    /// Default grid: [0, 2] with 40 cells.
    Grid1D() = default;
    /// Throws DomainError unless length > 0 and cells >= 4.
    Grid1D(double length, int cells);

    double length() const noexcept { return length_; }
    int cells() const noexcept { return cells_; }
    std::size_t node_count() const noexcept { return static_cast<std::size_t>(cells_) + 1; }
    double spacing() const noexcept { return length_ / cells_; }
    double node(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }
    std::vector<double> nodes() const;

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double length_ = 2.0;
    int cells_ = 40;
};

/// Composite trapezoid weights: dx/2 at both ends, dx inside.
std::vector<double> trapezoid_weights(const Grid1D& grid);

/// Composite trapezoid integral of nodal values over the grid.
double trapezoid(std::span<const double> values, const Grid1D& grid);

} // namespace schr
