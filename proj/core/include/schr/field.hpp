#pragma once

#include "schr/grid.hpp"
#include "schr/kinetics.hpp"

#include <span>
#include <vector>

namespace schr {

/// Nodal values of every compartment on a grid at one instant.
/// Storage is compartment-major: component(i)[j] is compartment i at node j.
class Field {
public:
    Field(const Grid1D& grid, Model model, double time = 0.0);

    static Field homogeneous(const Grid1D& grid, const CompartmentVector& values, double time = 0.0);

    const Grid1D& grid() const noexcept { return grid_; }
    Model model() const noexcept { return model_; }
    std::size_t compartments() const noexcept { return compartment_count(model_); }
    std::size_t nodes() const noexcept { return grid_.node_count(); }

    double time() const noexcept { return time_; }
    void set_time(double t) noexcept { time_ = t; }

    std::span<double> component(std::size_t i) noexcept { return data_[i]; }
    std::span<const double> component(std::size_t i) const noexcept { return data_[i]; }

    /// State vector at node j.
    CompartmentVector at(std::size_t j) const;
    void set(std::size_t j, const CompartmentVector& y);

    double min_value() const noexcept;
    bool all_finite() const noexcept;

    /// Sup-norm of (this - point) over every node and compartment.
    double sup_distance(const CompartmentVector& point) const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    Grid1D grid_;
    Model model_;
    double time_;
    std::vector<std::vector<double>> data_;
};

} // namespace schr
