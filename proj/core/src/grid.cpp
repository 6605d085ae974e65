#include "schr/errors.hpp"
#include "schr/field.hpp"
#include "schr/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace schr {

Grid1D::Grid1D(double length, int cells) : length_(length), cells_(cells)
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw DomainError(fmt::format("grid length must be positive and finite (got {})", length));
    }
    if (cells < 4) {
        throw DomainError(fmt::format("grid needs at least 4 cells (got {})", cells));
    }
}

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> x(node_count());
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = node(j);
    }
    return x;
}

std::vector<double> trapezoid_weights(const Grid1D& grid)
{
    std::vector<double> w(grid.node_count(), grid.spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double trapezoid(std::span<const double> values, const Grid1D& grid)
{
    if (values.size() != grid.node_count()) {
        throw ContractViolation(
            fmt::format("trapezoid: expected {} nodal values, got {}", grid.node_count(), values.size()));
    }
    double interior = 0.0;
    for (std::size_t j = 1; j + 1 < values.size(); ++j) {
        interior += values[j];
    }
    return grid.spacing() * (interior + 0.5 * (values.front() + values.back()));
}

Field::Field(const Grid1D& grid, Model model, double time)
    : grid_(grid), model_(model), time_(time),
      data_(compartment_count(model), std::vector<double>(grid.node_count(), 0.0))
{
}

Field Field::homogeneous(const Grid1D& grid, const CompartmentVector& values, double time)
{
    Field f(grid, values.model(), time);
    for (std::size_t i = 0; i < f.compartments(); ++i) {
        std::fill(f.data_[i].begin(), f.data_[i].end(), values[i]);
    }
    return f;
}

CompartmentVector Field::at(std::size_t j) const
{
    CompartmentVector y(model_);
    for (std::size_t i = 0; i < compartments(); ++i) {
        y[i] = data_[i][j];
    }
    return y;
}

void Field::set(std::size_t j, const CompartmentVector& y)
{
    if (y.model() != model_) {
        throw ContractViolation("Field::set: compartment layout mismatch");
    }
    for (std::size_t i = 0; i < compartments(); ++i) {
        data_[i][j] = y[i];
    }
}

double Field::min_value() const noexcept
{
    double m = data_.front().front();
    for (const auto& c : data_) {
        m = std::min(m, *std::min_element(c.begin(), c.end()));
    }
    return m;
}

bool Field::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](const auto& c) {
        return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
    });
}

double Field::sup_distance(const CompartmentVector& point) const
{
    if (point.model() != model_) {
        throw ContractViolation("Field::sup_distance: compartment layout mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < compartments(); ++i) {
        for (double v : data_[i]) {
            m = std::max(m, std::abs(v - point[i]));
        }
    }
    return m;
}

} // namespace schr
