#pragma once

#include "traceform/interval_set.hpp"
#include "traceform/scale.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace traceform {

/// Continuous piecewise-linear function given by its values at strictly increasing nodes.
class GridFunction {
public:
    /// Throws ValidationError on size mismatch, empty input, non-finite entries or
    /// nodes that are not strictly increasing.
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    static GridFunction constant(std::vector<double> nodes, double c);
    static GridFunction sample(std::vector<double> nodes, const std::function<double(double)>& f);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t cells() const { return nodes_.size() - 1; }
    Interval domain() const { return {nodes_.front(), nodes_.back()}; }

    /// Linear interpolation; exact node values at nodes. Throws PreconditionError outside the domain.
    double operator()(double x) const;

    /// Same function on the union of its nodes and `extra` (extra points must lie in the domain).
    GridFunction refined(std::span<const double> extra) const;

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// Slope on each cell, size cells().
std::vector<double> derivative(const GridFunction& u);

/// Both functions on the union of their node sets. Domains must coincide.
std::pair<GridFunction, GridFunction> on_common_grid(const GridFunction& u, const GridFunction& v);

GridFunction operator+(const GridFunction& u, const GridFunction& v);
GridFunction operator-(const GridFunction& u, const GridFunction& v);
GridFunction operator*(double c, const GridFunction& u);
/// Node-wise product on the common grid.
GridFunction pointwise_product(const GridFunction& u, const GridFunction& v);

/// Nodes span the window exactly and contain every endpoint in H.
bool is_adapted(const GridFunction& u, const IntervalSet& set);
void require_adapted(const GridFunction& u, const IntervalSet& set, const char* what);

/// Region of the cell [x_i, x_{i+1}] of an adapted grid.
std::vector<Region> cell_regions(const GridFunction& u, const IntervalSet& set);

/// Smallest adapted grid: window edges plus H.
std::vector<double> adapted_nodes(const IntervalSet& set);

/// u' = 0 on F, decided per cell: every F-cell has |slope| <= tol.
bool is_in_subspace(const GridFunction& u, const IntervalSet& set, double tol = 1e-9);

/// u-hat with u-hat o j = u, on the nodes j(x_i) with collapsed duplicates removed.
/// Requires u constant within tol on every closed component.
GridFunction darn_function(const GridFunction& u, const DarningMap& dm, double tol = 1e-9);

/// u = u-hat o j on an adapted grid; u-hat must be defined on the whole window image.
GridFunction undarn_function(const GridFunction& u_hat, const DarningMap& dm);

}  // namespace traceform
