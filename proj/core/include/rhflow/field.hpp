#pragma once

#include <cstddef>
#include <vector>

#include "rhflow/grid.hpp"

namespace rhflow {

// One real sample per lattice point.
struct ScalarField {
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : data(g.size(), fill) {}

    std::vector<double> data;

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    std::size_t size() const { return data.size(); }
    void assign(const Grid& g, double fill = 0.0) { data.assign(g.size(), fill); }
};

// Fixed number of components per point; used for coordinate covectors
// (ncomp = dim), Christoffel symbols (dim·dim(dim+1)/2) and dense tensors
// (dim^rank).
struct PackedField {
    PackedField() = default;
    PackedField(const Grid& g, int ncomp_) : ncomp(ncomp_), data(g.size() * ncomp_, 0.0) {}

    int ncomp = 0;
    std::vector<double> data;

    double* at(std::size_t p) { return data.data() + p * ncomp; }
    const double* at(std::size_t p) const { return data.data() + p * ncomp; }
    void assign(const Grid& g, int ncomp_) {
        ncomp = ncomp_;
        data.assign(g.size() * ncomp_, 0.0);
    }
};

// Symmetric 2-tensor samples stored as the lower triangle in row-major
// order: (00), (10), (11) [, (20), (21), (22)].  This is also the on-disk
// component order of trajectory files.
struct SymTensorField {
    SymTensorField() = default;
    SymTensorField(const Grid& g, int dim)
        : ncomp(dim * (dim + 1) / 2), data(g.size() * ncomp, 0.0) {}

    int ncomp = 0;
    std::vector<double> data;

    double* at(std::size_t p) { return data.data() + p * ncomp; }
    const double* at(std::size_t p) const { return data.data() + p * ncomp; }
    std::size_t points() const { return ncomp ? data.size() / ncomp : 0; }
    void assign(const Grid& g, int dim) {
        ncomp = dim * (dim + 1) / 2;
        data.assign(g.size() * ncomp, 0.0);
    }
};

// The evolving metric is a SymTensorField that is additionally pointwise
// SPD; see sym::first_non_spd for the screening helper.  Kept as an alias so
// non-metric symmetric tensors (Ric, ∇²u) share the container.
using MetricField = SymTensorField;

}  // namespace rhflow
