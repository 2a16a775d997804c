#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rhflow {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Uniform lattice on a flat coordinate torus, dim 2 or 3.  Storage is
// row-major with the x index fastest, and every axis wraps, so the lattice
// has no boundary.  Axis 2 is degenerate (size 1) in two dimensions.
class Grid {
public:
    Grid() = default;
    Grid(int dim, std::array<int, 3> resolution, std::array<double, 3> extent);

    // Cubical grid with the same resolution and period on every axis.
    static Grid cube(int dim, int resolution, double extent = kTwoPi);

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double h(int axis) const { return h_[axis]; }
    double min_h() const;
    std::size_t size() const { return size_; }

    // Coordinate measure of one cell (the quadrature weight before √det g).
    double cell_measure() const { return cell_; }
    double coord(int axis, int i) const { return h_[axis] * i; }

    std::size_t index(int i, int j, int k = 0) const {
        return (static_cast<std::size_t>(k) * n_[1] + j) * n_[0] + i;
    }
    void unpack(std::size_t idx, int& i, int& j, int& k) const {
        i = static_cast<int>(idx % n_[0]);
        const std::size_t rest = idx / n_[0];
        j = static_cast<int>(rest % n_[1]);
        k = static_cast<int>(rest / n_[1]);
    }

    // Wrapped neighbor lookup along one axis; the tables keep stencil loops
    // free of per-point modulo arithmetic.
    int plus(int axis, int i) const { return wrap_plus_[axis][i]; }
    int minus(int axis, int i) const { return wrap_minus_[axis][i]; }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && extent_ == other.extent_;
    }

private:
    int dim_ = 0;
    std::array<int, 3> n_{1, 1, 1};
    std::array<double, 3> extent_{0.0, 0.0, 0.0};
    std::array<double, 3> h_{0.0, 0.0, 0.0};
    std::size_t size_ = 0;
    double cell_ = 0.0;
    std::array<std::vector<int>, 3> wrap_plus_;
    std::array<std::vector<int>, 3> wrap_minus_;
};

}  // namespace rhflow
