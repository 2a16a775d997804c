#include "rhflow/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rhflow {

Grid::Grid(int dim, std::array<int, 3> resolution, std::array<double, 3> extent) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
    dim_ = dim;
    size_ = 1;
    cell_ = 1.0;
    for (int a = 0; a < dim; ++a) {
        if (resolution[a] < 8)
            throw std::invalid_argument("grid: resolution per axis must be >= 8, got " +
                                        std::to_string(resolution[a]));
        if (!(extent[a] > 0.0))
            throw std::invalid_argument("grid: extent per axis must be positive");
        n_[a] = resolution[a];
        extent_[a] = extent[a];
        h_[a] = extent[a] / resolution[a];
        size_ *= static_cast<std::size_t>(n_[a]);
        cell_ *= h_[a];
        wrap_plus_[a].resize(n_[a]);
        wrap_minus_[a].resize(n_[a]);
        for (int i = 0; i < n_[a]; ++i) {
            wrap_plus_[a][i] = (i + 1 == n_[a]) ? 0 : i + 1;
            wrap_minus_[a][i] = (i == 0) ? n_[a] - 1 : i - 1;
        }
    }
    // The degenerate axis of a 2D grid still needs identity wrap tables so
    // dim-generic loops can run k over {0}.
    for (int a = dim; a < 3; ++a) {
        n_[a] = 1;
        extent_[a] = 0.0;
        h_[a] = 0.0;
        wrap_plus_[a] = {0};
        wrap_minus_[a] = {0};
    }
}

Grid Grid::cube(int dim, int resolution, double extent) {
    return Grid(dim, {resolution, resolution, resolution}, {extent, extent, extent});
}

double Grid::min_h() const {
    double m = h_[0];
    for (int a = 1; a < dim_; ++a) m = std::min(m, h_[a]);
    return m;
}

}  // namespace rhflow
