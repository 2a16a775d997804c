#include "rhflow/series.hpp"

#include <cstddef>
#include <stdexcept>

namespace rhflow {

std::vector<double> time_derivative(const std::vector<double>& t,
                                    const std::vector<double>& y) {
    const std::size_t n = t.size();
    if (y.size() != n) throw std::invalid_argument("series: t and y sizes differ");
    if (n < 2) throw std::invalid_argument("series: need at least two samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(t[i] < t[i + 1]))
            throw std::invalid_argument("series: times must be strictly increasing");

    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
        return d;
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        d[i] = (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] +
                (h2 * h2 - h1 * h1) * y[i]) /
               (h1 * h2 * (h1 + h2));
    }
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] +
               (h1 + h2) / (h1 * h2) * y[1] -
               h1 / (h2 * (h1 + h2)) * y[2];
    }
    {
        const double h1 = t[n - 2] - t[n - 3];
        const double h2 = t[n - 1] - t[n - 2];
        d[n - 1] = (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1] -
                   (h1 + h2) / (h1 * h2) * y[n - 2] +
                   h2 / (h1 * (h1 + h2)) * y[n - 3];
    }
    return d;
}

}  // namespace rhflow
