#include "powsec/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace powsec::synthetic {

std::vector<double> white_noise(std::size_t n, std::mt19937_64& rng, double sigma) {
    std::normal_distribution<double> e(0.0, sigma);
    std::vector<double> out(n);
    for (auto& v : out) v = e(rng);
    return out;
}

std::vector<double> random_walk(std::size_t n, std::mt19937_64& rng, double sigma) {
    std::vector<double> out = white_noise(n, rng, sigma);
    for (std::size_t i = 1; i < n; ++i) out[i] += out[i - 1];
    return out;
}

std::vector<double> integrated_twice(std::size_t n, std::mt19937_64& rng, double sigma) {
    std::vector<double> out = random_walk(n, rng, sigma);
    for (std::size_t i = 1; i < n; ++i) out[i] += out[i - 1];
    return out;
}

std::vector<double> ar1(std::size_t n, double phi, std::mt19937_64& rng, double sigma) {
    if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("ar1 needs |phi| < 1");
    std::vector<double> out = white_noise(n, rng, sigma);
    if (n > 0) out[0] /= std::sqrt(1.0 - phi * phi);
    for (std::size_t i = 1; i < n; ++i) out[i] += phi * out[i - 1];
    return out;
}

Pair cointegrated(const CointegratedDgp& dgp, std::mt19937_64& rng) {
    const std::size_t total = dgp.nobs + dgp.burn_in;
    std::normal_distribution<double> ey(0.0, dgp.sigma_y);
    std::normal_distribution<double> ex(0.0, dgp.sigma_x);
    std::vector<double> y(total, 0.0);
    std::vector<double> x(total, 0.0);
    double dy_prev = 0.0;
    for (std::size_t t = 1; t < total; ++t) {
        x[t] = x[t - 1] + ex(rng);
        const double dy = dgp.intercept - dgp.alpha * (y[t - 1] - dgp.theta * x[t]) + dgp.psi * dy_prev +
                          ey(rng);
        y[t] = y[t - 1] + dy;
        dy_prev = dy;
    }
    Pair p;
    p.y.assign(y.begin() + static_cast<std::ptrdiff_t>(dgp.burn_in), y.end());
    p.x.assign(x.begin() + static_cast<std::ptrdiff_t>(dgp.burn_in), x.end());
    return p;
}

ts::Dataset to_dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns,
                       ts::Date first) {
    if (names.size() != columns.size()) throw std::invalid_argument("one name per column required");
    if (columns.empty()) throw std::invalid_argument("to_dataset needs at least one column");
    std::vector<ts::Series> series;
    for (std::size_t i = 0; i < names.size(); ++i) {
        series.emplace_back(names[i], first, std::move(columns[i]));
    }
    std::vector<ts::Date> index(series.front().dates().begin(), series.front().dates().end());
    return ts::Dataset(std::move(index), std::move(series));
}

}  // namespace powsec::synthetic
