#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "powsec/timeseries.hpp"

namespace powsec::synthetic {

/// dy_t = b0 - alpha (y_{t-1} - theta x_t) + psi dy_{t-1} + e_t, with x a
/// driftless random walk. Unit-variance innovations by default.
struct CointegratedDgp {
    std::size_t nobs = 3000;
    double alpha = 0.01;
    double theta = 1.5;
    double psi = 0.3;
    double intercept = 0.0;
    double sigma_y = 1.0;
    double sigma_x = 1.0;
    std::size_t burn_in = 200;
};

[[nodiscard]] std::vector<double> white_noise(std::size_t n, std::mt19937_64& rng, double sigma = 1.0);
[[nodiscard]] std::vector<double> random_walk(std::size_t n, std::mt19937_64& rng, double sigma = 1.0);
/// Cumulated random walk, I(2).
[[nodiscard]] std::vector<double> integrated_twice(std::size_t n, std::mt19937_64& rng,
                                                   double sigma = 1.0);
/// x_t = phi x_{t-1} + e_t started from its stationary distribution.
[[nodiscard]] std::vector<double> ar1(std::size_t n, double phi, std::mt19937_64& rng,
                                      double sigma = 1.0);

struct Pair {
    std::vector<double> y;
    std::vector<double> x;
};
[[nodiscard]] Pair cointegrated(const CointegratedDgp& dgp, std::mt19937_64& rng);

/// Daily dataset starting at `first` from named columns of equal length.
[[nodiscard]] ts::Dataset to_dataset(std::vector<std::string> names,
                                     std::vector<std::vector<double>> columns,
                                     ts::Date first = ts::Date{std::chrono::year{2014} / 1 / 1});

}  // namespace powsec::synthetic
