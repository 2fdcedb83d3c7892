#include "powsec/mining_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "powsec/error.hpp"

namespace powsec::mining {

void MinerParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument(fmt::format("gamma must lie in (0, 1), got {}", gamma));
    }
    if (!(c >= 0.0) || !(q >= 0.0) || !(fixed_cost >= 0.0)) {
        throw std::invalid_argument("c, q and fixed_cost must be nonnegative");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument(fmt::format("delta must lie in [0, 1], got {}", delta));
    }
    if (!(rho > 0.0)) {
        throw std::invalid_argument(fmt::format("rho must be positive, got {}", rho));
    }
    if (!(user_cost() > 0.0)) {
        throw std::invalid_argument("user cost c + (rho + delta) q must be positive");
    }
}

void MarketState::validate() const {
    if (!(expected_price >= 0.0) || !(reward_btc >= 0.0)) {
        throw std::invalid_argument("expected price and reward must be nonnegative");
    }
    if (!(n_miners >= 1.0)) {
        throw std::invalid_argument(fmt::format("miner count must be at least 1, got {}", n_miners));
    }
}

double win_probability(std::span<const double> powers, double gamma, std::size_t i) {
    if (powers.empty()) throw std::invalid_argument("win_probability needs at least one miner");
    if (i >= powers.size()) throw std::out_of_range("miner index out of range");
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument(fmt::format("gamma must lie in (0, 1], got {}", gamma));
    }
    std::vector<double> scores(powers.size());
    for (std::size_t j = 0; j < powers.size(); ++j) {
        if (!(powers[j] >= 0.0)) {
            throw std::invalid_argument(fmt::format("negative computer power {}", powers[j]));
        }
        scores[j] = std::pow(powers[j], gamma);
    }
    // Shift by the largest score so the exponentials cannot overflow.
    const double top = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double s : scores) denom += std::exp(s - top);
    return std::exp(scores[i] - top) / denom;
}

double per_miner_power(const MinerParams& params, const MarketState& market) {
    params.validate();
    market.validate();
    const double n = market.n_miners;
    const double value = market.reward_value();
    if (n == 1.0 || value == 0.0) return 0.0;
    const double base = params.gamma * (n - 1.0) / (n * n) * value / params.user_cost();
    return std::pow(base, 1.0 / (1.0 - params.gamma));
}

double total_power(const MinerParams& params, const MarketState& market) {
    params.validate();
    market.validate();
    const double n = market.n_miners;
    const double g = params.gamma;
    const double value = market.reward_value();
    if (n == 1.0 || value == 0.0) return 0.0;
    return std::pow(1.0 / n, (1.0 + g) / (1.0 - g)) *
           std::pow(g * (n - 1.0) * value / params.user_cost(), 1.0 / (1.0 - g));
}

double steady_state_profit(const MinerParams& params, const MarketState& market, double m) {
    if (!(market.n_miners >= 1.0)) {
        throw std::invalid_argument(
            fmt::format("miner count must be at least 1, got {}", market.n_miners));
    }
    if (!(m >= 0.0)) throw std::invalid_argument(fmt::format("negative computer power {}", m));
    return market.reward_value() / market.n_miners - params.c * m - params.delta * params.q * m -
           params.rho * params.fixed_cost;
}

double foc_residual(const MinerParams& params, const MarketState& market, double m) {
    if (!(m > 0.0)) throw std::invalid_argument(fmt::format("power must be positive, got {}", m));
    params.validate();
    market.validate();
    const double n = market.n_miners;
    return params.gamma * std::pow(m, params.gamma - 1.0) * (n - 1.0) / (n * n) *
               market.reward_value() -
           params.user_cost();
}

EquilibriumState solve_equilibrium(const MinerParams& params, const MarketState& market) {
    EquilibriumState s;
    s.m_per_miner = per_miner_power(params, market);
    s.total_power = market.n_miners * s.m_per_miner;
    s.shadow_price = (1.0 + params.rho) * params.q;
    s.investment = params.delta * s.m_per_miner;
    s.zero_profit_residual = steady_state_profit(params, market, s.m_per_miner);
    s.zero_power = s.m_per_miner == 0.0;
    return s;
}

namespace {

double entry_profit(const MinerParams& params, MarketState market, double n) {
    market.n_miners = n;
    return steady_state_profit(params, market, per_miner_power(params, market));
}

}  // namespace

FreeEntrySolution solve_free_entry(const MinerParams& params, const MarketState& market,
                                   const FreeEntryOptions& options) {
    params.validate();
    const double value = market.reward_value();
    if (!(value > 0.0)) {
        throw std::invalid_argument("free entry needs a positive expected block reward");
    }
    if (!(options.n_min >= 1.0 && options.n_max > options.n_min)) {
        throw std::invalid_argument("free-entry bracket must satisfy 1 <= n_min < n_max");
    }

    const double lo_profit = entry_profit(params, market, options.n_min);
    const double hi_profit = entry_profit(params, market, options.n_max);
    auto no_root = [&] {
        return NumericError(fmt::format(
            "free entry: no sign change of profit in n in [{}, {}] (profit {} at n_min, {} at n_max)",
            options.n_min, options.n_max, lo_profit, hi_profit));
    };
    if (!(lo_profit > 0.0)) throw no_root();

    // Entry proceeds while profit is positive, so the equilibrium is the first
    // crossing; a log-spaced scan locates it.
    const std::size_t probes = std::max<std::size_t>(options.scan_points, 2);
    const double log_lo = std::log(options.n_min);
    const double log_hi = std::log(options.n_max);
    double a = options.n_min;
    double b = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 1; k < probes; ++k) {
        const double n = k + 1 == probes
                             ? options.n_max
                             : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                                     static_cast<double>(probes - 1));
        if (entry_profit(params, market, n) <= 0.0) {
            b = n;
            break;
        }
        a = n;
    }
    if (std::isnan(b)) throw no_root();

    FreeEntrySolution sol;
    double fb = entry_profit(params, market, b);
    double mid = b;
    double fmid = fb;
    for (sol.iterations = 0; sol.iterations < options.max_iterations; ++sol.iterations) {
        if (fb == 0.0) {
            mid = b;
            fmid = 0.0;
            break;
        }
        mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // bracket exhausted at double precision
        fmid = entry_profit(params, market, mid);
        if (fmid > 0.0) {
            a = mid;
        } else {
            b = mid;
            fb = fmid;
        }
    }
    // Report the endpoint with the smaller residual.
    const double fa = entry_profit(params, market, a);
    fb = entry_profit(params, market, b);
    mid = std::abs(fa) < std::abs(fb) ? a : b;
    fmid = std::abs(fa) < std::abs(fb) ? fa : fb;
    if (!(std::abs(fmid) <= options.relative_profit_tolerance * value)) {
        throw NumericError(fmt::format(
            "free entry: bisection stopped at n = {} with profit residual {} after {} iterations",
            mid, fmid, sol.iterations));
    }
    MarketState at = market;
    at.n_miners = mid;
    sol.n_miners = mid;
    sol.m_per_miner = per_miner_power(params, at);
    sol.profit_residual = fmid;
    return sol;
}

IntegerEntry round_free_entry(const MinerParams& params, const MarketState& market,
                              const FreeEntrySolution& solution) {
    IntegerEntry out;
    out.n_floor = std::max(1.0, std::floor(solution.n_miners));
    out.profit_at_floor = entry_profit(params, market, out.n_floor);
    out.profit_at_next = entry_profit(params, market, out.n_floor + 1.0);
    return out;
}

double reward_elasticity(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument(fmt::format("gamma must lie in (0, 1), got {}", gamma));
    }
    return 1.0 / (1.0 - gamma);
}

double gamma_from_elasticity(double elasticity) {
    if (!(elasticity > 1.0)) {
        throw std::invalid_argument(
            fmt::format("reward elasticity must exceed 1 in this model, got {}", elasticity));
    }
    return 1.0 - 1.0 / elasticity;
}

}  // namespace powsec::mining
