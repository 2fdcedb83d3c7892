#pragma once

#include <cstddef>
#include <span>

namespace powsec::mining {

/// Cost and technology parameters of an individual miner.
struct MinerParams {
    double gamma = 0.5;       ///< learning-by-mining transformation, 0 < gamma < 1
    double c = 0.0;           ///< variable cost per unit of computer power and period
    double rho = 0.05;        ///< discount rate per period
    double delta = 0.0;       ///< depreciation rate per period
    double q = 0.0;           ///< equipment price per unit of power
    double fixed_cost = 0.0;  ///< one-time entry cost F
    /// Carried as a label only: efficiency is folded into c and q.
    double equipment_efficiency = 0.0;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
    /// c + (rho + delta) q, the per-period user cost of one unit of power.
    [[nodiscard]] double user_cost() const noexcept { return c + (rho + delta) * q; }
    /// c + delta q, the per-period flow cost in the zero-profit condition.
    [[nodiscard]] double flow_cost() const noexcept { return c + delta * q; }
};

struct MarketState {
    double expected_price = 0.0;  ///< E(p), currency per coin
    double reward_btc = 0.0;      ///< R, coins per block
    double n_miners = 1.0;        ///< n >= 1, real-valued

    void validate() const;
    /// E(p) R, the expected currency value of one block reward.
    [[nodiscard]] double reward_value() const noexcept { return expected_price * reward_btc; }
};

struct EquilibriumState {
    double m_per_miner = 0.0;
    double total_power = 0.0;
    double shadow_price = 0.0;  ///< (1 + rho) q
    double investment = 0.0;    ///< replacement investment delta m
    double zero_profit_residual = 0.0;
    /// Power-zero miners still win with weight e^0 = 1 under the exponential
    /// contest; flagged for reports.
    bool zero_power = false;
};

/// Contest win probability exp(m_i^gamma) / sum_j exp(m_j^gamma).
/// gamma = 1 is accepted here. Throws on negative power or empty input.
[[nodiscard]] double win_probability(std::span<const double> powers, double gamma, std::size_t i);

/// Symmetric steady-state power per miner,
/// m* = [gamma (n-1)/n^2 E(p)R / (c + (rho+delta) q)]^(1/(1-gamma)).
[[nodiscard]] double per_miner_power(const MinerParams& params, const MarketState& market);

/// Total network power n m*, evaluated in its own closed form
/// (1/n)^((1+gamma)/(1-gamma)) [gamma (n-1) E(p)R / (c + (rho+delta) q)]^(1/(1-gamma)).
[[nodiscard]] double total_power(const MinerParams& params, const MarketState& market);

/// Per-period steady-state profit with symmetric win probability 1/n,
/// replacement investment delta m and annuitised fixed cost rho F.
[[nodiscard]] double steady_state_profit(const MinerParams& params, const MarketState& market,
                                         double m);

/// Marginal expected reward minus user cost at symmetric power m:
/// gamma m^(gamma-1) (n-1)/n^2 E(p)R - (c + (rho+delta) q).
[[nodiscard]] double foc_residual(const MinerParams& params, const MarketState& market, double m);

[[nodiscard]] EquilibriumState solve_equilibrium(const MinerParams& params,
                                                 const MarketState& market);

struct FreeEntryOptions {
    double n_min = 1.0 + 1e-6;
    double n_max = 1e9;
    /// Number of log-spaced probes used to locate the first sign change.
    std::size_t scan_points = 400;
    std::size_t max_iterations = 200;
    double relative_profit_tolerance = 1e-8;
};

struct FreeEntrySolution {
    double n_miners = 0.0;
    double m_per_miner = 0.0;
    double profit_residual = 0.0;
    std::size_t iterations = 0;
};

/// Free-entry miner count: the smallest n in the bracket where steady-state
/// profit at m*(n) falls to zero (entry continues while profit is positive).
/// `market.n_miners` is ignored. Throws NumericError when the bracket holds no
/// sign change or bisection does not converge.
[[nodiscard]] FreeEntrySolution solve_free_entry(const MinerParams& params,
                                                 const MarketState& market,
                                                 const FreeEntryOptions& options = {});

/// Integer reporting of a free-entry solution: n rounded down plus the profit
/// per miner at floor(n) and floor(n) + 1.
struct IntegerEntry {
    double n_floor = 0.0;
    double profit_at_floor = 0.0;
    double profit_at_next = 0.0;
};

[[nodiscard]] IntegerEntry round_free_entry(const MinerParams& params, const MarketState& market,
                                            const FreeEntrySolution& solution);

/// d ln(n m*) / d ln(E(p)R) = 1 / (1 - gamma).
[[nodiscard]] double reward_elasticity(double gamma);
/// Inverse of reward_elasticity; requires e > 1.
[[nodiscard]] double gamma_from_elasticity(double elasticity);

}  // namespace powsec::mining
