#pragma once

#include <optional>
#include <string_view>

#include "powsec/mining_model.hpp"

namespace powsec::attack {

/// A majority attack of `duration_blocks` blocks at `power_multiple` times the
/// honest network power.
struct AttackScenario {
    double power_multiple = 1.1;  ///< A > 1
    double duration_blocks = 6;   ///< s > 0, in block-time units
    double recovery_share = 0.0;  ///< theta in [0, 1], recoverable equipment share
    double price_drop = 0.0;      ///< Delta in [0, 1], proportional post-attack price fall
    /// Aggregate attack payoff V_A in currency. When unset, the payoff is the
    /// double-spend gain on `double_spend_amount` coins at the expected price.
    std::optional<double> payoff;
    std::optional<double> double_spend_amount;

    void validate() const;
    /// V_A for the given expected price.
    [[nodiscard]] double resolve_payoff(double expected_price) const;
};

/// Where the recovery credit enters the attack cost.
enum class CostForm {
    /// s A n m [(c + q delta) - (1 - theta) q]: the credit is scaled by s A.
    scaled_recovery,
    /// s A n m (c + q delta) - (1 - theta) q n m: the credit is taken once.
    single_recovery,
};

enum class FormUsed { direct, reduced, single_recovery };

[[nodiscard]] std::string_view to_string(FormUsed f);

struct AttackVerdict {
    double cost = 0.0;
    double gain = 0.0;
    bool compatible = false;
    double beta = 0.0;
    FormUsed form_used = FormUsed::direct;
    /// (c + q delta) < (1 - theta) q: the per-unit cost bracket is negative.
    bool negative_bracket = false;
};

/// V_A = E(p) X (1 - Delta).
[[nodiscard]] double double_spend_payoff(double amount, double expected_price, double price_drop);

/// Attacker cost at honest per-miner power m.
[[nodiscard]] double attack_cost(const AttackScenario& scenario, const mining::MinerParams& params,
                                 const mining::MarketState& market, double m,
                                 CostForm form = CostForm::scaled_recovery);

/// Deterrence holds when cost >= (1 - Delta) s E(p)R + V_A, with m at the
/// honest equilibrium power.
[[nodiscard]] AttackVerdict incentive_compatible(const AttackScenario& scenario,
                                                 const mining::MinerParams& params,
                                                 const mining::MarketState& market,
                                                 CostForm form = CostForm::scaled_recovery);

/// beta = A n [(c + q delta) - (1 - theta) q] [gamma (n-1)/n^2 / (c + (rho+delta) q)]^(1/(1-gamma)).
[[nodiscard]] double beta_coefficient(const AttackScenario& scenario,
                                      const mining::MinerParams& params,
                                      const mining::MarketState& market);

/// The same condition after substituting the equilibrium power:
/// {[E(p)R]^(gamma/(1-gamma)) - (1-Delta)/beta} s E(p)R >= V_A / beta,
/// with the inequality reversed when beta < 0. Throws NumericError for beta = 0.
[[nodiscard]] AttackVerdict incentive_compatible_reduced(const AttackScenario& scenario,
                                                         const mining::MinerParams& params,
                                                         const mining::MarketState& market);

struct DeterrenceThreshold {
    /// Smallest E(p)R that deters the attack; +infinity when none exists in
    /// the search bracket.
    double reward_value = 0.0;
    bool finite = true;
};

/// Lowest expected block-reward value E(p)R at which the attack is deterred.
/// E(p)R varies through the price with R = market.reward_btc held fixed, so a
/// price-linked double-spend payoff moves with it. Throws NumericError when
/// the verdict is not monotone along the scan.
[[nodiscard]] DeterrenceThreshold min_deterrence_reward(const AttackScenario& scenario,
                                                        const mining::MinerParams& params,
                                                        const mining::MarketState& market,
                                                        double max_reward_value = 1e15);

}  // namespace powsec::attack
