#include "powsec/attack_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "powsec/error.hpp"

namespace powsec::attack {

using mining::MarketState;
using mining::MinerParams;

void AttackScenario::validate() const {
    if (!(power_multiple > 1.0)) {
        throw std::invalid_argument(
            fmt::format("attacker power multiple must exceed 1, got {}", power_multiple));
    }
    if (!(duration_blocks > 0.0)) {
        throw std::invalid_argument(
            fmt::format("attack duration must be positive, got {}", duration_blocks));
    }
    if (!(recovery_share >= 0.0 && recovery_share <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("recovery share must lie in [0, 1], got {}", recovery_share));
    }
    if (!(price_drop >= 0.0 && price_drop <= 1.0)) {
        throw std::invalid_argument(fmt::format("price drop must lie in [0, 1], got {}", price_drop));
    }
    if (payoff && !(*payoff >= 0.0)) {
        throw std::invalid_argument(fmt::format("attack payoff must be nonnegative, got {}", *payoff));
    }
    if (double_spend_amount && !(*double_spend_amount >= 0.0)) {
        throw std::invalid_argument("double-spend amount must be nonnegative");
    }
}

double AttackScenario::resolve_payoff(double expected_price) const {
    if (payoff) return *payoff;
    if (double_spend_amount) {
        return double_spend_payoff(*double_spend_amount, expected_price, price_drop);
    }
    return 0.0;
}

std::string_view to_string(FormUsed f) {
    switch (f) {
        case FormUsed::direct: return "direct";
        case FormUsed::reduced: return "reduced";
        case FormUsed::single_recovery: return "single_recovery";
    }
    return "?";
}

double double_spend_payoff(double amount, double expected_price, double price_drop) {
    if (!(amount >= 0.0)) throw std::invalid_argument("double-spend amount must be nonnegative");
    if (!(expected_price >= 0.0)) throw std::invalid_argument("expected price must be nonnegative");
    if (!(price_drop >= 0.0 && price_drop <= 1.0)) {
        throw std::invalid_argument("price drop must lie in [0, 1]");
    }
    return expected_price * amount * (1.0 - price_drop);
}

namespace {

double cost_bracket(const AttackScenario& s, const MinerParams& p) {
    return p.flow_cost() - (1.0 - s.recovery_share) * p.q;
}

double gain_of(const AttackScenario& s, const MarketState& market) {
    return (1.0 - s.price_drop) * s.duration_blocks * market.reward_value() +
           s.resolve_payoff(market.expected_price);
}

}  // namespace

double attack_cost(const AttackScenario& scenario, const MinerParams& params,
                   const MarketState& market, double m, CostForm form) {
    scenario.validate();
    if (!(m >= 0.0)) throw std::invalid_argument(fmt::format("negative computer power {}", m));
    const double network = market.n_miners * m;
    const double sa = scenario.duration_blocks * scenario.power_multiple;
    switch (form) {
        case CostForm::scaled_recovery:
            return sa * network * cost_bracket(scenario, params);
        case CostForm::single_recovery:
            return sa * network * params.flow_cost() -
                   (1.0 - scenario.recovery_share) * params.q * network;
    }
    return 0.0;
}

AttackVerdict incentive_compatible(const AttackScenario& scenario, const MinerParams& params,
                                   const MarketState& market, CostForm form) {
    scenario.validate();
    const double m = mining::per_miner_power(params, market);
    AttackVerdict v;
    v.cost = attack_cost(scenario, params, market, m, form);
    v.gain = gain_of(scenario, market);
    v.compatible = v.cost >= v.gain;
    v.beta = beta_coefficient(scenario, params, market);
    v.form_used = form == CostForm::scaled_recovery ? FormUsed::direct : FormUsed::single_recovery;
    v.negative_bracket = cost_bracket(scenario, params) < 0.0;
    return v;
}

double beta_coefficient(const AttackScenario& scenario, const MinerParams& params,
                        const MarketState& market) {
    scenario.validate();
    params.validate();
    market.validate();
    const double n = market.n_miners;
    const double g = params.gamma;
    const double k = std::pow(g * (n - 1.0) / (n * n) / params.user_cost(), 1.0 / (1.0 - g));
    return scenario.power_multiple * n * cost_bracket(scenario, params) * k;
}

AttackVerdict incentive_compatible_reduced(const AttackScenario& scenario,
                                           const MinerParams& params, const MarketState& market) {
    const double beta = beta_coefficient(scenario, params, market);
    if (beta == 0.0) {
        throw NumericError("reduced deterrence condition undefined for beta = 0");
    }
    const double g = params.gamma;
    const double value = market.reward_value();
    const double s = scenario.duration_blocks;
    const double payoff = scenario.resolve_payoff(market.expected_price);
    const double lhs =
        (std::pow(value, g / (1.0 - g)) - (1.0 - scenario.price_drop) / beta) * s * value;
    const double rhs = payoff / beta;

    AttackVerdict v;
    v.beta = beta;
    v.compatible = beta > 0.0 ? lhs >= rhs : lhs <= rhs;
    v.cost = beta * s * std::pow(value, 1.0 / (1.0 - g));
    v.gain = gain_of(scenario, market);
    v.form_used = FormUsed::reduced;
    v.negative_bracket = cost_bracket(scenario, params) < 0.0;
    return v;
}

DeterrenceThreshold min_deterrence_reward(const AttackScenario& scenario, const MinerParams& params,
                                          const MarketState& market, double max_reward_value) {
    scenario.validate();
    if (!(market.reward_btc > 0.0)) {
        throw std::invalid_argument("min_deterrence_reward varies the price; reward_btc must be > 0");
    }
    if (!(beta_coefficient(scenario, params, market) > 0.0)) {
        throw NumericError("min_deterrence_reward requires beta > 0");
    }
    auto deterred = [&](double value) {
        MarketState at = market;
        at.expected_price = value / market.reward_btc;
        return incentive_compatible(scenario, params, at).compatible;
    };
    if (deterred(0.0)) return {0.0, true};

    constexpr std::size_t kProbes = 241;
    const double log_lo = std::log(1e-9);
    const double log_hi = std::log(max_reward_value);
    double below = 0.0;
    double above = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < kProbes; ++k) {
        const double value =
            std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) / (kProbes - 1));
        const bool ok = deterred(value);
        if (ok && std::isnan(above)) {
            above = value;
        } else if (!ok && !std::isnan(above)) {
            throw NumericError(fmt::format(
                "deterrence is not monotone in E(p)R: deterred at {} but not at {}", above, value));
        } else if (!ok) {
            below = value;
        }
    }
    if (std::isnan(above)) {
        return {std::numeric_limits<double>::infinity(), false};
    }
    for (int it = 0; it < 200 && above - below > 1e-14 * above; ++it) {
        const double mid = 0.5 * (below + above);
        if (mid <= below || mid >= above) break;
        (deterred(mid) ? above : below) = mid;
    }
    return {above, true};
}

}  // namespace powsec::attack
