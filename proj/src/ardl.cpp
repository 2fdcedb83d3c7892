#include "powsec/ardl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "powsec/distributions.hpp"
#include "powsec/error.hpp"
#include "powsec/parallel.hpp"

namespace powsec::ardl {

void ArdlSpec::validate() const {
    if (dependent.empty()) throw std::invalid_argument("ARDL spec needs a dependent variable");
    if (regressors.empty()) throw std::invalid_argument("ARDL spec needs at least one regressor");
    if (max_g < 1) throw std::invalid_argument("max_g must be at least 1");
    for (std::size_t i = 0; i < regressors.size(); ++i) {
        if (regressors[i] == dependent) {
            throw std::invalid_argument(
                fmt::format("dependent variable '{}' also listed as a regressor", dependent));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (regressors[i] == regressors[j]) {
                throw std::invalid_argument(fmt::format("regressor '{}' listed twice", regressors[i]));
            }
        }
    }
    if (!intercept) throw std::invalid_argument("the ARDL model always includes an intercept");
}

std::size_t ArdlOrders::max_lag() const {
    std::size_t m = g;
    for (auto v : z) m = std::max(m, v);
    return m;
}

std::size_t ArdlOrders::total() const { return std::accumulate(z.begin(), z.end(), g); }

std::string ArdlOrders::label() const {
    return z.empty() ? fmt::format("ARDL({})", g) : fmt::format("ARDL({},{})", g, fmt::join(z, ","));
}

Eigen::VectorXd ArdlFit::phi() const {
    return ols.coefficients.segment(1, static_cast<Eigen::Index>(orders.g));
}

std::size_t ArdlFit::beta_column(std::size_t j) const {
    std::size_t c = 1 + orders.g;
    for (std::size_t i = 0; i < j; ++i) c += orders.z[i] + 1;
    return c;
}

Eigen::VectorXd ArdlFit::beta(std::size_t j) const {
    return ols.coefficients.segment(static_cast<Eigen::Index>(beta_column(j)),
                                    static_cast<Eigen::Index>(orders.z[j] + 1));
}

std::string lag_name(const std::string& base, std::size_t i) {
    return i == 0 ? base : fmt::format("{}(-{})", base, i);
}

ArdlData extract(const ts::Dataset& data, const ArdlSpec& spec) {
    spec.validate();
    auto column = [&](const std::string& name) {
        if (!data.has(name)) throw ConfigError(fmt::format("dataset has no column '{}'", name));
        const auto v = data.column(name).values();
        Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!std::isfinite(v[i])) {
                throw DataError(fmt::format("column '{}' has a non-finite value at {}", name,
                                            ts::format_date(data.index()[i])));
            }
            out(static_cast<Eigen::Index>(i)) = v[i];
        }
        return out;
    };
    ArdlData d;
    d.y = column(spec.dependent);
    for (const auto& r : spec.regressors) d.x.push_back(column(r));
    d.dates.assign(data.index().begin(), data.index().end());
    return d;
}

ArdlDesign build_design(const ArdlData& d, const ArdlSpec& spec, const ArdlOrders& orders,
                        std::size_t start) {
    if (orders.z.size() != d.x.size()) {
        throw std::invalid_argument(
            fmt::format("{} regressor orders for {} regressors", orders.z.size(), d.x.size()));
    }
    if (orders.g < 1) throw std::invalid_argument("ARDL needs at least one lag of the dependent variable");
    if (start < orders.max_lag()) throw std::invalid_argument("sample start precedes the largest lag");
    const auto T = static_cast<std::size_t>(d.y.size());
    if (start >= T) throw NumericError("no observations left after trimming for lags");
    const auto rows = static_cast<Eigen::Index>(T - start);
    const auto cols = static_cast<Eigen::Index>(1 + orders.total() + orders.z.size());

    ArdlDesign out;
    out.y = d.y.tail(rows);
    out.X.resize(rows, cols);
    out.X.col(0).setOnes();
    out.names.push_back("const");
    Eigen::Index c = 1;
    for (std::size_t i = 1; i <= orders.g; ++i, ++c) {
        out.X.col(c) = d.y.segment(static_cast<Eigen::Index>(start - i), rows);
        out.names.push_back(lag_name(spec.dependent, i));
    }
    for (std::size_t j = 0; j < d.x.size(); ++j) {
        for (std::size_t i = 0; i <= orders.z[j]; ++i, ++c) {
            out.X.col(c) = d.x[j].segment(static_cast<Eigen::Index>(start - i), rows);
            out.names.push_back(lag_name(spec.regressors[j], i));
        }
    }
    return out;
}

namespace {

double candidate_aic(const ArdlData& d, const ArdlSpec& spec, const ArdlOrders& o,
                     std::size_t start) {
    const ArdlDesign des = build_design(d, spec, o, start);
    const double ssr = ols::ssr_only(des.y, des.X);
    return ols::aic(ssr, static_cast<std::size_t>(des.y.size()), static_cast<std::size_t>(des.X.cols()));
}

bool better(double aic, const ArdlOrders& o, double best_aic, const ArdlOrders& best) {
    const double tol = 1e-9 * std::max(1.0, std::abs(best_aic));
    if (aic < best_aic - tol) return true;
    if (aic > best_aic + tol) return false;
    return o.total() < best.total();
}

ArdlOrders decode(std::size_t index, std::size_t k, const ArdlSpec& spec) {
    ArdlOrders o;
    o.z.resize(k);
    for (std::size_t j = k; j-- > 0;) {
        o.z[j] = index % (spec.max_z + 1);
        index /= spec.max_z + 1;
    }
    o.g = 1 + index;
    return o;
}

}  // namespace

Selection select_orders(const ts::Dataset& data, const ArdlSpec& spec) {
    const ArdlData d = extract(data, spec);
    const std::size_t k = d.x.size();
    const std::size_t start = std::max(spec.max_g, spec.max_z);
    const std::size_t widest = 2 + spec.max_g + k * (spec.max_z + 1);
    if (static_cast<std::size_t>(d.y.size()) < start + widest + 1) {
        throw DataError(fmt::format(
            "select_orders: {} observations are too few for lag caps ({}, {}) with {} regressors",
            d.y.size(), spec.max_g, spec.max_z, k));
    }

    double count = static_cast<double>(spec.max_g);
    for (std::size_t j = 0; j < k; ++j) count *= static_cast<double>(spec.max_z + 1);

    Selection sel;
    if (count <= static_cast<double>(kExhaustiveLimit)) {
        const auto n = static_cast<std::size_t>(count);
        std::vector<double> aics(n);
        parallel_for(n, [&](std::size_t i) { aics[i] = candidate_aic(d, spec, decode(i, k, spec), start); });
        sel.orders = decode(0, k, spec);
        sel.aic = aics[0];
        for (std::size_t i = 1; i < n; ++i) {
            const ArdlOrders o = decode(i, k, spec);
            if (better(aics[i], o, sel.aic, sel.orders)) {
                sel.orders = o;
                sel.aic = aics[i];
            }
        }
        sel.candidates = n;
        sel.exhaustive = true;
        return sel;
    }

    sel.exhaustive = false;
    sel.orders.g = spec.max_g;
    sel.orders.z.assign(k, spec.max_z);
    sel.aic = candidate_aic(d, spec, sel.orders, start);
    sel.candidates = 1;
    for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t coord = 0; coord <= k; ++coord) {
            const std::size_t lo = coord == 0 ? 1 : 0;
            const std::size_t hi = coord == 0 ? spec.max_g : spec.max_z;
            std::vector<ArdlOrders> trial;
            for (std::size_t v = lo; v <= hi; ++v) {
                ArdlOrders o = sel.orders;
                (coord == 0 ? o.g : o.z[coord - 1]) = v;
                if (o != sel.orders) trial.push_back(o);
            }
            std::vector<double> aics(trial.size());
            parallel_for(trial.size(),
                         [&](std::size_t i) { aics[i] = candidate_aic(d, spec, trial[i], start); });
            sel.candidates += trial.size();
            for (std::size_t i = 0; i < trial.size(); ++i) {
                if (better(aics[i], trial[i], sel.aic, sel.orders)) {
                    sel.orders = trial[i];
                    sel.aic = aics[i];
                    improved = true;
                }
            }
        }
    }
    return sel;
}

ArdlFit fit_ardl(const ArdlData& data, const ArdlSpec& spec, const ArdlOrders& orders) {
    if (orders.g > spec.max_g) throw std::invalid_argument("g exceeds max_g");
    for (auto z : orders.z) {
        if (z > spec.max_z) throw std::invalid_argument("a regressor order exceeds max_z");
    }
    ArdlFit fit;
    fit.spec = spec;
    fit.orders = orders;
    fit.start = orders.max_lag();
    ArdlDesign des = build_design(data, spec, orders, fit.start);
    fit.ols = ols::ols(des.y, des.X, std::move(des.names), true);
    fit.y = data.y;
    fit.x = data.x;
    fit.dates = data.dates;
    return fit;
}

ArdlFit fit_ardl(const ts::Dataset& data, const ArdlSpec& spec, const ArdlOrders& orders) {
    return fit_ardl(extract(data, spec), spec, orders);
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::no_long_run: return "no_long_run";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::cointegrated: return "cointegrated";
    }
    return "?";
}

Verdict classify_bounds(double f, const cv::Bounds& bounds) {
    if (f < bounds.lower) return Verdict::no_long_run;
    if (f > bounds.upper) return Verdict::cointegrated;
    return Verdict::inconclusive;
}

double bounds_f_statistic(const ArdlFit& fit) {
    const std::size_t k = fit.x.size();
    const auto q = static_cast<Eigen::Index>(k + 1);
    const auto p = static_cast<Eigen::Index>(fit.ols.n_params);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(q, p);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(q);
    R.row(0).segment(1, static_cast<Eigen::Index>(fit.orders.g)).setOnes();
    r(0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        R.row(static_cast<Eigen::Index>(j + 1))
            .segment(static_cast<Eigen::Index>(fit.beta_column(j)),
                     static_cast<Eigen::Index>(fit.orders.z[j] + 1))
            .setOnes();
    }
    const Eigen::VectorXd diff = R * fit.ols.coefficients - r;
    const Eigen::MatrixXd middle = R * fit.ols.covariance * R.transpose();
    return diff.dot(middle.ldlt().solve(diff)) / static_cast<double>(q);
}

BoundsResult bounds_test(const ArdlFit& fit, double level) {
    BoundsResult out;
    out.k = fit.x.size();
    out.level = level;
    out.f_statistic = bounds_f_statistic(fit);
    out.df1 = out.k + 1;
    out.df2 = fit.ols.nobs - fit.ols.n_params;
    out.bounds = cv::bounds_critical_values(out.k, level);
    for (double l : cv::bounds_levels()) out.table.push_back({l, cv::bounds_critical_values(out.k, l)});
    out.verdict = classify_bounds(out.f_statistic, out.bounds);
    return out;
}

namespace {

Coefficient linear_coefficient(const ArdlFit& fit, std::string name, const Eigen::VectorXd& c) {
    Coefficient out;
    out.name = std::move(name);
    out.value = c.dot(fit.ols.coefficients);
    out.std_error = std::sqrt(std::max(0.0, c.dot(fit.ols.covariance * c)));
    out.t_stat = out.std_error > 0.0 ? out.value / out.std_error : 0.0;
    const double df = static_cast<double>(fit.ols.nobs - fit.ols.n_params);
    out.p_value = out.std_error > 0.0 ? dist::student_t_two_sided(out.t_stat, df) : 1.0;
    return out;
}

std::string delta_name(const std::string& base, std::size_t i) {
    return i == 0 ? fmt::format("D.{}", base) : fmt::format("D.{}(-{})", base, i);
}

}  // namespace

EcmFit to_ecm(const ArdlFit& fit) {
    const auto p = static_cast<Eigen::Index>(fit.ols.n_params);
    const auto g = static_cast<Eigen::Index>(fit.orders.g);
    const Eigen::VectorXd phi = fit.phi();
    EcmFit ecm;
    ecm.alpha = 1.0 - phi.sum();
    if (std::abs(ecm.alpha) <= 1e-10) {
        throw NumericError(fmt::format(
            "long-run coefficients undefined: 1 - sum(phi) = {} (unit root in the lag polynomial)",
            ecm.alpha));
    }

    Eigen::VectorXd c = Eigen::VectorXd::Zero(p);
    c(0) = 1.0;
    ecm.intercept = linear_coefficient(fit, "const", c);

    // -alpha = sum(phi) - 1; the constant does not affect the variance.
    c.setZero();
    c.segment(1, g).setOnes();
    ecm.ect = linear_coefficient(fit, lag_name(fit.spec.dependent, 1), c);
    ecm.ect.value -= 1.0;
    ecm.ect.t_stat = ecm.ect.std_error > 0.0 ? ecm.ect.value / ecm.ect.std_error : 0.0;
    ecm.ect.p_value = ecm.ect.std_error > 0.0
                          ? dist::student_t_two_sided(
                                ecm.ect.t_stat, static_cast<double>(fit.ols.nobs - fit.ols.n_params))
                          : 1.0;
    ecm.alpha_se = ecm.ect.std_error;

    for (Eigen::Index i = 1; i < g; ++i) {
        c.setZero();
        c.segment(1 + i, g - i).setConstant(-1.0);
        ecm.psi_y.push_back(linear_coefficient(fit, delta_name(fit.spec.dependent, static_cast<std::size_t>(i)), c));
    }

    const double df = static_cast<double>(fit.ols.nobs - fit.ols.n_params);
    for (std::size_t j = 0; j < fit.x.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(fit.beta_column(j));
        const auto zj = static_cast<Eigen::Index>(fit.orders.z[j]);
        const std::string& name = fit.spec.regressors[j];

        // theta = S / alpha with S = sum beta_j; gradient 1/alpha on beta,
        // S/alpha^2 on phi.
        const double s = fit.beta(j).sum();
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
        grad.segment(col, zj + 1).setConstant(1.0 / ecm.alpha);
        grad.segment(1, g).setConstant(s / (ecm.alpha * ecm.alpha));
        Coefficient th;
        th.name = name;
        th.value = s / ecm.alpha;
        th.std_error = std::sqrt(std::max(0.0, grad.dot(fit.ols.covariance * grad)));
        th.t_stat = th.std_error > 0.0 ? th.value / th.std_error : 0.0;
        th.p_value = th.std_error > 0.0 ? dist::student_t_two_sided(th.t_stat, df) : 1.0;
        ecm.theta.push_back(th);

        std::vector<Coefficient> px;
        c.setZero();
        c(col) = 1.0;
        px.push_back(linear_coefficient(fit, delta_name(name, 0), c));
        for (Eigen::Index h = 1; h < zj; ++h) {
            c.setZero();
            c.segment(col + h + 1, zj - h).setConstant(-1.0);
            px.push_back(linear_coefficient(fit, delta_name(name, static_cast<std::size_t>(h)), c));
        }
        ecm.psi_x.push_back(std::move(px));
    }

    const auto rows = static_cast<Eigen::Index>(fit.ols.nobs);
    const Eigen::VectorXd y_lag = fit.y.segment(static_cast<Eigen::Index>(fit.start) - 1, rows);
    ecm.fitted = fit.ols.fitted - y_lag;
    ecm.residuals = fit.ols.residuals;
    ecm.log_likelihood = fit.ols.log_likelihood;
    return ecm;
}

Eigen::VectorXd ecm_fitted(const ArdlFit& fit, const EcmFit& ecm) {
    const auto start = static_cast<Eigen::Index>(fit.start);
    const auto rows = static_cast<Eigen::Index>(fit.ols.nobs);
    auto level = [&](const Eigen::VectorXd& v, Eigen::Index lag) { return v.segment(start - lag, rows); };
    auto delta = [&](const Eigen::VectorXd& v, Eigen::Index lag) {
        return Eigen::VectorXd(level(v, lag) - level(v, lag + 1));
    };

    Eigen::VectorXd out = Eigen::VectorXd::Constant(rows, ecm.intercept.value);
    Eigen::VectorXd disequilibrium = level(fit.y, 1);
    for (std::size_t j = 0; j < fit.x.size(); ++j) {
        disequilibrium -= ecm.theta[j].value * level(fit.x[j], 1);
    }
    out -= ecm.alpha * disequilibrium;
    for (std::size_t i = 0; i < ecm.psi_y.size(); ++i) {
        out += ecm.psi_y[i].value * delta(fit.y, static_cast<Eigen::Index>(i + 1));
    }
    for (std::size_t j = 0; j < fit.x.size(); ++j) {
        for (std::size_t h = 0; h < ecm.psi_x[j].size(); ++h) {
            out += ecm.psi_x[j][h].value * delta(fit.x[j], static_cast<Eigen::Index>(h));
        }
    }
    return out;
}

namespace {

double reciprocal_days(double v, std::string_view what) {
    const double a = std::abs(v);
    if (!(a > 0.0)) throw std::invalid_argument(fmt::format("{} must be nonzero", what));
    if (!(a <= 1.0)) throw std::invalid_argument(fmt::format("|{}| must not exceed 1, got {}", what, v));
    return 1.0 / a;
}

}  // namespace

double speed_of_adjustment_days(double alpha) { return reciprocal_days(alpha, "alpha"); }

double shock_persistence_days(double coef) { return reciprocal_days(coef, "coefficient"); }

DaysInterval days_interval_from_rounded(double rounded_alpha) {
    const double a = std::abs(rounded_alpha);
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument(fmt::format("rounded alpha must lie in (0, 1], got {}", rounded_alpha));
    }
    const double unit = std::pow(10.0, std::floor(std::log10(a)));
    const double digit = std::round(a / unit);
    const double lo_alpha = (digit - 0.5) * unit;
    const double hi_alpha = (digit + 0.5) * unit;
    return {1.0 / hi_alpha, 1.0 / lo_alpha};
}

}  // namespace powsec::ardl
