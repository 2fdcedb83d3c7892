#include "powsec/pipeline.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "powsec/error.hpp"

namespace powsec::pipeline {

namespace {

template <class Fn>
auto staged(std::string_view stage, Fn&& fn) {
    auto label = [&](const std::exception& e) { return fmt::format("[{}] {}", stage, e.what()); };
    try {
        return fn();
    } catch (const PretestRefusal&) {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(label(e));
    } catch (const DataError& e) {
        throw DataError(label(e));
    } catch (const NumericError& e) {
        throw NumericError(label(e));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(label(e));
    } catch (const std::out_of_range& e) {
        throw ConfigError(label(e));
    }
}

ts::Dataset differenced(const ts::Dataset& data, const ardl::ArdlSpec& spec) {
    std::vector<ts::Series> cols;
    cols.push_back(ts::difference(data.column(spec.dependent)));
    for (const auto& r : spec.regressors) cols.push_back(ts::difference(data.column(r)));
    return ts::align(cols);
}

}  // namespace

PipelineReport run_pipeline(const ts::Dataset& data, const ModelSpec& model,
                            const PipelineOptions& options) {
    PipelineReport rep;
    rep.model = model.name;
    rep.spec = model.ardl;
    staged("spec", [&] {
        model.ardl.validate();
        std::vector<std::string> cols{model.ardl.dependent};
        cols.insert(cols.end(), model.ardl.regressors.begin(), model.ardl.regressors.end());
        for (const auto& c : cols) {
            if (!data.has(c)) throw ConfigError(fmt::format("dataset has no column '{}'", c));
        }
        rep.summary = ts::describe(data.select(cols));
    });

    if (options.pretests) {
        staged("pretest", [&] {
            std::vector<std::string> cols{model.ardl.dependent};
            cols.insert(cols.end(), model.ardl.regressors.begin(), model.ardl.regressors.end());
            for (const auto& c : cols) {
                rep.pretests.push_back(
                    {c, ur::classify_integration(data.column(c).values(), options.deterministic)});
            }
        });
        for (const auto& p : rep.pretests) {
            if (p.report.order == ur::Integration::I2plus) {
                throw PretestRefusal(fmt::format(
                    "[pretest] '{}' is integrated of order two or higher; bounds-test critical "
                    "values do not apply, refusing to estimate model '{}'",
                    p.name, model.name));
            }
        }
    }

    staged("order selection", [&] {
        if (model.orders) {
            rep.selection.orders = *model.orders;
            rep.selection.candidates = 1;
        } else {
            rep.selection = ardl::select_orders(data, model.ardl);
        }
    });
    staged("fit", [&] { rep.fit = ardl::fit_ardl(data, model.ardl, rep.selection.orders); });
    if (model.orders) rep.selection.aic = rep.fit.aic();
    staged("bounds test", [&] { rep.bounds = ardl::bounds_test(rep.fit, options.level); });

    try {
        rep.ecm = ardl::to_ecm(rep.fit);
    } catch (const NumericError& e) {
        rep.ecm_error = e.what();
    }

    if (rep.bounds.verdict == ardl::Verdict::no_long_run) {
        staged("difference model", [&] {
            const ts::Dataset d = differenced(data, model.ardl);
            ardl::ArdlSpec dspec = model.ardl;
            dspec.dependent = "D." + dspec.dependent;
            for (auto& r : dspec.regressors) r = "D." + r;
            std::vector<ts::Series> renamed;
            for (std::size_t i = 0; i < d.columns().size(); ++i) {
                const std::string& name = i == 0 ? dspec.dependent : dspec.regressors[i - 1];
                renamed.push_back(d.columns()[i].renamed(name));
            }
            const ts::Dataset dd(std::vector<ts::Date>(d.index().begin(), d.index().end()), renamed);
            rep.difference_model = ardl::fit_ardl(dd, dspec, rep.selection.orders);
        });
    }

    staged("diagnostics", [&] {
        diag::DiagnosticsOptions o;
        o.serial_lags = options.serial_lags;
        rep.diagnostics = diag::run_diagnostics(rep.fit.ols, o);
    });
    return rep;
}

}  // namespace powsec::pipeline
