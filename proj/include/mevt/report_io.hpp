#pragma once

// Report serialization (JSON) and plot-data emission (CSV). CSV floats are
// written with 17 significant digits so files round-trip bit-exactly.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mevt/pipeline.hpp"

namespace mevt {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
        out_ << header << "\n";
    }
    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ',';
            out_ << fmt17(v);
            first = false;
        }
        out_ << '\n';
    }
    void raw_row(const std::string& s) { out_ << s << '\n'; }

  private:
    std::ofstream out_;
};

inline void write_traces_csv(const std::string& path, const PowerSeries& rx1,
                             const PowerSeries& rx2) {
    if (rx1.size() != rx2.size())
        throw std::invalid_argument("write_traces_csv: traces must be paired");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,rx1_dbm,rx2_dbm\n";
    for (std::size_t i = 0; i < rx1.size(); ++i)
        out << rx1.t[i] << ',' << fmt17(rx1.dbm[i]) << ',' << fmt17(rx2.dbm[i]) << '\n';
}

namespace detail {

using json = nlohmann::ordered_json;

inline json to_json(const GpdFit& f) {
    return json{{"xi", f.xi},
                {"sigma_tilde", f.sigma_tilde},
                {"se_xi", f.se_xi},
                {"se_sigma", f.se_sigma},
                {"loglik", f.loglik},
                {"converged", f.converged},
                {"iterations", f.iterations},
                {"method", f.method}};
}

inline json to_json(const LogisticModel& m) {
    return json{{"alpha", m.alpha},
                {"method", m.method == AlphaFitMethod::FromRho ? "from_rho" : "mle"},
                {"likelihood", m.likelihood == LogisticLikelihood::FullDensity
                                   ? "full_density"
                                   : "mixed_partial"},
                {"loglik", m.loglik},
                {"boundary", m.boundary},
                {"converged", m.converged}};
}

inline json to_json(const MarginRanking& r) {
    json cands = json::array();
    for (const auto& c : r.by_aic)
        cands.push_back(json{{"name", c.name},
                             {"params", c.params},
                             {"loglik", c.loglik},
                             {"aic", c.aic},
                             {"bic", c.bic}});
    return json{{"candidates", cands}, {"tie", r.tie}};
}

inline json to_json(const MarginReport& m) {
    return json{{"name", m.name},
                {"u", m.u},
                {"threshold_found", m.threshold_found},
                {"threshold_index", m.threshold_index},
                {"n_minima", m.n_minima},
                {"n_exceedances", m.n_exceedances},
                {"zeta_hat", m.zeta_hat},
                {"fit", to_json(m.fit)},
                {"refit", to_json(m.refit)},
                {"refit_ok", m.refit_ok},
                {"support_endpoint", m.support_endpoint},
                {"pp_max_dev", m.pp_max_dev},
                {"pp_rmse", m.pp_rmse},
                {"qq_max_dev", m.qq_max_dev},
                {"qq_rmse", m.qq_rmse},
                {"diag_pass", m.diag_pass},
                {"frechet_ks", m.frechet_ks},
                {"clamped", m.clamped}};
}

inline json config_json(const PipelineConfig& c) {
    json j{{"decluster.mg", c.mg},
           {"threshold.mg_set", c.mg_set},
           {"threshold.grid_size", c.grid_size},
           {"threshold.q_deep", c.q_deep},
           {"threshold.q_shallow", c.q_shallow},
           {"threshold.floor", c.floor},
           {"threshold.r2_min", c.r2_min},
           {"threshold.noise_kappa", c.noise_kappa},
           {"align.M", c.M},
           {"r0.critical", c.r0_critical},
           {"tail_corr.critical", c.tail_corr_critical},
           {"mean_tol", c.mean_tol},
           {"surface.grid", c.surface_grid},
           {"hl.grid", c.hl_grid},
           {"frechet.cap", c.frechet_cap},
           {"diag.max_dev", c.diag_max_dev},
           {"seed", c.seed}};
    if (c.u_x) j["u_x"] = *c.u_x;
    if (c.u_y) j["u_y"] = *c.u_y;
    return j;
}

}  // namespace detail

inline std::string report_to_json(const Report& r, int indent = 2) {
    using detail::json;
    json j;
    j["schema_version"] = r.schema_version;
    j["config"] = detail::config_json(r.config);
    j["stages_completed"] = r.stages_completed;
    j["failed"] = r.failed;
    if (r.failed) {
        j["failed_stage"] = r.failed_stage;
        j["error"] = r.error;
    }
    j["rx1"] = detail::to_json(r.rx1);
    j["rx2"] = detail::to_json(r.rx2);
    j["alignment"] = json{{"n_pairs", r.n_pairs},
                          {"rho_total", r.rho_total},
                          {"rho_tail", r.rho_tail},
                          {"diversity_verdict", r.diversity_verdict},
                          {"diversity_rationale", r.diversity_rationale},
                          {"dependence_needed", r.dependence_needed}};
    j["logistic"] = json{{"rho_gumbel", r.rho_gumbel},
                         {"from_rho", detail::to_json(r.logistic_from_rho)},
                         {"mle", detail::to_json(r.logistic_mle)},
                         {"mle_literal", detail::to_json(r.logistic_mle_literal)},
                         {"mle_form_agreement", r.mle_form_agreement}};
    {
        detail::json prof = detail::json::array();
        for (const auto& e : r.r0_selection.profile)
            prof.push_back(detail::json{{"r0", e.r0}, {"corr", e.corr}, {"retained", e.retained}});
        j["point_process"] = json{{"r0_found", r.r0_selection.found},
                                  {"r0", r.r0_selection.r0},
                                  {"corr_at_r0", r.r0_selection.corr_at_r0},
                                  {"profile", prof},
                                  {"hpp_mean_raw", r.hpp_mean_raw},
                                  {"hpp_mean_symmetrized", r.hpp_mean_symmetrized},
                                  {"hpp_atoms", r.hpp_atoms}};
    }
    j["validation"] = json{
        {"uniformity",
         json{{"max_deviation", r.uniformity.max_deviation},
              {"tolerance", r.uniformity.tolerance},
              {"retained", r.uniformity.retained},
              {"pass", r.uniformity.pass}}},
        {"hl_mean", r.hl_mean},
        {"hl_cv_phi", r.hl_cv_phi},
        {"hl_constraint", json{{"pass", r.hl_constraint.pass},
                               {"mean", r.hl_constraint.mean},
                               {"margin", r.hl_constraint.margin}}},
        {"hpp_constraint", json{{"pass", r.hpp_constraint.pass},
                                {"mean", r.hpp_constraint.mean},
                                {"margin", r.hpp_constraint.margin}}}};
    j["baseline"] = json{{"margins_rx1", detail::to_json(r.margins_rx1)},
                         {"margins_rx2", detail::to_json(r.margins_rx2)},
                         {"gaussian", json{{"mu_x", r.gaussian.mu_x},
                                           {"mu_y", r.gaussian.mu_y},
                                           {"sd_x", r.gaussian.sd_x},
                                           {"sd_y", r.gaussian.sd_y},
                                           {"rho", r.gaussian.rho},
                                           {"degenerate", r.gaussian.degenerate}}}};
    j["comparison"] = json{{"rmse_logistic", r.comparison.rmse_logistic},
                           {"rmse_poisson", r.comparison.rmse_poisson},
                           {"rmse_gaussian", r.comparison.rmse_gaussian}};
    return j.dump(indent) + "\n";
}

/// Write every figure's plot data as CSV files under `dir` (must exist).
inline void write_plot_data(const Report& r, const std::string& dir) {
    for (const auto* m : {&r.rx1, &r.rx2}) {
        for (const auto& [mg, curve] : m->selection.mrl_by_mg) {
            CsvWriter w(dir + "/mrl_" + m->name + "_mg" + std::to_string(mg) + ".csv",
                        "u_dbm,mean_excess_db,count");
            for (const auto& p : curve)
                w.row({p.u, p.mean_excess, static_cast<double>(p.count)});
        }
        for (const auto& [mg, curve] : m->selection.stability_by_mg) {
            CsvWriter w(dir + "/stability_" + m->name + "_mg" + std::to_string(mg) + ".csv",
                        "u_dbm,xi_hat,sigma_star,se_xi,se_star,n_exc,ok,converged");
            for (const auto& p : curve)
                w.row({p.u, p.xi_hat, p.sigma_star, p.se_xi, p.se_star,
                       static_cast<double>(p.n_exc), p.ok ? 1.0 : 0.0,
                       p.converged ? 1.0 : 0.0});
        }
        if (!m->pp.empty()) {
            CsvWriter w(dir + "/pp_" + m->name + ".csv", "empirical_prob,model_prob");
            for (const auto& [x, y] : m->pp) w.row({x, y});
        }
        if (!m->qq.empty()) {
            CsvWriter w(dir + "/qq_" + m->name + ".csv", "model_quantile,empirical_quantile");
            for (const auto& [x, y] : m->qq) w.row({x, y});
        }
        if (!m->frechet_std.empty()) {
            // empirical vs model CDF of the standardized transformed tail
            std::vector<double> s(m->frechet_std);
            std::sort(s.begin(), s.end());
            CsvWriter w(dir + "/frechet_cdf_" + m->name + ".csv",
                        "x_tilde,empirical_cdf,frechet_cdf");
            const double n = static_cast<double>(s.size());
            for (std::size_t i = 0; i < s.size(); ++i)
                w.row({s[i], (i + 1.0) / n, std::exp(-1.0 / s[i])});
        }
    }
    if (!r.pickands_points.empty()) {
        CsvWriter w(dir + "/r_omega.csv", "omega,r");
        for (const auto& p : r.pickands_points) w.row({p.omega, p.r});
    }
    if (!r.r0_selection.profile.empty()) {
        CsvWriter w(dir + "/r0_profile.csv", "r0,corr,retained");
        for (const auto& e : r.r0_selection.profile)
            w.row({e.r0, e.corr, static_cast<double>(e.retained)});
    }
    if (r.r0_selection.found && !r.pickands_points.empty()) {
        // conditional radial CDF against the uniform model R/r0
        std::vector<double> kept;
        for (const auto& p : r.pickands_points)
            if (p.r > r.r0_selection.r0) kept.push_back(p.r);
        std::sort(kept.begin(), kept.end());
        CsvWriter w(dir + "/radial_uniformity.csv", "r,empirical_cdf,model_cdf");
        const double n = static_cast<double>(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i)
            w.row({kept[i], (i + 1.0) / n, 1.0 - kept[i] / r.r0_selection.r0});
    }
    if (!r.hl_omega.empty()) {
        CsvWriter w(dir + "/hl_density.csv", "omega,h_l");
        for (std::size_t i = 0; i < r.hl_omega.size(); ++i)
            w.row({r.hl_omega[i], r.hl_density[i]});
    }
    if (!r.frechet_pairs.empty()) {
        CsvWriter w(dir + "/frechet_pairs.csv", "x_tilde,y_tilde,window");
        for (const auto& f : r.frechet_pairs)
            w.row({f.x_tilde, f.y_tilde, static_cast<double>(f.window)});
    }
    if (!r.comparison.empirical.empty()) {
        CsvWriter w(dir + "/surfaces.csv",
                    "x_tilde,y_tilde,empirical,logistic,poisson,gaussian");
        const auto& c = r.comparison;
        for (std::size_t i = 0; i < c.grid_x.size(); ++i)
            for (std::size_t j = 0; j < c.grid_y.size(); ++j) {
                const std::size_t k = i * c.grid_y.size() + j;
                w.row({c.grid_x[i], c.grid_y[j], c.empirical[k], c.logistic[k], c.poisson[k],
                       c.gaussian[k]});
            }
    }
}

}  // namespace mevt
