// Command-line front end for the joint tail modeling pipeline.
//
//   mevt synth      generate paired traces with known tail ground truth
//   mevt decluster  cluster minima below given thresholds
//   mevt threshold  optimal-threshold selection diagnostics
//   mevt fit-ugpd   marginal GPD fits with PP/QQ plot data
//   mevt fit-bgpd   bivariate tail model (--method logistic|ppp)
//   mevt validate   r0 selection, radial uniformity, mean constraints
//   mevt baseline   AIC/BIC margin ranking + bivariate Gaussian fit
//   mevt report     full pipeline: report.json + plot-data CSVs
//
// Exit code 0 on success; on a stage failure the stage name is printed and
// the exit code is nonzero.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mevt/pipeline.hpp"
#include "mevt/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ConfigCli {
    std::string config_path;
    mevt::PipelineConfig cfg;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "flat key=value config file");
        app->add_option("--mg", cfg.mg, "declustering gap (samples above threshold)");
        app->add_option("--mg-set", cfg.mg_set, "gaps used by threshold selection");
        app->add_option("--grid-size", cfg.grid_size, "threshold grid size");
        app->add_option("--q-deep", cfg.q_deep, "deep quantile bound of the grid");
        app->add_option("--q-shallow", cfg.q_shallow, "shallow quantile bound of the grid");
        app->add_option("--floor", cfg.floor, "minimum exceedances per threshold");
        app->add_option("--r2-min", cfg.r2_min, "linearity R^2 criterion");
        app->add_option("--noise-kappa", cfg.noise_kappa, "noise-consistency slack");
        app->add_option("--M", cfg.M, "alignment interval length in samples");
        app->add_option("--r0-critical", cfg.r0_critical, "r-omega correlation critical value");
        app->add_option("--tail-corr-critical", cfg.tail_corr_critical,
                        "tail dependence critical value");
        app->add_option("--mean-tol", cfg.mean_tol, "mean-constraint tolerance");
        app->add_option("--surface-grid", cfg.surface_grid, "joint CDF grid nodes per axis");
        app->add_option("--hl-grid", cfg.hl_grid, "h_l density grid size (odd)");
        app->add_option("--frechet-cap", cfg.frechet_cap, "clamp for beyond-endpoint fades");
        app->add_option("--diag-max-dev", cfg.diag_max_dev, "PP plot max deviation bound");
        app->add_option("--seed", cfg.seed, "seed recorded in the report");
        app->add_option("--u-x", u_x_, "fixed Rx1 threshold (skip selection)");
        app->add_option("--u-y", u_y_, "fixed Rx2 threshold (skip selection)");
        app_ = app;
    }

    // config file first, then explicit flags on top
    mevt::PipelineConfig resolve() {
        mevt::PipelineConfig base;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
            base = mevt::parse_config(in);
        }
        auto take = [&](const char* flag, auto& dst, const auto& src) {
            if (app_->count(flag) > 0) dst = src;
        };
        take("--mg", base.mg, cfg.mg);
        take("--mg-set", base.mg_set, cfg.mg_set);
        take("--grid-size", base.grid_size, cfg.grid_size);
        take("--q-deep", base.q_deep, cfg.q_deep);
        take("--q-shallow", base.q_shallow, cfg.q_shallow);
        take("--floor", base.floor, cfg.floor);
        take("--r2-min", base.r2_min, cfg.r2_min);
        take("--noise-kappa", base.noise_kappa, cfg.noise_kappa);
        take("--M", base.M, cfg.M);
        take("--r0-critical", base.r0_critical, cfg.r0_critical);
        take("--tail-corr-critical", base.tail_corr_critical, cfg.tail_corr_critical);
        take("--mean-tol", base.mean_tol, cfg.mean_tol);
        take("--surface-grid", base.surface_grid, cfg.surface_grid);
        take("--hl-grid", base.hl_grid, cfg.hl_grid);
        take("--frechet-cap", base.frechet_cap, cfg.frechet_cap);
        take("--diag-max-dev", base.diag_max_dev, cfg.diag_max_dev);
        take("--seed", base.seed, cfg.seed);
        if (app_->count("--u-x") > 0) base.u_x = u_x_;
        if (app_->count("--u-y") > 0) base.u_y = u_y_;
        return base;
    }

  private:
    CLI::App* app_ = nullptr;
    double u_x_ = 0.0, u_y_ = 0.0;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

int finish(const mevt::Report& rep, const std::string& json_path, const std::string& plots_dir) {
    if (!json_path.empty()) write_text(json_path, mevt::report_to_json(rep));
    if (!plots_dir.empty()) {
        fs::create_directories(plots_dir);
        mevt::write_plot_data(rep, plots_dir);
    }
    if (rep.failed) {
        std::cerr << "stage " << rep.failed_stage << " failed: " << rep.error << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint lower-tail modeling of paired received-power traces"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate paired traces with known tail truth");
    std::string synth_out = "traces.csv";
    double s_alpha = 0.7, s_xix = -0.2, s_sx = 5.0, s_ux = -15.0;
    double s_xiy = -0.2, s_sy = 4.0, s_uy = -30.0;
    std::size_t s_n = 1000000;
    double s_tf = 0.2;
    std::uint64_t s_seed = 1;
    std::int64_t s_window = 1000;
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--alpha", s_alpha, "logistic dependency factor");
    synth->add_option("--xi-x", s_xix, "Rx1 GPD shape");
    synth->add_option("--sigma-x", s_sx, "Rx1 GPD scale");
    synth->add_option("--u-x", s_ux, "Rx1 threshold dBm");
    synth->add_option("--xi-y", s_xiy, "Rx2 GPD shape");
    synth->add_option("--sigma-y", s_sy, "Rx2 GPD scale");
    synth->add_option("--u-y", s_uy, "Rx2 threshold dBm");
    synth->add_option("--n-total", s_n, "total samples per trace");
    synth->add_option("--tail-fraction", s_tf, "per-window marginal dip probability");
    synth->add_option("--seed", s_seed, "RNG seed");
    synth->add_option("--window", s_window, "generator window length");

    // ---- data-driven subcommands share --in + config flags ----
    struct Cmd {
        CLI::App* sub = nullptr;
        ConfigCli conf;
        std::string in, out, plots;
    };
    auto make_cmd = [&](const char* name, const char* desc, bool with_out = true,
                        bool with_plots = true) {
        Cmd c;
        c.sub = app.add_subcommand(name, desc);
        c.sub->add_option("--in", c.in, "paired trace CSV (t,rx1_dbm,rx2_dbm)")->required();
        if (with_out) c.sub->add_option("--out", c.out, "output JSON path");
        if (with_plots) c.sub->add_option("--plots", c.plots, "directory for plot-data CSVs");
        c.conf.attach(c.sub);
        return c;
    };

    Cmd c_decl = make_cmd("decluster", "cluster minima below fixed thresholds", false, false);
    std::string decl_prefix = "minima";
    c_decl.sub->add_option("--out-prefix", decl_prefix, "output prefix for minima CSVs");

    Cmd c_thr = make_cmd("threshold", "optimal-threshold selection per margin");
    Cmd c_ugpd = make_cmd("fit-ugpd", "marginal GPD fits with PP/QQ diagnostics");
    Cmd c_bgpd = make_cmd("fit-bgpd", "bivariate tail model fit");
    std::string bgpd_method = "logistic";
    c_bgpd.sub->add_option("--method", bgpd_method, "logistic or ppp")
        ->check(CLI::IsMember({"logistic", "ppp"}));
    Cmd c_val = make_cmd("validate", "model validity checks");
    Cmd c_base = make_cmd("baseline", "average-statistics baseline fits", true, false);
    Cmd c_rep = make_cmd("report", "full pipeline report", false, false);
    std::string rep_dir = "out";
    c_rep.sub->add_option("--out-dir", rep_dir, "report output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            mevt::GpdParams px{s_xix, s_sx, s_ux, 0.01};
            mevt::GpdParams py{s_xiy, s_sy, s_uy, 0.01};
            const auto tr = mevt::gen_tail_power_traces(px, py, s_alpha, s_n, s_tf, s_seed,
                                                        s_window);
            mevt::write_traces_csv(synth_out, tr.rx1, tr.rx2);
            ordered_json truth{{"alpha", tr.truth.alpha},
                               {"xi_x", tr.truth.gpd_x.xi},
                               {"sigma_x", tr.truth.gpd_x.sigma_tilde},
                               {"u_x", tr.truth.gpd_x.u},
                               {"xi_y", tr.truth.gpd_y.xi},
                               {"sigma_y", tr.truth.gpd_y.sigma_tilde},
                               {"u_y", tr.truth.gpd_y.u},
                               {"window_len", tr.truth.window_len},
                               {"tail_fraction", tr.truth.tail_fraction},
                               {"n_windows", tr.truth.n_windows},
                               {"dips_x", tr.truth.dips_x},
                               {"dips_y", tr.truth.dips_y},
                               {"joint_windows", tr.truth.joint_windows},
                               {"seed", s_seed}};
            write_text(synth_out + ".truth.json", truth.dump(2) + "\n");
            return 0;
        }

        if (c_decl.sub->parsed()) {
            auto cfg = c_decl.conf.resolve();
            if (!cfg.u_x || !cfg.u_y)
                throw std::runtime_error("decluster: --u-x and --u-y are required");
            auto [rx1, rx2] = mevt::ingest(c_decl.in);
            for (const auto& [series, u, tag] :
                 {std::tuple{&rx1, *cfg.u_x, "rx1"}, std::tuple{&rx2, *cfg.u_y, "rx2"}}) {
                const auto clusters = mevt::decluster(*series, u, cfg.mg);
                const auto minima = mevt::cluster_minima(clusters);
                std::ofstream out(decl_prefix + "_" + tag + ".csv");
                if (!out) throw std::runtime_error("cannot write minima CSV");
                out << "t,min_dbm\n";
                for (const auto& [t, v] : minima) out << t << ',' << mevt::fmt17(v) << '\n';
            }
            return 0;
        }

        auto run = [&](Cmd& c, mevt::Stage until) {
            auto cfg = c.conf.resolve();
            auto [rx1, rx2] = mevt::ingest(c.in);
            return std::pair{mevt::run_pipeline(rx1, rx2, cfg, until), cfg};
        };

        if (c_thr.sub->parsed()) {
            auto [rep, cfg] = run(c_thr, mevt::Stage::Threshold);
            if (!c_thr.out.empty()) {
                ordered_json j{{"rx1", {{"u", rep.rx1.u},
                                        {"found", rep.rx1.threshold_found},
                                        {"index", rep.rx1.threshold_index}}},
                               {"rx2", {{"u", rep.rx2.u},
                                        {"found", rep.rx2.threshold_found},
                                        {"index", rep.rx2.threshold_index}}}};
                write_text(c_thr.out, j.dump(2) + "\n");
            }
            return finish(rep, "", c_thr.plots);
        }
        if (c_ugpd.sub->parsed()) {
            auto [rep, cfg] = run(c_ugpd, mevt::Stage::FitUgpd);
            return finish(rep, c_ugpd.out, c_ugpd.plots);
        }
        if (c_bgpd.sub->parsed()) {
            auto [rep, cfg] = run(c_bgpd, mevt::Stage::Compare);
            if (!c_bgpd.out.empty()) {
                ordered_json j;
                if (bgpd_method == "logistic") {
                    j = ordered_json{{"method", "logistic"},
                                     {"rho_gumbel", rep.rho_gumbel},
                                     {"alpha_from_rho", rep.logistic_from_rho.alpha},
                                     {"alpha_mle", rep.logistic_mle.alpha},
                                     {"alpha_mle_literal", rep.logistic_mle_literal.alpha},
                                     {"mle_form_agreement", rep.mle_form_agreement},
                                     {"rmse", rep.comparison.rmse_logistic}};
                } else {
                    ordered_json atoms = ordered_json::array();
                    for (const auto& a : rep.angular_measure.atoms)
                        atoms.push_back({{"omega", a.omega}, {"mass", a.mass}});
                    j = ordered_json{{"method", "ppp"},
                                     {"r0", rep.r0_selection.r0},
                                     {"hpp_mean_raw", rep.hpp_mean_raw},
                                     {"hpp_mean_symmetrized", rep.hpp_mean_symmetrized},
                                     {"atoms", atoms},
                                     {"rmse", rep.comparison.rmse_poisson}};
                }
                write_text(c_bgpd.out, j.dump(2) + "\n");
            }
            return finish(rep, "", c_bgpd.plots);
        }
        if (c_val.sub->parsed()) {
            auto [rep, cfg] = run(c_val, mevt::Stage::Validate);
            if (!c_val.out.empty()) {
                ordered_json j{{"r0", rep.r0_selection.r0},
                               {"r0_found", rep.r0_selection.found},
                               {"corr_at_r0", rep.r0_selection.corr_at_r0},
                               {"uniformity_max_dev", rep.uniformity.max_deviation},
                               {"uniformity_pass", rep.uniformity.pass},
                               {"hl_mean", rep.hl_mean},
                               {"hl_pass", rep.hl_constraint.pass},
                               {"hpp_mean_raw", rep.hpp_mean_raw},
                               {"hpp_pass", rep.hpp_constraint.pass}};
                write_text(c_val.out, j.dump(2) + "\n");
            }
            return finish(rep, "", c_val.plots);
        }
        if (c_base.sub->parsed()) {
            auto cfg = c_base.conf.resolve();
            auto [rx1, rx2] = mevt::ingest(c_base.in);
            const auto m1 = mevt::fit_margin_candidates(rx1.dbm);
            const auto m2 = mevt::fit_margin_candidates(rx2.dbm);
            const auto g = mevt::fit_bivariate_gaussian(rx1.dbm, rx2.dbm);
            ordered_json j{{"margins_rx1", mevt::detail::to_json(m1)},
                           {"margins_rx2", mevt::detail::to_json(m2)},
                           {"gaussian", {{"mu_x", g.mu_x},
                                         {"mu_y", g.mu_y},
                                         {"sd_x", g.sd_x},
                                         {"sd_y", g.sd_y},
                                         {"rho", g.rho},
                                         {"degenerate", g.degenerate}}}};
            if (!c_base.out.empty()) write_text(c_base.out, j.dump(2) + "\n");
            return 0;
        }
        if (c_rep.sub->parsed()) {
            auto [rep, cfg] = run(c_rep, mevt::Stage::Compare);
            fs::create_directories(rep_dir);
            fs::create_directories(rep_dir + "/plots");
            write_text(rep_dir + "/report.json", mevt::report_to_json(rep));
            mevt::write_plot_data(rep, rep_dir + "/plots");
            if (rep.failed) {
                std::cerr << "stage " << rep.failed_stage << " failed: " << rep.error << "\n";
                return 1;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
