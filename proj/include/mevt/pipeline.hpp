#pragma once

// End-to-end orchestration: ingestion of paired traces, declustering,
// threshold selection, marginal GPD fits with PP/QQ checks, joint-exceedance
// alignment, Fréchet transformation, both bivariate tail fits, validity
// checks, the Gaussian-extrapolation baseline, and the joint-CDF RMSE
// comparison. Every number lands in a Report; identical config and seed
// give a byte-identical report.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevt/baseline.hpp"
#include "mevt/core.hpp"
#include "mevt/decluster.hpp"
#include "mevt/joint.hpp"
#include "mevt/logistic.hpp"
#include "mevt/poisson.hpp"
#include "mevt/synth.hpp"
#include "mevt/threshold.hpp"
#include "mevt/transforms.hpp"
#include "mevt/ugpd.hpp"
#include "mevt/validation.hpp"

namespace mevt {

struct PipelineConfig {
    int mg = 2;                       // decluster.mg
    std::vector<int> mg_set = {2, 3}; // threshold.mg_set
    std::size_t grid_size = 100;      // threshold.grid_size
    double q_deep = 0.001;            // threshold.q_deep
    double q_shallow = 0.25;          // threshold.q_shallow
    std::size_t floor = 30;           // threshold.floor
    double r2_min = 0.95;             // threshold.r2_min
    double noise_kappa = 2.0;         // threshold.noise_kappa
    std::int64_t M = 1000;            // align.M
    double r0_critical = 0.05;        // r0.critical
    double tail_corr_critical = 0.05; // tail_corr.critical
    double mean_tol = 0.05;           // mean_tol
    std::size_t surface_grid = 50;    // surface.grid
    std::size_t hl_grid = 2001;       // hl.grid
    double frechet_cap = 1e12;        // frechet.cap
    double diag_max_dev = 0.05;       // diag.max_dev
    std::uint64_t seed = 1;           // seed
    std::optional<double> u_x;        // fixed thresholds skip selection
    std::optional<double> u_y;

    void validate() const {
        if (mg < 1) throw std::invalid_argument("config: decluster.mg must be >= 1");
        if (M < 1) throw std::invalid_argument("config: align.M must be >= 1");
        if (mg_set.empty()) throw std::invalid_argument("config: threshold.mg_set empty");
        if (grid_size < 3) throw std::invalid_argument("config: threshold.grid_size too small");
        if (!(r2_min >= 0.0 && r2_min <= 1.0))
            throw std::invalid_argument("config: threshold.r2_min must lie in [0,1]");
        if (surface_grid < 2) throw std::invalid_argument("config: surface.grid too small");
        if (hl_grid < 5 || hl_grid % 2 == 0)
            throw std::invalid_argument("config: hl.grid must be odd and >= 5");
    }
};

/// Flat key=value config text; '#' starts a comment. Unknown keys are errors.
inline PipelineConfig parse_config(std::istream& in) {
    PipelineConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto l = line.find_first_not_of(" \t\r");
        if (l == std::string::npos) continue;
        auto r = line.find_last_not_of(" \t\r");
        line = line.substr(l, r - l + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(val);
        try {
            if (key == "decluster.mg") c.mg = std::stoi(val);
            else if (key == "threshold.mg_set") {
                c.mg_set.clear();
                std::stringstream ss(val);
                std::string tok;
                while (std::getline(ss, tok, ',')) c.mg_set.push_back(std::stoi(tok));
            } else if (key == "threshold.grid_size") c.grid_size = std::stoul(val);
            else if (key == "threshold.q_deep") c.q_deep = std::stod(val);
            else if (key == "threshold.q_shallow") c.q_shallow = std::stod(val);
            else if (key == "threshold.floor") c.floor = std::stoul(val);
            else if (key == "threshold.r2_min") c.r2_min = std::stod(val);
            else if (key == "threshold.noise_kappa") c.noise_kappa = std::stod(val);
            else if (key == "align.M") c.M = std::stoll(val);
            else if (key == "r0.critical") c.r0_critical = std::stod(val);
            else if (key == "tail_corr.critical") c.tail_corr_critical = std::stod(val);
            else if (key == "mean_tol") c.mean_tol = std::stod(val);
            else if (key == "surface.grid") c.surface_grid = std::stoul(val);
            else if (key == "hl.grid") c.hl_grid = std::stoul(val);
            else if (key == "frechet.cap") c.frechet_cap = std::stod(val);
            else if (key == "diag.max_dev") c.diag_max_dev = std::stod(val);
            else if (key == "seed") c.seed = std::stoull(val);
            else if (key == "u_x") c.u_x = std::stod(val);
            else if (key == "u_y") c.u_y = std::stod(val);
            else
                throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad value for " + key);
        }
    }
    return c;
}

/// Read paired traces from CSV with header `t,rx1_dbm,rx2_dbm`.
/// Malformed rows are rejected with their 1-based line number.
inline std::pair<PowerSeries, PowerSeries> ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("ingest: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,rx1_dbm,rx2_dbm")
        throw std::runtime_error("ingest: line 1: expected header t,rx1_dbm,rx2_dbm");
    PowerSeries a, b;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error("ingest: line " + std::to_string(lineno) +
                                     ": expected 3 comma-separated fields");
        try {
            std::size_t used = 0;
            const std::string f0 = line.substr(0, c1);
            const long long t = std::stoll(f0, &used);
            if (used != f0.size()) throw std::invalid_argument("trailing");
            const std::string f1 = line.substr(c1 + 1, c2 - c1 - 1);
            const double v1 = std::stod(f1, &used);
            if (used != f1.size()) throw std::invalid_argument("trailing");
            const std::string f2 = line.substr(c2 + 1);
            const double v2 = std::stod(f2, &used);
            if (used != f2.size()) throw std::invalid_argument("trailing");
            if (!std::isfinite(v1) || !std::isfinite(v2)) throw std::invalid_argument("nonfinite");
            a.t.push_back(t);
            a.dbm.push_back(v1);
            b.t.push_back(t);
            b.dbm.push_back(v2);
        } catch (const std::exception&) {
            throw std::runtime_error("ingest: line " + std::to_string(lineno) +
                                     ": malformed row '" + line + "'");
        }
    }
    if (a.size() == 0) throw std::runtime_error("ingest: no data rows in " + path);
    a.validate();
    b.validate();
    return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// report

struct MarginReport {
    std::string name;
    double u = 0.0;
    bool threshold_found = false;
    std::size_t threshold_index = 0;
    std::size_t n_minima = 0;
    std::size_t n_exceedances = 0;
    double zeta_hat = 0.0;
    GpdFit fit;                 // on all cluster minima below u
    GpdFit refit;               // on aligned exceedances
    bool refit_ok = false;
    double pp_max_dev = 0.0, pp_rmse = 0.0;
    double qq_max_dev = 0.0, qq_rmse = 0.0;
    bool diag_pass = false;
    double frechet_ks = 1.0;    // within-tail standardized margin check
    std::size_t clamped = 0;
    double support_endpoint = 0.0;
    ThresholdSelection selection;  // diagnostics (curves per mg)
    // plot data, not serialized into the JSON report
    std::vector<std::pair<double, double>> pp, qq;
    std::vector<double> frechet_std;  // standardized transformed exceedances
};

struct ComparisonReport {
    std::vector<double> grid_x, grid_y;  // Fréchet-scale nodes
    std::vector<double> empirical, logistic, poisson, gaussian;  // row-major
    double rmse_logistic = 0.0;
    double rmse_poisson = 0.0;
    double rmse_gaussian = 0.0;
};

struct Report {
    std::string schema_version = "1";
    PipelineConfig config;
    std::vector<std::string> stages_completed;
    bool failed = false;
    std::string failed_stage;
    std::string error;

    MarginReport rx1, rx2;

    // alignment + correlation
    std::size_t n_pairs = 0;
    double rho_total = 0.0;
    double rho_tail = 0.0;
    std::string diversity_verdict;
    std::string diversity_rationale;
    bool dependence_needed = false;

    // logistic fits
    double rho_gumbel = 0.0;  // corr of log-transformed Fréchet pairs
    LogisticModel logistic_from_rho;
    LogisticModel logistic_mle;
    LogisticModel logistic_mle_literal;
    double mle_form_agreement = 0.0;

    // point-process model
    R0Selection r0_selection;
    AngularMeasure angular_measure;  // symmetrized, used for CDF evaluation
    double hpp_mean_raw = 0.5;
    double hpp_mean_symmetrized = 0.5;
    std::size_t hpp_atoms = 0;
    UniformityResult uniformity;
    double hl_mean = 0.5;
    double hl_cv_phi = 0.0;
    MeanConstraintResult hl_constraint;
    MeanConstraintResult hpp_constraint;

    // baseline
    MarginRanking margins_rx1, margins_rx2;
    BivariateGaussian gaussian;

    ComparisonReport comparison;

    // intermediates retained for plot emission, not serialized
    std::vector<FrechetPair> frechet_pairs;
    std::vector<PickandsPoint> pickands_points;
    std::vector<double> hl_omega, hl_density;
};

enum class Stage { Threshold, FitUgpd, Align, Transform, Bgpd, Validate, Baseline, Compare };

namespace detail {

struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string st, const std::string& msg)
        : std::runtime_error(msg), stage(std::move(st)) {}
};

// inverse of the Fréchet transform: Fréchet value -> dBm level
inline double frechet_to_dbm(double xt, const GpdParams& p) {
    const double U = -std::expm1(-1.0 / xt);       // lower-tail probability
    const double s = std::min(U / p.zeta, 1.0);    // depth survival
    return p.u - gpd_quantile(1.0 - s, p);
}

// conditional joint tail CDF of a BEV model given a joint exceedance:
// rectangle probability over ((cx,a] x (cy,b]) / P(both beyond threshold)
template <typename GFn>
inline double conditional_rect(GFn&& G, double a, double b, double cx, double cy) {
    const double num = G(a, b) - G(cx, b) - G(a, cy) + G(cx, cy);
    const double den = 1.0 - std::exp(-1.0 / cx) - std::exp(-1.0 / cy) + G(cx, cy);
    if (!(den > 0.0)) return 0.0;
    return std::max(0.0, std::min(1.0, num / den));
}

inline std::vector<double> quantile_grid(std::vector<double> v, std::size_t count,
                                         double q_lo, double q_hi) {
    std::sort(v.begin(), v.end());
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double q =
            q_lo + (q_hi - q_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        const double pos = q * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        g[i] = lo + 1 < v.size() ? v[lo] * (1.0 - frac) + v[lo + 1] * frac : v[lo];
    }
    return g;
}

}  // namespace detail

/// Run the modeling pipeline on paired traces, optionally stopping after an
/// intermediate stage. Stage failures mark the report as failed with the
/// stage name; everything computed so far is retained.
inline Report run_pipeline(const PowerSeries& rx1, const PowerSeries& rx2,
                           const PipelineConfig& cfg, Stage until = Stage::Compare) {
    cfg.validate();
    rx1.validate();
    rx2.validate();
    if (rx1.size() != rx2.size())
        throw std::invalid_argument("run_pipeline: traces must be paired (equal length)");

    Report rep;
    rep.config = cfg;
    rep.rx1.name = "rx1";
    rep.rx2.name = "rx2";

    std::vector<std::pair<std::int64_t, double>> minima_x, minima_y;
    auto& fr = rep.frechet_pairs;
    auto& pk = rep.pickands_points;
    JointTailSample aligned;
    GpdParams tp_x, tp_y;  // transform parameters per margin

    auto stage = [&](Stage s, const char* name, auto&& body) {
        if (static_cast<int>(s) > static_cast<int>(until) || rep.failed) return;
        try {
            body();
            rep.stages_completed.push_back(name);
        } catch (const std::exception& e) {
            rep.failed = true;
            rep.failed_stage = name;
            rep.error = e.what();
        }
    };

    // per-margin threshold selection on cluster minima, then the final
    // decluster at the chosen threshold
    auto run_margin = [&](const PowerSeries& s, MarginReport& mr, std::optional<double> fixed_u,
                          std::vector<std::pair<std::int64_t, double>>& minima_out) {
        std::vector<double> sorted(s.dbm);
        std::sort(sorted.begin(), sorted.end());
        const double u_base =
            sorted[static_cast<std::size_t>(cfg.q_shallow * static_cast<double>(sorted.size() - 1))];

        if (fixed_u) {
            mr.u = *fixed_u;
            mr.threshold_found = true;
        } else {
            std::map<int, std::vector<double>> minima_by_mg;
            for (int mg : cfg.mg_set) {
                auto cl = decluster(s, u_base, mg);
                auto& v = minima_by_mg[mg];
                v.reserve(cl.size());
                for (const auto& c : cl) v.push_back(c.minimum);
            }
            const auto& any = minima_by_mg.begin()->second;
            if (any.size() < 2)
                throw std::runtime_error(mr.name + ": no sub-threshold clusters to analyze");
            auto grid = default_threshold_grid(any, cfg.grid_size, cfg.q_deep, cfg.q_shallow);
            mr.selection =
                select_threshold(minima_by_mg, grid, cfg.r2_min, cfg.floor, cfg.noise_kappa);
            if (!mr.selection.found)
                throw std::runtime_error(mr.name +
                                         ": no threshold satisfies the linearity criterion");
            mr.u = mr.selection.u_opt;
            mr.threshold_index = mr.selection.index;
            mr.threshold_found = true;
        }

        auto clusters = decluster(s, mr.u, cfg.mg);
        minima_out = cluster_minima(clusters);
        mr.n_minima = minima_out.size();
        std::size_t below = 0;
        for (double v : s.dbm)
            if (v < mr.u) ++below;
        mr.zeta_hat = static_cast<double>(below) / static_cast<double>(s.size());
    };

    stage(Stage::Threshold, "threshold", [&] {
        run_margin(rx1, rep.rx1, cfg.u_x, minima_x);
        run_margin(rx2, rep.rx2, cfg.u_y, minima_y);
    });

    auto fit_margin = [&](MarginReport& mr,
                          const std::vector<std::pair<std::int64_t, double>>& minima) {
        std::vector<double> exc;
        exc.reserve(minima.size());
        for (const auto& [t, v] : minima) exc.push_back(mr.u - v);
        mr.n_exceedances = exc.size();
        mr.fit = fit_gpd_mle(exc);
        GpdParams p{mr.fit.xi, mr.fit.sigma_tilde, mr.u, mr.zeta_hat};
        mr.support_endpoint = gpd_support_endpoint(p);
        mr.pp = pp_points(exc, p);
        mr.qq = qq_points(exc, p);
        auto [pmx, prm] = diagonal_deviation(mr.pp);
        mr.pp_max_dev = pmx;
        mr.pp_rmse = prm;
        auto [qmx, qrm] = diagonal_deviation(mr.qq);
        mr.qq_max_dev = qmx;
        mr.qq_rmse = qrm;
        mr.diag_pass = mr.pp_max_dev < cfg.diag_max_dev;

        // margin check on the within-tail standardized transform: with a
        // good fit the depth survival is uniform, so -1/log(1-surv) is unit
        // Fréchet over the full support and the KS bound applies
        GpdParams std_p = p;
        std_p.zeta = 1.0 - 1e-12;
        mr.frechet_std.reserve(exc.size());
        for (const auto& [t, v] : minima)
            mr.frechet_std.push_back(frechet_transform(v, std_p, cfg.frechet_cap, &mr.clamped));
        mr.frechet_ks = frechet_margin_ks(mr.frechet_std);
    };

    stage(Stage::FitUgpd, "fit-ugpd", [&] {
        fit_margin(rep.rx1, minima_x);
        fit_margin(rep.rx2, minima_y);
    });

    stage(Stage::Align, "align", [&] {
        aligned = align_joint_exceedances(minima_x, minima_y, rep.rx1.u, rep.rx2.u, cfg.M);
        rep.n_pairs = aligned.pairs.size();
        rep.rho_total = pearson_correlation(rx1.dbm, rx2.dbm);
        const auto dec = spatial_diversity_feasible(rep.rho_total);
        rep.diversity_verdict = dec.verdict == DiversityVerdict::Suggested ? "suggested"
                                : dec.verdict == DiversityVerdict::Pointless ? "pointless"
                                                                             : "independent";
        rep.diversity_rationale = dec.rationale;
        if (rep.n_pairs >= 2) {
            std::vector<double> px, py;
            for (const auto& p : aligned.pairs) {
                px.push_back(p.x);
                py.push_back(p.y);
            }
            rep.rho_tail = pearson_correlation(px, py);
            rep.dependence_needed = tail_dependence_needed(rep.rho_tail, cfg.tail_corr_critical);
        }
    });

    stage(Stage::Transform, "transform", [&] {
        if (rep.n_pairs < 30)
            throw std::runtime_error("only " + std::to_string(rep.n_pairs) +
                                     " joint exceedance pairs; need 30");
        // refit the margins on the aligned exceedances (reported alongside
        // the full-margin fit)
        std::vector<double> ex, ey;
        for (const auto& p : aligned.pairs) {
            ex.push_back(rep.rx1.u - p.x);
            ey.push_back(rep.rx2.u - p.y);
        }
        rep.rx1.refit = fit_gpd_mle(ex);
        rep.rx1.refit_ok = rep.rx1.refit.converged;
        rep.rx2.refit = fit_gpd_mle(ey);
        rep.rx2.refit_ok = rep.rx2.refit.converged;
        // the transform needs the unconditional marginal law: zeta * depth
        // survival is Pr(X < x) over the whole population, so the
        // all-minima fit parameterizes it, not the joint-conditioned refit
        tp_x = GpdParams{rep.rx1.fit.xi, rep.rx1.fit.sigma_tilde, rep.rx1.u, rep.rx1.zeta_hat};
        tp_y = GpdParams{rep.rx2.fit.xi, rep.rx2.fit.sigma_tilde, rep.rx2.u, rep.rx2.zeta_hat};
        fr.reserve(aligned.pairs.size());
        for (const auto& p : aligned.pairs) {
            FrechetPair f;
            f.x_tilde = frechet_transform(p.x, tp_x, cfg.frechet_cap, &rep.rx1.clamped);
            f.y_tilde = frechet_transform(p.y, tp_y, cfg.frechet_cap, &rep.rx2.clamped);
            f.window = p.window;
            fr.push_back(f);
        }
        pk.reserve(fr.size());
        const auto n = static_cast<std::int64_t>(fr.size());
        for (const auto& f : fr) pk.push_back(pickands_transform(f, n));
    });

    stage(Stage::Bgpd, "fit-bgpd", [&] {
        std::vector<double> lx, ly;
        for (const auto& f : fr) {
            lx.push_back(std::log(f.x_tilde));
            ly.push_back(std::log(f.y_tilde));
        }
        // dependency from the correlation on the Gumbel (log-Fréchet) scale,
        // where the logistic identity rho = 1 - alpha^2 applies
        rep.rho_gumbel = pearson_correlation(lx, ly);
        rep.logistic_from_rho = alpha_from_rho(std::max(0.0, rep.rho_gumbel));
        rep.logistic_mle = fit_alpha_mle(fr, LogisticLikelihood::FullDensity);
        rep.logistic_mle_literal = fit_alpha_mle(fr, LogisticLikelihood::MixedPartialOnly);
        rep.mle_form_agreement =
            std::fabs(rep.logistic_mle.alpha - rep.logistic_mle_literal.alpha);

        rep.r0_selection = select_r0(pk, cfg.r0_critical);
        if (!rep.r0_selection.found)
            throw std::runtime_error("no radial cut-off satisfies the correlation criterion");
        const auto H_raw = estimate_angular_measure(pk, rep.r0_selection.r0, false);
        rep.angular_measure = estimate_angular_measure(pk, rep.r0_selection.r0, true);
        rep.hpp_mean_raw = H_raw.mean();
        rep.hpp_mean_symmetrized = rep.angular_measure.mean();
        rep.hpp_atoms = rep.angular_measure.atoms.size();
    });

    stage(Stage::Validate, "validate", [&] {
        rep.uniformity = radial_uniformity(pk, rep.r0_selection.r0);
        const auto hl = h_l_density(pk, rep.r0_selection.r0, rep.logistic_from_rho,
                                    static_cast<std::int64_t>(fr.size()), cfg.hl_grid);
        rep.hl_mean = hl.mean;
        rep.hl_cv_phi = hl.cv_phi;
        rep.hl_omega = hl.omega;
        rep.hl_density = hl.density;
        rep.hl_constraint = mean_constraint_check(hl.mean, cfg.mean_tol);
        rep.hpp_constraint = mean_constraint_check(rep.hpp_mean_raw, cfg.mean_tol);
    });

    stage(Stage::Baseline, "baseline", [&] {
        rep.margins_rx1 = fit_margin_candidates(rx1.dbm);
        rep.margins_rx2 = fit_margin_candidates(rx2.dbm);
        rep.gaussian = fit_bivariate_gaussian(rx1.dbm, rx2.dbm);
    });

    stage(Stage::Compare, "compare", [&] {
        std::vector<double> xs, ys;
        for (const auto& f : fr) {
            xs.push_back(f.x_tilde);
            ys.push_back(f.y_tilde);
        }
        auto& cmp = rep.comparison;
        cmp.grid_x = detail::quantile_grid(xs, cfg.surface_grid, 0.02, 0.98);
        cmp.grid_y = detail::quantile_grid(ys, cfg.surface_grid, 0.02, 0.98);
        cmp.empirical = brute_force_joint_cdf(xs, ys, cmp.grid_x, cmp.grid_y);

        const double cx = -1.0 / std::log1p(-rep.rx1.zeta_hat);  // transform at u-
        const double cy = -1.0 / std::log1p(-rep.rx2.zeta_hat);
        const double al = rep.logistic_from_rho.alpha;
        const auto& H_sym = rep.angular_measure;

        const double zx = (rep.rx1.u - rep.gaussian.mu_x) / rep.gaussian.sd_x;
        const double zy = (rep.rx2.u - rep.gaussian.mu_y) / rep.gaussian.sd_y;
        const double gden = bvn_cdf(zx, zy, rep.gaussian.rho);

        cmp.logistic.resize(cmp.empirical.size());
        cmp.poisson.resize(cmp.empirical.size());
        cmp.gaussian.resize(cmp.empirical.size());
        for (std::size_t i = 0; i < cmp.grid_x.size(); ++i) {
            const double a = cmp.grid_x[i];
            const double adbm = detail::frechet_to_dbm(a, tp_x);
            for (std::size_t j = 0; j < cmp.grid_y.size(); ++j) {
                const double b = cmp.grid_y[j];
                const std::size_t k = i * cmp.grid_y.size() + j;
                cmp.logistic[k] = detail::conditional_rect(
                    [&](double p, double q) { return std::exp(-v_logistic(p, q, al)); }, a, b,
                    cx, cy);
                cmp.poisson[k] = detail::conditional_rect(
                    [&](double p, double q) { return g_poisson(p, q, H_sym); }, a, b, cx, cy);
                const double bdbm = detail::frechet_to_dbm(b, tp_y);
                const double za = (adbm - rep.gaussian.mu_x) / rep.gaussian.sd_x;
                const double zb = (bdbm - rep.gaussian.mu_y) / rep.gaussian.sd_y;
                // P(a' <= X < u_x, b' <= Y < u_y) / P(X < u_x, Y < u_y)
                const double num = gden - bvn_cdf(za, zy, rep.gaussian.rho) -
                                   bvn_cdf(zx, zb, rep.gaussian.rho) +
                                   bvn_cdf(za, zb, rep.gaussian.rho);
                cmp.gaussian[k] = gden > 0.0 ? std::max(0.0, std::min(1.0, num / gden)) : 0.0;
            }
        }
        cmp.rmse_logistic = rmse_joint_cdf(cmp.logistic, cmp.empirical);
        cmp.rmse_poisson = rmse_joint_cdf(cmp.poisson, cmp.empirical);
        cmp.rmse_gaussian = rmse_joint_cdf(cmp.gaussian, cmp.empirical);
    });

    return rep;
}

}  // namespace mevt
