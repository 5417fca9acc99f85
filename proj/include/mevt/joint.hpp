#pragma once

// Bivariate tail sample construction: per-interval simultaneous exceedances
// of both receivers, plus the correlation-based feasibility checks that
// decide whether joint tail modeling is warranted.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mevt/core.hpp"

namespace mevt {

struct JointPair {
    double x = 0.0;  // dBm, deepest Rx1 minimum of the interval
    double y = 0.0;  // dBm, deepest Rx2 minimum of the interval
    std::int64_t window = 0;
};

struct JointTailSample {
    std::vector<JointPair> pairs;
    double u_x = 0.0;
    double u_y = 0.0;
    std::int64_t interval_len = 0;  // M samples per interval
};

/// Partition time into consecutive windows of M samples; a window
/// contributes one pair (the deepest minimum of each series inside it) iff
/// both series have a cluster minimum below their thresholds in the window.
inline JointTailSample align_joint_exceedances(
    std::span<const std::pair<std::int64_t, double>> minima_x,
    std::span<const std::pair<std::int64_t, double>> minima_y, double u_x, double u_y,
    std::int64_t M) {
    if (M < 1) throw std::invalid_argument("align_joint_exceedances: M must be >= 1");
    JointTailSample out;
    out.u_x = u_x;
    out.u_y = u_y;
    out.interval_len = M;

    std::size_t ix = 0, iy = 0;
    while (ix < minima_x.size() && iy < minima_y.size()) {
        const std::int64_t wx = minima_x[ix].first / M;
        const std::int64_t wy = minima_y[iy].first / M;
        if (wx < wy) {
            ++ix;
            continue;
        }
        if (wy < wx) {
            ++iy;
            continue;
        }
        const std::int64_t w = wx;
        double bx = kInf, by = kInf;
        for (; ix < minima_x.size() && minima_x[ix].first / M == w; ++ix)
            if (minima_x[ix].second < u_x) bx = std::min(bx, minima_x[ix].second);
        for (; iy < minima_y.size() && minima_y[iy].first / M == w; ++iy)
            if (minima_y[iy].second < u_y) by = std::min(by, minima_y[iy].second);
        if (bx < u_x && by < u_y) out.pairs.push_back({bx, by, w});
    }
    return out;
}

/// Sample Pearson correlation coefficient.
inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_correlation: need equal lengths >= 2");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        throw std::domain_error("pearson_correlation: zero variance");
    return sab / std::sqrt(saa * sbb);
}

enum class DiversityVerdict { Suggested, Pointless, IndependentLinks };

struct DiversityDecision {
    DiversityVerdict verdict;
    std::string rationale;
};

/// Spatial-diversity feasibility from the total-sample correlation:
/// suggested for 0.1 <= rho <= 0.5, pointless above (concurrent fading),
/// effectively independent links below.
inline DiversityDecision spatial_diversity_feasible(double rho_total) {
    if (!(std::fabs(rho_total) <= 1.0))
        throw std::invalid_argument("spatial_diversity_feasible: |rho| must be <= 1");
    if (rho_total > 0.5)
        return {DiversityVerdict::Pointless,
                "correlation above 0.5: links fade together, spatial diversity adds little"};
    if (rho_total >= 0.1)
        return {DiversityVerdict::Suggested,
                "correlation in [0.1, 0.5]: links partially correlated, spatial diversity suggested"};
    return {DiversityVerdict::IndependentLinks,
            "correlation below 0.1: links effectively independent"};
}

/// True iff the tail correlation exceeds the independence critical value
/// (strict inequality), i.e. joint tail modeling is needed.
inline bool tail_dependence_needed(double rho_tail, double critical = 0.05) {
    return std::fabs(rho_tail) > critical;
}

}  // namespace mevt
