#pragma once

// Runs-style declustering of a power trace below a threshold (deep fades).
// A cluster opens at the first sample strictly below u, keeps absorbing
// sub-threshold samples, and survives up to mg consecutive above-threshold
// samples before closing. Cluster minima are treated downstream as
// approximately i.i.d. tail observations.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mevt/core.hpp"

namespace mevt {

struct Cluster {
    std::int64_t start = 0;      // time step of first sub-threshold sample
    std::int64_t end = 0;        // time step of last sub-threshold sample
    double minimum = 0.0;        // dBm
    std::int64_t min_index = 0;  // earliest step attaining the minimum
};

inline std::vector<Cluster> decluster(const PowerSeries& series, double u, int mg) {
    if (mg < 1) throw std::invalid_argument("decluster: mg must be >= 1");
    if (series.size() == 0) throw std::invalid_argument("decluster: empty series");

    std::vector<Cluster> out;
    bool open = false;
    int gap = 0;
    Cluster cur;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = series.dbm[i];
        const std::int64_t ti = series.t[i];
        if (x < u) {
            if (!open) {
                cur = Cluster{ti, ti, x, ti};
                open = true;
            } else {
                cur.end = ti;
                if (x < cur.minimum) {  // ties keep the earliest index
                    cur.minimum = x;
                    cur.min_index = ti;
                }
            }
            gap = 0;
        } else if (open) {
            if (++gap > mg) {
                out.push_back(cur);
                open = false;
                gap = 0;
            }
        }
    }
    if (open) out.push_back(cur);  // still open at end-of-series
    return out;
}

/// Ordered (time step, dBm) minima, one per cluster.
inline std::vector<std::pair<std::int64_t, double>> cluster_minima(
    const std::vector<Cluster>& clusters) {
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.emplace_back(c.min_index, c.minimum);
    return out;
}

}  // namespace mevt
