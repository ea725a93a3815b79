#include <algorithm>
#include <cmath>
#include <limits>

#include "kcn/error.hpp"
#include "kcn/macro.hpp"

namespace kcn {

PowerLawFit fit_power_law(const std::vector<double>& values, PowerLawModel model) {
    if (values.size() < kMinTailPoints) {
        throw Error("fit_power_law: need at least " + std::to_string(kMinTailPoints) + " values");
    }
    std::vector<double> x = values;
    for (double v : x) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("fit_power_law: values must be positive and finite");
    }
    std::sort(x.begin(), x.end());

    const bool discrete = model == PowerLawModel::discrete;
    const double shift = discrete ? 0.5 : 0.0;
    const std::size_t n = x.size();

    std::vector<double> log_t(n);
    for (std::size_t i = 0; i < n; ++i) log_t[i] = x[i] - shift > 0.0 ? std::log(x[i] - shift) : 0.0;
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + log_t[i];

    // Start index of each run of equal values.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || x[i] != x[i - 1]) starts.push_back(i);
    }
    starts.push_back(n);

    PowerLawFit best;
    double best_ks = std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
        const std::size_t first = starts[s];
        const std::size_t n_tail = n - first;
        if (n_tail < kMinTailPoints) break;
        if (x[first] - shift <= 0.0) continue;

        const double log_min = log_t[first];
        const double spread = suffix[first] - static_cast<double>(n_tail) * log_min;
        if (!(spread > 0.0)) continue;
        const double alpha = 1.0 + static_cast<double>(n_tail) / spread;

        double ks = 0.0;
        const double tail = static_cast<double>(n_tail);
        for (std::size_t r = s; r + 1 < starts.size(); ++r) {
            const double below = static_cast<double>(starts[r] - first) / tail;
            const double upto = static_cast<double>(starts[r + 1] - first) / tail;
            const double fitted_cdf = 1.0 - std::exp((1.0 - alpha) * (log_t[starts[r]] - log_min));
            ks = std::max(ks, std::abs(fitted_cdf - below));
            if (!discrete) ks = std::max(ks, std::abs(upto - fitted_cdf));
        }

        if (ks < best_ks) {
            best_ks = ks;
            best.alpha = alpha;
            best.xmin = x[first];
            best.ks_stat = ks;
            best.n_tail = n_tail;
            best.sigma = (alpha - 1.0) / std::sqrt(tail);
        }
    }

    if (!std::isfinite(best_ks)) {
        throw Error("fit_power_law: insufficient tail (no cutoff leaves " + std::to_string(kMinTailPoints) +
                    " points with positive log spread)");
    }
    return best;
}

}  // namespace kcn
