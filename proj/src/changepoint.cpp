#include "chd/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "chd/error.hpp"
#include "chd/rng.hpp"

namespace chd {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)

// Two-pass maximum-likelihood variance of x, floored.
double mle_variance(std::span<const double> x, double floor) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::max(ss / static_cast<double>(x.size()), floor);
}

// Welford running variances of every prefix; out[m] is the MLE variance of
// the first m points (m >= 1).
void prefix_variances(std::span<const double> x, std::vector<double>& out, bool reversed) {
    const std::size_t n = x.size();
    out.assign(n + 1, 0.0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const double v = reversed ? x[n - m] : x[m - 1];
        const double d = v - mean;
        mean += d / static_cast<double>(m);
        m2 += d * (v - mean);
        out[m] = std::max(m2, 0.0) / static_cast<double>(m);
    }
}

}  // namespace

double sic_null(std::span<const double> x, std::size_t min_length, double var_floor) {
    const std::size_t n = x.size();
    if (n < min_length) throw SequenceTooShort(n, min_length);
    const double nd = static_cast<double>(n);
    return nd * kLog2Pi + nd * std::log(mle_variance(x, var_floor)) + nd + 2.0 * std::log(nd);
}

double sic_alt(std::span<const double> x, std::size_t k, double var_floor) {
    const std::size_t n = x.size();
    if (n < 4 || k < 2 || k > n - 2)
        throw ContractViolation("sic_alt: split " + std::to_string(k) + " outside [2, " +
                                std::to_string(n < 2 ? 0 : n - 2) + "]");
    const double nd = static_cast<double>(n);
    const double v1 = mle_variance(x.subspan(0, k), var_floor);
    const double v2 = mle_variance(x.subspan(k), var_floor);
    return nd * kLog2Pi + double(k) * std::log(v1) + double(n - k) * std::log(v2) + nd + 4.0 * std::log(nd);
}

SicScan scan_sic(std::span<const double> x, double var_floor) {
    const std::size_t n = x.size();
    if (n < 4) throw SequenceTooShort(n, 4);
    std::vector<double> fwd, bwd;
    prefix_variances(x, fwd, false);
    prefix_variances(x, bwd, true);

    const double nd = static_cast<double>(n);
    const double common = nd * kLog2Pi + nd;
    SicScan scan;
    scan.null_sic = common + nd * std::log(std::max(fwd[n], var_floor)) + 2.0 * std::log(nd);
    const double penalty = 4.0 * std::log(nd);
    bool first = true;
    for (std::size_t k = 2; k + 2 <= n; ++k) {
        const double v1 = std::max(fwd[k], var_floor);
        const double v2 = std::max(bwd[n - k], var_floor);
        const double sic = common + double(k) * std::log(v1) + double(n - k) * std::log(v2) + penalty;
        if (first || sic < scan.best_sic) {
            scan.best_sic = sic;
            scan.best_k = k;
            first = false;
        }
    }
    return scan;
}

ChangeDecision detect_change(std::span<const double> x, const ChangeOptions& options) {
    const std::size_t min_length = std::max<std::size_t>(options.min_length, 4);
    if (x.size() < min_length) throw SequenceTooShort(x.size(), min_length);
    if (!(options.theta_conf >= 0.0 && options.theta_conf <= 1.0))
        throw ContractViolation("theta_conf must lie in [0, 1]");
    if (options.permutations < 1) throw ContractViolation("permutation count must be >= 1");

    const SicScan observed = scan_sic(x, options.var_floor);
    ChangeDecision decision;
    decision.delta_sic = observed.delta();

    std::vector<double> shuffled(x.begin(), x.end());
    std::size_t below = 0;
    for (std::size_t b = 0; b < options.permutations; ++b) {
        std::copy(x.begin(), x.end(), shuffled.begin());
        Rng rng(combine_seed(options.seed, b));
        rng.shuffle(std::span<double>(shuffled));
        if (scan_sic(shuffled, options.var_floor).delta() < decision.delta_sic) ++below;
    }
    decision.confidence = static_cast<double>(below) / static_cast<double>(options.permutations);

    if (decision.delta_sic > 0.0 && decision.confidence >= options.theta_conf) decision.k = observed.best_k;
    return decision;
}

}  // namespace chd
