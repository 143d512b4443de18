// Deliberately naive reference implementations used to cross-check the
// library. Nothing here shares code with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

namespace chd::oracle {

inline double mean(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s / double(hi - lo);
}

// MLE variance of x[lo, hi), floored.
inline double mle_var(const std::vector<double>& x, std::size_t lo, std::size_t hi, double floor = 1e-8) {
    const double m = mean(x, lo, hi);
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += (x[i] - m) * (x[i] - m);
    return std::max(s / double(hi - lo), floor);
}

// Sum of Gaussian log densities of x[lo, hi) under (mu, var).
inline double log_likelihood(const std::vector<double>& x, std::size_t lo, std::size_t hi, double mu, double var) {
    double ll = 0;
    for (std::size_t i = lo; i < hi; ++i)
        ll += -0.5 * std::log(2 * std::numbers::pi * var) - (x[i] - mu) * (x[i] - mu) / (2 * var);
    return ll;
}

// -2 log L at the MLE + p log n, by summing densities.
inline double sic_null(const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double mu = mean(x, 0, n), var = mle_var(x, 0, n);
    return -2 * log_likelihood(x, 0, n, mu, var) + 2 * std::log(double(n));
}

inline double sic_alt(const std::vector<double>& x, std::size_t k) {
    const std::size_t n = x.size();
    const double m1 = mean(x, 0, k), v1 = mle_var(x, 0, k);
    const double m2 = mean(x, k, n), v2 = mle_var(x, k, n);
    return -2 * (log_likelihood(x, 0, k, m1, v1) + log_likelihood(x, k, n, m2, v2)) + 4 * std::log(double(n));
}

struct Scan {
    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    double null = 0;
};

inline Scan exhaustive_scan(const std::vector<double>& x) {
    Scan s;
    s.null = sic_null(x);
    for (std::size_t k = 2; k + 2 <= x.size(); ++k) {
        const double v = sic_alt(x, k);
        if (v < s.best) {
            s.best = v;
            s.k = k;
        }
    }
    return s;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x, 0, x.size()), my = mean(y, 0, y.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> avg(const std::vector<std::vector<double>>& all, const std::vector<std::size_t>& which) {
    std::vector<double> out(all.front().size(), 0.0);
    for (auto i : which)
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += all[i][t];
    for (auto& v : out) v /= double(which.size());
    return out;
}

struct Replay {
    std::vector<std::size_t> order;
    std::vector<std::size_t> selected;
    std::vector<std::pair<double, double>> tests;  // (before, with) per tested candidate
};

// Greedy selection written straight from the algorithm listing: target is
// the mean of every input; sort by correlation (stable on input order, which
// the callers make equal to feature order); add while strictly improving.
inline Replay greedy_replay(const std::vector<std::vector<double>>& seqs) {
    Replay r;
    std::vector<std::size_t> all(seqs.size());
    std::iota(all.begin(), all.end(), 0);
    const auto target = avg(seqs, all);
    std::vector<double> pc(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) pc[i] = pearson(seqs[i], target);
    r.order = all;
    std::stable_sort(r.order.begin(), r.order.end(), [&](auto a, auto b) { return pc[a] > pc[b]; });
    r.selected.push_back(r.order[0]);
    for (std::size_t l = 1; l < r.order.size(); ++l) {
        auto with = r.selected;
        with.push_back(r.order[l]);
        const double before = pearson(avg(seqs, r.selected), target);
        const double after = pearson(avg(seqs, with), target);
        r.tests.emplace_back(before, after);
        if (after > before)
            r.selected = with;
        else
            break;
    }
    return r;
}

}  // namespace chd::oracle
