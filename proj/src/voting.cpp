#include "chd/voting.hpp"

#include <cmath>

#include "chd/error.hpp"

namespace chd {

namespace {
constexpr double kSmoothingCutoff = 0.5;
}

double VoteTally::mass(std::size_t index) const {
    auto it = points_.find(index);
    return it == points_.end() ? 0.0 : it->second;
}

double VoteTally::total() const {
    double sum = none_;
    for (const auto& [_, m] : points_) sum += m;
    return sum;
}

VoteTally VoteTally::without_none() const {
    VoteTally out = *this;
    out.none_ = 0.0;
    return out;
}

VoteTally& VoteTally::operator+=(const VoteTally& other) {
    none_ += other.none_;
    for (const auto& [i, m] : other.points_) points_[i] += m;
    return *this;
}

bool is_change_vote(const VoteTally& tally) {
    if (tally.empty()) throw ContractViolation("is_change_vote: empty tally");
    for (const auto& [_, m] : tally.points())
        if (m >= tally.none()) return true;
    return false;
}

VoteTally smooth(const VoteTally& tally, int lambda_s, std::size_t n) {
    if (tally.none() != 0.0) throw ContractViolation("smooth: tally still holds NONE votes");
    if (lambda_s < 2) throw ContractViolation("smooth: lambda_s must be >= 2");

    VoteTally out = tally;
    const double lambda = lambda_s;
    for (const auto& [i, v] : tally.points()) {
        for (std::size_t d = 1;; ++d) {
            const double contribution = v / std::pow(lambda, static_cast<double>(d));
            if (contribution < kSmoothingCutoff) break;
            if (i > d && i - d >= 2 && i - d <= n - 1) out.add(i - d, contribution);
            if (i + d >= 2 && i + d + 1 <= n) out.add(i + d, contribution);
        }
    }
    return out;
}

std::size_t change_point_vote(const VoteTally& tally) {
    if (tally.points().empty()) throw ContractViolation("change_point_vote: no location votes");
    std::size_t best = 0;
    double best_mass = -1.0;
    for (const auto& [i, m] : tally.points()) {
        if (m > best_mass) {
            best = i;
            best_mass = m;
        }
    }
    return best;
}

}  // namespace chd
