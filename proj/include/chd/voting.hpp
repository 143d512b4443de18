#pragma once

#include <cstddef>
#include <map>

namespace chd {

// Vote masses keyed by 1-based review index, plus the NONE mass.
class VoteTally {
public:
    void add_none(double mass = 1.0) { none_ += mass; }
    void add(std::size_t index, double mass = 1.0) { points_[index] += mass; }

    double none() const noexcept { return none_; }
    const std::map<std::size_t, double>& points() const noexcept { return points_; }
    double mass(std::size_t index) const;
    double total() const;
    bool empty() const noexcept { return none_ == 0.0 && points_.empty(); }

    VoteTally without_none() const;
    // Mass-wise sum.
    VoteTally& operator+=(const VoteTally& other);

    bool operator==(const VoteTally&) const = default;

private:
    double none_ = 0.0;
    std::map<std::size_t, double> points_;
};

// Round one: false only when NONE strictly outweighs every single location.
bool is_change_vote(const VoteTally& tally);

// Adds v / lambda^d to i +- d for every voted location i with raw mass v,
// for d = 1, 2, ... while the contribution stays >= 0.5; locations outside
// [2, n - 1] receive nothing. Throws ContractViolation if the tally carries
// NONE mass or lambda_s < 2.
VoteTally smooth(const VoteTally& tally, int lambda_s, std::size_t n);

// Round two: location with the largest mass, smallest index on ties.
std::size_t change_point_vote(const VoteTally& tally);

}  // namespace chd
