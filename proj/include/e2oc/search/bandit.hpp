#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace e2oc::search {

inline const double kDefaultExploration = std::sqrt(2.0);

/// sco / vs + c * sqrt(ln(vs_parent + 1) / vs); +inf when vs == 0.
double ucb_score(double sco, long long vs, long long vs_parent, double c = kDefaultExploration);

/// UCB1 over a fixed arm set. Unpulled arms first, ties by arm index.
class Ucb1 {
public:
    explicit Ucb1(std::size_t arms, double c = kDefaultExploration);
    std::size_t select() const;
    void update(std::size_t arm, double reward);
    const std::vector<long long>& pulls() const noexcept { return pulls_; }
    long long total() const noexcept { return total_; }

private:
    double c_;
    std::vector<double> sum_;
    std::vector<long long> pulls_;
    long long total_ = 0;
};

/// Sliding-window UCB: each arm is scored on its last `window` rewards,
/// mean + c * sqrt(ln(min(t, window)) / n) with n the rewards in the window.
/// window = 1 reduces to picking the arm with the best last reward.
class SlidingWindowUcb {
public:
    SlidingWindowUcb(std::size_t arms, std::size_t window, double c = kDefaultExploration);
    std::size_t select() const;
    void update(std::size_t arm, double reward);
    double score(std::size_t arm) const;
    const std::vector<long long>& pulls() const noexcept { return pulls_; }

private:
    double c_;
    std::size_t window_;
    std::vector<std::deque<double>> recent_;
    std::vector<long long> pulls_;
    long long t_ = 0;
};

}  // namespace e2oc::search
