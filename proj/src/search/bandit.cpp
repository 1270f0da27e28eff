#include "e2oc/search/bandit.hpp"

#include <algorithm>
#include <numeric>

#include "e2oc/common/error.hpp"

namespace e2oc::search {

double ucb_score(double sco, long long vs, long long vs_parent, double c) {
    if (vs <= 0) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(vs);
    return sco / n + c * std::sqrt(std::log(static_cast<double>(vs_parent) + 1.0) / n);
}

Ucb1::Ucb1(std::size_t arms, double c) : c_(c), sum_(arms, 0.0), pulls_(arms, 0) {
    if (arms == 0) throw ContractError("bandit needs at least one arm");
}

std::size_t Ucb1::select() const {
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < sum_.size(); ++a) {
        const double v = ucb_score(sum_[a], pulls_[a], total_, c_);
        if (v > best_v) best_v = v, best = a;
    }
    return best;
}

void Ucb1::update(std::size_t arm, double reward) {
    sum_.at(arm) += reward;
    ++pulls_[arm];
    ++total_;
}

SlidingWindowUcb::SlidingWindowUcb(std::size_t arms, std::size_t window, double c)
    : c_(c), window_(window), recent_(arms), pulls_(arms, 0) {
    if (arms == 0) throw ContractError("bandit needs at least one arm");
    if (window == 0) throw ConfigError("sliding window must hold at least one reward");
}

double SlidingWindowUcb::score(std::size_t arm) const {
    const auto& r = recent_.at(arm);
    if (r.empty()) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(r.size());
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    const double horizon = static_cast<double>(std::min<long long>(t_, static_cast<long long>(window_)));
    return mean + c_ * std::sqrt(std::log(horizon) / n);
}

std::size_t SlidingWindowUcb::select() const {
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < recent_.size(); ++a) {
        const double v = score(a);
        if (v > best_v) best_v = v, best = a;
    }
    return best;
}

void SlidingWindowUcb::update(std::size_t arm, double reward) {
    auto& r = recent_.at(arm);
    r.push_back(reward);
    if (r.size() > window_) r.pop_front();
    ++pulls_[arm];
    ++t_;
}

}  // namespace e2oc::search
