#pragma once

#include <string>
#include <vector>

#include "e2oc/common/kv.hpp"

namespace e2oc::search {

struct SearchBudget {
    int iter_out = 30;
    int iter_mid = 5;
    /// Inner generator: at most `inner` batches of `population` candidates per design task.
    int inner = 10;
    int population = 10;
    int sam_max = 25;
    int k = 4;

    /// (iter_out + 1) * iter_mid * K * sam_max generated candidates.
    long long limit() const noexcept {
        return static_cast<long long>(iter_out + 1) * iter_mid * k * sam_max;
    }
    /// Candidates one design task generates.
    int per_task() const noexcept { return std::min(sam_max, inner * population); }
    void validate() const;  // throws ConfigError
};

void write_budget(KeyValue& kv, const SearchBudget& b, const std::string& prefix = "budget.");
SearchBudget read_budget(const KeyValue& kv, SearchBudget base, const std::string& prefix = "budget.");

/// Running count of generated candidates, charged per generator batch.
class BudgetLedger {
public:
    struct Entry {
        std::string stage;
        int slot = -1;
        int count = 0;
    };

    explicit BudgetLedger(long long limit) : limit_(limit) {}

    /// Throws BudgetExhausted (and charges nothing) when `count` would exceed the limit.
    void charge(const std::string& stage, int slot, int count);

    long long limit() const noexcept { return limit_; }
    long long consumed() const noexcept { return consumed_; }
    long long remaining() const noexcept { return limit_ - consumed_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    /// Consumed count per stage name.
    long long consumed_in(const std::string& stage) const;

    KeyValue to_kv() const;

private:
    long long limit_;
    long long consumed_ = 0;
    std::vector<Entry> entries_;
};

}  // namespace e2oc::search
