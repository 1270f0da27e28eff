#include "e2oc/search/budget.hpp"

#include <algorithm>

#include "e2oc/common/error.hpp"

namespace e2oc::search {

void SearchBudget::validate() const {
    if (iter_out < 0) throw ConfigError("iter_out must be non-negative");
    if (iter_mid < 1 || inner < 1 || population < 1 || sam_max < 1 || k < 1)
        throw ConfigError("budget terms iter_mid, inner, population, sam_max and K must be positive");
}

void write_budget(KeyValue& kv, const SearchBudget& b, const std::string& p) {
    kv.set(p + "iter_out", static_cast<long long>(b.iter_out));
    kv.set(p + "iter_mid", static_cast<long long>(b.iter_mid));
    kv.set(p + "inner", static_cast<long long>(b.inner));
    kv.set(p + "population", static_cast<long long>(b.population));
    kv.set(p + "sam_max", static_cast<long long>(b.sam_max));
}

SearchBudget read_budget(const KeyValue& kv, SearchBudget b, const std::string& p) {
    b.iter_out = static_cast<int>(kv.integer(p + "iter_out", b.iter_out));
    b.iter_mid = static_cast<int>(kv.integer(p + "iter_mid", b.iter_mid));
    b.inner = static_cast<int>(kv.integer(p + "inner", b.inner));
    b.population = static_cast<int>(kv.integer(p + "population", b.population));
    b.sam_max = static_cast<int>(kv.integer(p + "sam_max", b.sam_max));
    b.validate();
    return b;
}

void BudgetLedger::charge(const std::string& stage, int slot, int count) {
    if (count < 0) throw ContractError("negative budget charge");
    if (consumed_ + count > limit_)
        throw BudgetExhausted("budget of " + std::to_string(limit_) + " generated candidates exhausted (" +
                              std::to_string(consumed_) + " used, " + std::to_string(count) + " requested)");
    consumed_ += count;
    if (!entries_.empty() && entries_.back().stage == stage && entries_.back().slot == slot)
        entries_.back().count += count;
    else
        entries_.push_back({stage, slot, count});
}

long long BudgetLedger::consumed_in(const std::string& stage) const {
    long long n = 0;
    for (const auto& e : entries_)
        if (e.stage == stage) n += e.count;
    return n;
}

KeyValue BudgetLedger::to_kv() const {
    KeyValue kv;
    kv.set("limit", limit_);
    kv.set("consumed", consumed_);
    std::vector<std::string> stages;
    for (const auto& e : entries_)
        if (std::find(stages.begin(), stages.end(), e.stage) == stages.end()) stages.push_back(e.stage);
    for (const auto& s : stages) kv.set("stage." + s, consumed_in(s));
    return kv;
}

}  // namespace e2oc::search
