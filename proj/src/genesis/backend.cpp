#include "e2oc/genesis/backend.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/genesis/prompt.hpp"
#include "e2oc/operators/catalog.hpp"

namespace e2oc::genesis {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

AuditLog::AuditLog(const std::filesystem::path& file) : path_(file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    out_.open(file, std::ios::app);
    if (!out_) throw ConfigError("cannot open audit log " + file.string());
}

void AuditLog::append(const std::string& backend, const std::string& prompt, const std::string& response,
                      const UsageRecord& rec, const std::string& error) {
    nlohmann::ordered_json j{{"timestamp", utc_now()},
                             {"backend", backend},
                             {"digest", hex64(rec.digest)},
                             {"seed", rec.seed},
                             {"ok", rec.ok},
                             {"prompt_tokens", rec.usage.prompt_tokens},
                             {"completion_tokens", rec.usage.completion_tokens},
                             {"cost", rec.usage.cost},
                             {"prompt", prompt},
                             {"response", response}};
    if (!error.empty()) j["error"] = error;
    std::lock_guard lk(mu_);
    out_ << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
    out_.flush();
}

long long estimate_tokens(const std::string& text) { return static_cast<long long>((text.size() + 3) / 4); }

Completion GeneratorBackend::complete(const std::string& prompt, std::uint64_t seed) {
    UsageRecord rec;
    rec.digest = fnv1a64(prompt);
    rec.seed = seed;
    Completion c;
    try {
        c = do_complete(prompt, seed);
    } catch (const Error& e) {
        rec.ok = false;
        {
            std::lock_guard lk(mu_);
            records_.push_back(rec);
            ++totals_.calls;
            ++totals_.failures;
        }
        if (audit_) audit_->append(kind(), prompt, {}, rec, e.what());
        throw;
    }
    rec.usage = c.usage;
    {
        std::lock_guard lk(mu_);
        records_.push_back(rec);
        ++totals_.calls;
        totals_.prompt_tokens += c.usage.prompt_tokens;
        totals_.completion_tokens += c.usage.completion_tokens;
        totals_.cost += c.usage.cost;
    }
    if (audit_) audit_->append(kind(), prompt, c.text, rec);
    return c;
}

UsageTotals GeneratorBackend::totals() const {
    std::lock_guard lk(mu_);
    return totals_;
}

std::vector<UsageRecord> GeneratorBackend::records() const {
    std::lock_guard lk(mu_);
    return records_;
}

operators::NativeBinding synthetic_variant(operators::Role role, int v) {
    const auto entries = operators::entries_for(role, false);
    if (entries.empty()) throw ContractError("no catalog entries for role");
    if (v < 0) throw ContractError("negative variant index");
    const auto n = static_cast<int>(entries.size());
    const int level = v / n;
    operators::NativeBinding b;
    b.entry = entries[static_cast<std::size_t>(v % n)]->entry;
    b.params["count"] = 1 + level;
    b.params["max_moves"] = 1 + level;
    b.params["max_segment"] = 1 + level % 3;
    b.params["mix"] = std::min(0.9, 0.3 + 0.2 * level);
    b.params["greedy"] = std::min(1.0, 0.25 * level);
    return b;
}

std::string native_code(const operators::NativeBinding& b, int variant) {
    std::string s = "native-operator v1\nentry: " + b.entry + "\nvariant: " + std::to_string(variant) + "\n";
    for (const auto& [k, v] : b.params) s += "param." + k + ": " + format_real(v) + "\n";
    return s;
}

Completion SyntheticBackend::do_complete(const std::string& prompt, std::uint64_t seed) {
    Rng rng(derive_seed({fnv1a64(prompt), seed}));
    const auto request = header_value(prompt, "Request");
    const auto role = operators::parse_role(header_value(prompt, "Role"));
    std::string text;
    if (request == "generate-operator") {
        if (rng.bernoulli(s_.unparsable_rate)) {
            text = "No operator this time.\n";
        } else if (rng.bernoulli(s_.invalid_rate)) {
            const auto broken = std::find_if(operators::native_catalog().begin(), operators::native_catalog().end(),
                                             [&](const operators::CatalogEntry& e) {
                                                 return e.broken && std::find(e.roles.begin(), e.roles.end(), role) !=
                                                                        e.roles.end();
                                             });
            operators::NativeBinding b{broken->entry, {}};
            text = "Here is the operator.\n" + format_code_block("OPERATOR", native_code(b, -1));
        } else {
            const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(s_.variants)));
            text = "Here is the operator.\n" + format_code_block("OPERATOR", native_code(synthetic_variant(role, v), v));
        }
    } else if (request == "analyze-operator") {
        static const char* kMoves[] = {
            "bias the random choices toward the positions that changed least in recent elites",
            "apply the move twice with the second step restricted to the neighbourhood of the first",
            "keep the elite's structure and tighten its parameter ranges",
            "prefer moves that touch the bottleneck element first",
            "mix the elite with the expert operator with equal probability",
        };
        const auto elite = header_value(prompt, "Elite");
        const auto h = fnv1a64(elite);
        const std::string thought = "Refine " + elite + ": " + kMoves[h % 5] + ".";
        text = format_code_block("THOUGHT", thought) +
               format_code_block("TEMPLATE", "# template derived from " + elite + "\n");
    } else {
        throw BackendError("synthetic backend cannot answer request '" + request + "'");
    }
    Completion c;
    c.text = std::move(text);
    c.usage.prompt_tokens = estimate_tokens(prompt);
    c.usage.completion_tokens = estimate_tokens(c.text);
    return c;
}

RemoteBackend::RemoteBackend(RemoteSettings s) : s_(std::move(s)), slots_(std::clamp(s_.concurrency, 1, 64)) {
    if (const char* k = std::getenv(s_.api_key_env.c_str())) key_ = k;
    if (s_.retries < 0) throw ConfigError("negative retry count");
}

Completion RemoteBackend::do_complete(const std::string& prompt, std::uint64_t seed) {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
    } release{slots_};

    const nlohmann::json body{{"model", s_.model},
                              {"temperature", s_.temperature},
                              {"seed", seed},
                              {"messages", {{{"role", "user"}, {"content", prompt}}}}};
    const auto payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= s_.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(s_.backoff * (1 << (attempt - 1)));
        httplib::Client cli(s_.base_url);
        cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(s_.timeout).count());
        cli.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(s_.timeout).count());
        httplib::Headers headers;
        if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
        auto res = cli.Post(s_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            // Client errors other than rate limiting will not change on retry.
            if (res->status >= 400 && res->status < 500 && res->status != 429) break;
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(res->body);
            Completion c;
            c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage")) {
                c.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0LL);
                c.usage.completion_tokens = j["usage"].value("completion_tokens", 0LL);
            } else {
                c.usage.prompt_tokens = estimate_tokens(prompt);
                c.usage.completion_tokens = estimate_tokens(c.text);
            }
            c.usage.cost = (static_cast<double>(c.usage.prompt_tokens) * s_.price_prompt +
                            static_cast<double>(c.usage.completion_tokens) * s_.price_completion) /
                           1e6;
            return c;
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed response body: ") + e.what();
        }
    }
    throw BackendError("remote backend " + s_.base_url + s_.path + " failed: " + last_error);
}

}  // namespace e2oc::genesis
