#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include "e2oc/operators/operator.hpp"

namespace e2oc::genesis {

struct Usage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double cost = 0.0;
};

struct Completion {
    std::string text;
    Usage usage;
};

struct UsageRecord {
    std::uint64_t digest = 0;
    std::uint64_t seed = 0;
    Usage usage;
    bool ok = true;
};

struct UsageTotals {
    long long calls = 0;
    long long failures = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double cost = 0.0;
};

/// Append-only JSON-lines log, one record per backend call.
class AuditLog {
public:
    explicit AuditLog(const std::filesystem::path& file);
    void append(const std::string& backend, const std::string& prompt, const std::string& response,
                const UsageRecord& rec, const std::string& error = {});
    std::filesystem::path path() const { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mu_;
    std::ofstream out_;
};

/// Source of candidate operator code and design-thought analyses.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;

    virtual std::string kind() const = 0;
    /// Bounded number of concurrent requests the backend accepts.
    virtual int concurrency() const { return 1; }

    /// One chat-style completion. Records usage and the audit entry. Throws
    /// BackendError when the backend gives up.
    Completion complete(const std::string& prompt, std::uint64_t seed);

    UsageTotals totals() const;
    std::vector<UsageRecord> records() const;
    void set_audit_log(std::shared_ptr<AuditLog> log) { audit_ = std::move(log); }

protected:
    virtual Completion do_complete(const std::string& prompt, std::uint64_t seed) = 0;

private:
    mutable std::mutex mu_;
    std::vector<UsageRecord> records_;
    UsageTotals totals_;
    std::shared_ptr<AuditLog> audit_;
};

/// Rough token count used where the backend reports none (4 bytes per token).
long long estimate_tokens(const std::string& text);

struct SyntheticSettings {
    /// Catalog variants per role; candidate variant indices are drawn from [0, variants).
    int variants = 8;
    /// Probability that a candidate is a deliberately broken operator.
    double invalid_rate = 0.0;
    /// Probability that a response carries no code block.
    double unparsable_rate = 0.0;
};

/// Native binding (entry + params) of synthetic variant `v` for a role.
operators::NativeBinding synthetic_variant(operators::Role role, int v);

/// Code text of a native operator: "native-operator v1" followed by
/// "entry:", "variant:" and "param.<name>:" lines.
std::string native_code(const operators::NativeBinding& b, int variant);

/// Deterministic catalog-drawing backend: output is a pure function of
/// (prompt digest, seed).
class SyntheticBackend final : public GeneratorBackend {
public:
    explicit SyntheticBackend(SyntheticSettings s = {}) : s_(s) {}
    std::string kind() const override { return "synthetic"; }
    const SyntheticSettings& settings() const noexcept { return s_; }

protected:
    Completion do_complete(const std::string& prompt, std::uint64_t seed) override;

private:
    SyntheticSettings s_;
};

struct RemoteSettings {
    /// Scheme, host and optional port, e.g. "https://api.deepseek.com".
    std::string base_url = "https://api.deepseek.com";
    std::string path = "/chat/completions";
    std::string model = "deepseek-chat";
    double temperature = 1.0;
    /// Environment variable holding the API key.
    std::string api_key_env = "E2OC_API_KEY";
    int retries = 3;
    std::chrono::milliseconds backoff{500};
    std::chrono::seconds timeout{120};
    int concurrency = 4;
    /// Prices per million tokens.
    double price_prompt = 0.27;
    double price_completion = 1.10;
};

/// Chat-completion HTTP client (OpenAI-compatible request and response shape).
class RemoteBackend final : public GeneratorBackend {
public:
    explicit RemoteBackend(RemoteSettings s);
    std::string kind() const override { return "remote-chat"; }
    int concurrency() const override { return s_.concurrency; }
    const RemoteSettings& settings() const noexcept { return s_; }

protected:
    Completion do_complete(const std::string& prompt, std::uint64_t seed) override;

private:
    RemoteSettings s_;
    std::string key_;
    std::counting_semaphore<64> slots_;
};

}  // namespace e2oc::genesis
