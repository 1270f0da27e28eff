#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "e2oc/operators/protocol.hpp"

namespace e2oc::operators {

struct RuntimeConfig {
    /// Harness launcher; the operator script path is appended as last argument.
    std::vector<std::string> command;
    std::chrono::milliseconds wall_cap{2000};
    std::chrono::milliseconds startup_cap{10000};
};

/// Launcher from E2OC_SANDBOX_CMD (space separated) or "python3 -m e2oc_sandbox".
RuntimeConfig default_runtime_config();

/// One persistent harness process, restarted when the operator source changes
/// or after a crash/timeout. One request in flight at a time.
class ExternalRuntime {
public:
    explicit ExternalRuntime(RuntimeConfig cfg = default_runtime_config());
    ~ExternalRuntime();
    ExternalRuntime(const ExternalRuntime&) = delete;
    ExternalRuntime& operator=(const ExternalRuntime&) = delete;

    /// Children of one variation. Throws OperatorFailure on timeout, crash,
    /// startup failure or an error response; ProtocolError on malformed lines.
    std::vector<problems::Genome> apply(const ExternalBinding& binding, Role role, const problems::Problem& problem,
                                        std::span<const problems::Genome> parents, std::uint64_t seed,
                                        const Params& params = {});

    /// Raw round trip, used by the protocol tests.
    VariationResponse roundtrip(const std::filesystem::path& script, const VariationRequest& req);

    int launches() const noexcept { return launches_; }
    bool alive() const noexcept { return pid_ > 0; }

private:
    void ensure(const std::filesystem::path& script);
    void launch(const std::filesystem::path& script);
    void stop() noexcept;
    std::string read_line(std::chrono::milliseconds cap, const char* what);

    RuntimeConfig cfg_;
    std::mutex mu_;
    std::filesystem::path script_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::uint64_t next_id_ = 1;
    int launches_ = 0;
};

}  // namespace e2oc::operators
