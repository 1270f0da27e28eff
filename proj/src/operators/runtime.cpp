#include "e2oc/operators/runtime.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "e2oc/common/error.hpp"

namespace e2oc::operators {

RuntimeConfig default_runtime_config() {
    RuntimeConfig cfg;
    if (const char* env = std::getenv("E2OC_SANDBOX_CMD"); env && *env) {
        std::istringstream in(env);
        std::string tok;
        while (in >> tok) cfg.command.push_back(tok);
    } else {
        cfg.command = {"python3", "-m", "e2oc_sandbox"};
    }
    return cfg;
}

ExternalRuntime::ExternalRuntime(RuntimeConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.command.empty()) throw ConfigError("empty sandbox command");
    ::signal(SIGPIPE, SIG_IGN);
}

ExternalRuntime::~ExternalRuntime() { stop(); }

void ExternalRuntime::stop() noexcept {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        ::kill(pid_, SIGKILL);
        int status = 0;
        ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
    buffer_.clear();
}

void ExternalRuntime::launch(const std::filesystem::path& script) {
    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0)
        throw OperatorFailure(std::string("pipe: ") + std::strerror(errno));

    std::vector<std::string> args = cfg_.command;
    args.push_back(script.string());
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) throw OperatorFailure(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        ::dup2(in_pipe[0], 0);
        ::dup2(out_pipe[1], 1);
        const int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) ::dup2(devnull, 2);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    script_ = script;
    ++launches_;

    // The harness announces itself before the first request.
    const auto hello = read_line(cfg_.startup_cap, "startup");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(hello);
    } catch (const nlohmann::json::exception&) {
        stop();
        throw ProtocolError("malformed startup line: " + hello.substr(0, 200));
    }
    const auto event = j.value("event", "");
    if (event == "ready") return;
    const auto msg = j.value("message", std::string("no message"));
    stop();
    if (event == "startup-error") throw OperatorFailure("harness startup error: " + msg);
    throw ProtocolError("unexpected startup line: " + hello.substr(0, 200));
}

void ExternalRuntime::ensure(const std::filesystem::path& script) {
    if (pid_ > 0 && script == script_) return;
    stop();
    launch(script);
}

std::string ExternalRuntime::read_line(std::chrono::milliseconds cap, const char* what) {
    const auto deadline = std::chrono::steady_clock::now() + cap;
    while (true) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            stop();
            throw OperatorFailure(std::string("timeout during ") + what + " after " + std::to_string(cap.count()) +
                                  " ms, harness killed");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (rc < 0 && errno == EINTR) continue;
        if (rc == 0) continue;
        char buf[4096];
        const ssize_t n = ::read(from_child_, buf, sizeof buf);
        if (n > 0) {
            buffer_.append(buf, static_cast<std::size_t>(n));
            continue;
        }
        int status = 0;
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
        stop();
        throw OperatorFailure(std::string("harness exited during ") + what + " (status " + std::to_string(status) + ")");
    }
}

VariationResponse ExternalRuntime::roundtrip(const std::filesystem::path& script, const VariationRequest& req) {
    std::lock_guard lock(mu_);
    ensure(script);
    VariationRequest r = req;
    r.id = next_id_++;
    const std::string line = encode_request(r) + "\n";
    std::size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = ::write(to_child_, line.data() + off, line.size() - off);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            stop();
            throw OperatorFailure("harness closed its input");
        }
        off += static_cast<std::size_t>(n);
    }
    const auto reply = read_line(cfg_.wall_cap, "variation");
    VariationResponse resp;
    try {
        resp = decode_response(reply);
    } catch (const ProtocolError&) {
        stop();
        throw;
    }
    if (resp.id != r.id) {
        stop();
        throw ProtocolError("response id " + std::to_string(resp.id) + " does not match request " +
                            std::to_string(r.id) + ": " + reply.substr(0, 200));
    }
    return resp;
}

std::vector<problems::Genome> ExternalRuntime::apply(const ExternalBinding& binding, Role role,
                                                     const problems::Problem& problem,
                                                     std::span<const problems::Genome> parents, std::uint64_t seed,
                                                     const Params& params) {
    VariationRequest req;
    req.role = role;
    req.entry = binding.entry;
    req.instance = instance_summary(problem);
    req.parents.assign(parents.begin(), parents.end());
    req.seed = seed;
    req.params = params;
    auto resp = roundtrip(binding.script, req);
    if (!resp.ok) throw OperatorFailure("operator error (" + resp.error_kind + "): " + resp.message);
    return std::move(resp.children);
}

}  // namespace e2oc::operators
