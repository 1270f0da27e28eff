#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/operators/operator.hpp"

namespace e2oc::genesis {

using operators::Role;

/// Improvement suggestion plus code template for one operator role.
struct DesignThought {
    Role role = Role::tsp_local_search;
    /// 0 is the predefined expert thought of the role.
    int index = 0;
    std::string suggestion;
    std::string template_code;
    /// Elite operator the thought was extracted from; empty for index 0.
    std::string source_elite;
    /// Generic fallback produced after a malformed analysis response.
    bool degraded = false;

    /// "<role>#<index>"
    std::string key() const;
    bool operator==(const DesignThought&) const = default;
};

/// Expert operator template text for a role (code skeleton in the external
/// harness language, documenting the encoding).
const std::string& expert_template(Role role);
std::string task_description(Role role);
DesignThought initial_thought(Role role);

/// Per-role ordered thought lists PS_i. Index 0 is always the initial thought.
class PromptStorage {
public:
    PromptStorage() = default;
    /// Starts every role with its initial thought.
    explicit PromptStorage(const std::vector<Role>& roles);

    /// Appends; the thought's index is set to the next free slot. Returns it.
    const DesignThought& add(DesignThought t);

    bool has(Role r) const { return thoughts_.count(r) != 0; }
    const std::vector<DesignThought>& of(Role r) const;  // throws ContractError
    const DesignThought& at(Role r, int index) const;
    std::size_t size(Role r) const { return has(r) ? thoughts_.at(r).size() : 0; }
    std::size_t total() const;
    std::vector<Role> roles() const;

    std::string to_json() const;
    static PromptStorage from_json(const std::string& text);
    void save(const std::filesystem::path& file) const;
    static PromptStorage load(const std::filesystem::path& file);

    bool operator==(const PromptStorage&) const = default;

private:
    std::map<Role, std::vector<DesignThought>> thoughts_;
};

}  // namespace e2oc::genesis
