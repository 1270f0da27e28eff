#pragma once

#include <string>
#include <vector>

#include "e2oc/genesis/thought.hpp"

namespace e2oc::genesis {

inline constexpr const char* kTaskMarker = "[task]";
inline constexpr const char* kSuggestionMarker = "[improvement-suggestion]";
inline constexpr const char* kEliteMarker = "[elite-candidate-operator]";
inline constexpr const char* kExpertMarker = "[expert-designed-operator]";
inline constexpr const char* kTemplateMarker = "[output-template]";

struct GenerationContext {
    /// Code of the current elite for the slot; falls back to the thought's template.
    std::string elite_code;
    /// Expert template; empty means expert_template(role).
    std::string expert_code;
};

/// Deterministic generation prompt. Index 0 renders the task and the expert
/// block only; later thoughts add the suggestion, the elite block and the
/// output template. Throws ConfigError when a required template is empty.
std::string build_generation_prompt(const DesignThought& thought, const GenerationContext& ctx = {});

/// Elite analysis prompt: elite code, its fitness, the expert block and the
/// THOUGHT/TEMPLATE output template.
std::string build_analysis_prompt(Role role, const std::string& elite_id, const std::string& elite_code,
                                  double fitness, const std::string& expert_code = {});

/// Contents of every "<<<NAME" ... "NAME>>>" block, in order. Anything
/// outside the delimiters is ignored.
std::vector<std::string> extract_blocks(const std::string& text, const std::string& name);

/// Value of the first "Key: value" header line of a prompt, empty if absent.
std::string header_value(const std::string& prompt, const std::string& key);

std::string format_code_block(const std::string& name, const std::string& body);

}  // namespace e2oc::genesis
