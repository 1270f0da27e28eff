#include "e2oc/genesis/prompt.hpp"

#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"

namespace e2oc::genesis {

std::string format_code_block(const std::string& name, const std::string& body) {
    std::string out = "<<<" + name + "\n" + body;
    if (!body.empty() && body.back() != '\n') out += '\n';
    return out + name + ">>>\n";
}

std::string build_generation_prompt(const DesignThought& thought, const GenerationContext& ctx) {
    const std::string role(operators::role_name(thought.role));
    const std::string expert = ctx.expert_code.empty() ? expert_template(thought.role) : ctx.expert_code;
    if (expert.empty()) throw ConfigError("missing expert template for " + role);
    std::ostringstream p;
    p << kTaskMarker << "\n"
      << "Request: generate-operator\n"
      << "Role: " << role << "\n"
      << "Thought: " << thought.key() << "\n"
      << task_description(thought.role) << "\n"
      << "Return exactly one operator between the lines <<<OPERATOR and OPERATOR>>>.\n\n";
    if (thought.index > 0) {
        const std::string elite = ctx.elite_code.empty() ? thought.template_code : ctx.elite_code;
        if (thought.suggestion.empty() || elite.empty())
            throw ConfigError("thought " + thought.key() + " has no suggestion or elite template");
        p << kSuggestionMarker << "\n" << thought.suggestion << "\n\n";
        p << kEliteMarker << "\n" << elite << (elite.back() == '\n' ? "" : "\n") << "\n";
    }
    p << kExpertMarker << "\n" << expert << (expert.back() == '\n' ? "" : "\n");
    if (thought.index > 0) {
        p << "\n" << kTemplateMarker << "\n"
          << format_code_block("OPERATOR", "def variation(role, instance, parents, seed, params):\n    ...");
    }
    return p.str();
}

std::string build_analysis_prompt(Role role, const std::string& elite_id, const std::string& elite_code,
                                  double fitness, const std::string& expert_code) {
    const std::string expert = expert_code.empty() ? expert_template(role) : expert_code;
    if (elite_code.empty() || expert.empty()) throw ConfigError("analysis prompt needs elite and expert code");
    std::ostringstream p;
    p << kTaskMarker << "\n"
      << "Request: analyze-operator\n"
      << "Role: " << operators::role_name(role) << "\n"
      << "Elite: " << elite_id << "\n"
      << "Fitness: " << format_real(fitness) << "\n"
      << "Compare the elite operator with the expert operator. State what makes the elite better as one "
         "improvement suggestion, and rewrite its design as a reusable code template.\n\n";
    p << kEliteMarker << "\n" << elite_code << (elite_code.back() == '\n' ? "" : "\n") << "\n";
    p << kExpertMarker << "\n" << expert << (expert.back() == '\n' ? "" : "\n") << "\n";
    p << kTemplateMarker << "\n"
      << format_code_block("THOUGHT", "<one paragraph improvement suggestion>")
      << format_code_block("TEMPLATE", "<code template>");
    return p.str();
}

std::vector<std::string> extract_blocks(const std::string& text, const std::string& name) {
    std::vector<std::string> out;
    const std::string open = "<<<" + name, close = name + ">>>";
    std::istringstream in(text);
    std::string line, body;
    bool inside = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!inside) {
            if (line == open) inside = true, body.clear();
        } else if (line == close) {
            inside = false;
            out.push_back(body);
        } else {
            body += line + "\n";
        }
    }
    return out;
}

std::string header_value(const std::string& prompt, const std::string& key) {
    std::istringstream in(prompt);
    std::string line;
    const std::string prefix = key + ": ";
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

}  // namespace e2oc::genesis
