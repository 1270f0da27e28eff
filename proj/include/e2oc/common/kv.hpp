#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace e2oc {

/// Ordered "key = value" text document. '#' starts a comment, blank lines are
/// ignored, later keys override earlier ones. Used for configs, HV contexts and
/// instance metadata.
class KeyValue {
public:
    KeyValue() = default;

    static KeyValue parse(const std::string& text);
    static KeyValue load(const std::filesystem::path& file);

    std::string serialize() const;
    void save(const std::filesystem::path& file) const;

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    std::string str(const std::string& key) const;  // throws ConfigError when missing
    std::string str(const std::string& key, const std::string& fallback) const;
    double real(const std::string& key) const;
    double real(const std::string& key, double fallback) const;
    long long integer(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    std::vector<double> reals(const std::string& key) const;  // comma or space separated
    std::vector<std::string> list(const std::string& key) const;  // comma separated

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value) { values_[key] = std::to_string(value); }
    void set(const std::string& key, const std::vector<double>& values);

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Shortest round-trip decimal representation of a double.
std::string format_real(double v);

std::string read_text(const std::filesystem::path& file);
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace e2oc
