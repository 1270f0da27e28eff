#include "e2oc/common/kv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "e2oc/common/error.hpp"

namespace e2oc {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + file.string());
    out << text;
}

KeyValue KeyValue::parse(const std::string& text) {
    KeyValue kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        kv.values_[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValue KeyValue::load(const std::filesystem::path& file) { return parse(read_text(file)); }

std::string KeyValue::serialize() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

void KeyValue::save(const std::filesystem::path& file) const { write_text(file, serialize()); }

std::optional<std::string> KeyValue::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValue::str(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError("missing key '" + key + "'");
    return *v;
}

std::string KeyValue::str(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double KeyValue::real(const std::string& key) const {
    const auto s = str(key);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("key '" + key + "' is not a number: " + s);
    return v;
}

double KeyValue::real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
}

long long KeyValue::integer(const std::string& key) const {
    const auto s = str(key);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("key '" + key + "' is not an integer: " + s);
    return v;
}

long long KeyValue::integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::vector<double> KeyValue::reals(const std::string& key) const {
    auto s = str(key);
    for (auto& c : s)
        if (c == ',') c = ' ';
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        double v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            throw ConfigError("key '" + key + "' has a non-numeric entry: " + tok);
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> KeyValue::list(const std::string& key) const {
    std::vector<std::string> out;
    const auto s = str(key, "");
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        auto item = trim(s.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

void KeyValue::set(const std::string& key, double value) { values_[key] = format_real(value); }

void KeyValue::set(const std::string& key, const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += format_real(values[i]);
    }
    values_[key] = s;
}

}  // namespace e2oc
