#include "e2oc/moo/front_io.hpp"

#include <charconv>
#include <sstream>

#include "e2oc/common/error.hpp"

namespace e2oc::moo {

std::string format_front(const ParetoArchive& front) {
    std::string out;
    for (const auto& e : front.entries()) {
        out += e.id;
        for (double v : e.f) {
            out += '\t';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

ParetoArchive parse_front(const std::string& text) {
    ParetoArchive out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string id, tok;
        std::getline(fields, id, '\t');
        ObjectiveVector f;
        while (std::getline(fields, tok, '\t')) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || p != tok.data() + tok.size())
                throw ParseError("bad objective value '" + tok + "'", lineno);
            f.push_back(v);
        }
        if (id.empty() || f.size() < 2) throw ParseError("expected id and at least two objectives", lineno);
        if (!out.empty() && out.dimension() != f.size())
            throw ParseError("objective count changes within the file", lineno);
        out.insert(std::move(id), std::move(f));
    }
    return out;
}

void save_front(const std::filesystem::path& file, const ParetoArchive& front) {
    write_text(file, format_front(front));
}

ParetoArchive load_front(const std::filesystem::path& file) { return parse_front(read_text(file)); }

void write_hv_context(KeyValue& kv, const HvContext& ctx) {
    kv.set("hv.ideal", ctx.ideal);
    kv.set("hv.reference", ctx.reference);
}

HvContext read_hv_context(const KeyValue& kv) {
    HvContext ctx{kv.reals("hv.ideal"), kv.reals("hv.reference")};
    ctx.validate();
    return ctx;
}

void save_hv_context(const std::filesystem::path& file, const HvContext& ctx) {
    KeyValue kv;
    write_hv_context(kv, ctx);
    kv.save(file);
}

HvContext load_hv_context(const std::filesystem::path& file) { return read_hv_context(KeyValue::load(file)); }

}  // namespace e2oc::moo
