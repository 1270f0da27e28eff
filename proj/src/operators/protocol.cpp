#include "e2oc/operators/protocol.hpp"

#include <json.hpp>

#include "e2oc/common/error.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"

namespace e2oc::operators {

using nlohmann::json;

namespace {

json genome_json(const problems::Genome& g) { return json{{"sequence", g.sequence}, {"assignment", g.assignment}}; }

problems::Genome genome_from(const json& j) {
    problems::Genome g;
    g.sequence = j.at("sequence").get<std::vector<int>>();
    if (j.contains("assignment")) g.assignment = j.at("assignment").get<std::vector<int>>();
    return g;
}

std::string excerpt(const std::string& line) {
    return line.size() > 200 ? line.substr(0, 200) + "..." : line;
}

}  // namespace

std::string instance_summary(const problems::Problem& problem) {
    json j;
    j["problem"] = std::string(problems::problem_name(problem.kind()));
    j["id"] = problem.id();
    j["objectives"] = problem.objectives();
    if (auto* f = dynamic_cast<const problems::FjspProblem*>(&problem)) {
        const auto& inst = f->instance();
        j["machines"] = inst.machines;
        json jobs = json::array();
        for (const auto& job : inst.jobs) {
            json ops = json::array();
            for (const auto& op : job) {
                json opts = json::array();
                for (const auto& o : op) opts.push_back({o.machine, o.duration});
                ops.push_back(opts);
            }
            jobs.push_back(ops);
        }
        j["jobs"] = jobs;
    } else if (auto* t = dynamic_cast<const problems::TspProblem*>(&problem)) {
        const auto& inst = t->instance();
        j["k"] = inst.nodes();
        json spaces = json::array();
        for (const auto& s : inst.spaces) {
            json pts = json::array();
            for (const auto& p : s) pts.push_back({p[0], p[1]});
            spaces.push_back(pts);
        }
        j["coords"] = spaces;
    }
    return j.dump();
}

std::string encode_request(const VariationRequest& r) {
    json j;
    j["v"] = r.version;
    j["id"] = r.id;
    j["role"] = std::string(role_name(r.role));
    j["entry"] = r.entry;
    j["instance"] = json::parse(r.instance);
    j["parents"] = json::array();
    for (const auto& p : r.parents) j["parents"].push_back(genome_json(p));
    j["seed"] = r.seed;
    j["params"] = r.params;
    return j.dump();
}

VariationRequest decode_request(const std::string& line) {
    try {
        const auto j = json::parse(line);
        VariationRequest r;
        r.version = j.at("v").get<int>();
        r.id = j.at("id").get<std::uint64_t>();
        r.role = parse_role(j.at("role").get<std::string>());
        r.entry = j.at("entry").get<std::string>();
        r.instance = j.at("instance").dump();
        for (const auto& p : j.at("parents")) r.parents.push_back(genome_from(p));
        r.seed = j.at("seed").get<std::uint64_t>();
        r.params = j.at("params").get<Params>();
        return r;
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed request (") + e.what() + "): " + excerpt(line));
    }
}

std::string encode_response(const VariationResponse& r) {
    json j;
    j["v"] = r.version;
    j["id"] = r.id;
    j["status"] = r.ok ? "ok" : "error";
    if (r.ok) {
        j["children"] = json::array();
        for (const auto& c : r.children) j["children"].push_back(genome_json(c));
    } else {
        j["error"] = {{"kind", r.error_kind}, {"message", r.message}};
    }
    return j.dump();
}

VariationResponse decode_response(const std::string& line) {
    VariationResponse r;
    try {
        const auto j = json::parse(line);
        r.version = j.at("v").get<int>();
        if (r.version != kProtocolVersion)
            throw ProtocolError("protocol version " + std::to_string(r.version) + " not supported: " + excerpt(line));
        r.id = j.at("id").get<std::uint64_t>();
        const auto status = j.at("status").get<std::string>();
        if (status == "ok") {
            r.ok = true;
            for (const auto& c : j.at("children")) r.children.push_back(genome_from(c));
            if (r.children.empty()) throw ProtocolError("ok response without children: " + excerpt(line));
        } else if (status == "error") {
            r.error_kind = j.at("error").at("kind").get<std::string>();
            r.message = j.at("error").value("message", "");
        } else {
            throw ProtocolError("unknown status '" + status + "': " + excerpt(line));
        }
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed response (") + e.what() + "): " + excerpt(line));
    }
    return r;
}

}  // namespace e2oc::operators
