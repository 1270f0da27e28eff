#include "e2oc/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/moo/front_io.hpp"
#include "e2oc/moo/metrics.hpp"

namespace e2oc::cli {

namespace fs = std::filesystem;

std::string entry_dir_name(const std::string& label) {
    int primes = 0;
    std::string base;
    for (char ch : label) {
        if (ch == '\'') ++primes;
        else base += ch;
    }
    return primes == 0 ? base : base + ".chain" + std::to_string(primes);
}

void write_entries(const fs::path& run_dir, const std::vector<std::string>& labels,
                   const std::vector<std::string>& train, const std::vector<std::string>& test) {
    KeyValue kv;
    kv.set("count", static_cast<long long>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        kv.set("entry." + std::to_string(i) + ".label", labels[i]);
        kv.set("entry." + std::to_string(i) + ".dir", entry_dir_name(labels[i]));
    }
    std::string t, s;
    for (const auto& x : train) t += (t.empty() ? "" : ",") + x;
    for (const auto& x : test) s += (s.empty() ? "" : ",") + x;
    kv.set("set.train", t);
    kv.set("set.test", s);
    fs::create_directories(run_dir / "online");
    kv.save(run_dir / "online" / "entries.kv");
}

void write_contexts(const fs::path& run_dir, const std::vector<engines::InstanceEntry>& instances) {
    fs::create_directories(run_dir / "contexts");
    for (const auto& e : instances) moo::save_hv_context(run_dir / "contexts" / (e.problem->id() + ".kv"), e.ctx);
}

std::vector<ReportEntry> load_entries(const fs::path& run_dir) {
    const auto file = run_dir / "online" / "entries.kv";
    if (!fs::exists(file)) throw ConfigError(run_dir.string() + " has no evaluated entries (online/entries.kv missing)");
    const auto kv = KeyValue::load(file);
    std::map<std::string, std::string> set_of;
    for (const auto& id : kv.list("set.train")) set_of[id] = "train";
    for (const auto& id : kv.list("set.test")) set_of[id] = "test";
    std::vector<ReportEntry> out;
    const auto n = kv.integer("count");
    for (long long i = 0; i < n; ++i) {
        ReportEntry e;
        e.label = kv.str("entry." + std::to_string(i) + ".label");
        e.run_dir = run_dir;
        e.dir = run_dir / "online" / kv.str("entry." + std::to_string(i) + ".dir");
        e.record = engines::EvaluationRecord::from_kv(KeyValue::load(e.dir / "record.kv"));
        e.set_of = set_of;
        out.push_back(std::move(e));
    }
    if (out.empty()) throw ConfigError(run_dir.string() + " lists no entries");
    return out;
}

std::map<std::string, moo::HvContext> load_contexts(const fs::path& run_dir) {
    std::map<std::string, moo::HvContext> out;
    const auto dir = run_dir / "contexts";
    if (!fs::exists(dir)) return out;
    for (const auto& f : fs::directory_iterator(dir))
        if (f.path().extension() == ".kv") out[f.path().stem().string()] = moo::load_hv_context(f.path());
    return out;
}

namespace {

struct RunData {
    double hv = 0.0;
    double igd = 0.0;
    moo::ParetoArchive front;
    fs::path dir;
};

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double s = 0.0;
    for (double x : v) s += x;
    const double m = s / static_cast<double>(v.size());
    if (v.size() < 2) return {m, 0.0};
    double q = 0.0;
    for (double x : v) q += (x - m) * (x - m);
    return {m, std::sqrt(q / static_cast<double>(v.size() - 1))};
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::vector<std::vector<double>> read_rows(const fs::path& file) {
    std::vector<std::vector<double>> rows;
    if (!fs::exists(file)) return rows;
    std::istringstream in(read_text(file));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string tok; std::getline(ls, tok, '\t');) row.push_back(std::stod(tok));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Report build_report(const std::vector<fs::path>& run_dirs, const std::string& baseline,
                    const std::optional<fs::path>& out) {
    if (run_dirs.empty()) throw ConfigError("report needs at least one run directory");
    std::vector<ReportEntry> entries;
    std::map<std::string, moo::HvContext> contexts;
    std::map<std::string, fs::path> context_source;
    std::set<std::string> labels;
    for (const auto& rd : run_dirs) {
        for (auto& [inst, ctx] : load_contexts(rd)) {
            const auto it = contexts.find(inst);
            if (it == contexts.end()) {
                contexts[inst] = ctx;
                context_source[inst] = rd;
            } else if (!(it->second == ctx)) {
                throw ConfigError("HV contexts for instance " + inst + " differ between " + context_source[inst].string() +
                                  " and " + rd.string() +
                                  "; HV values are only comparable under one context, so recalibrate or compare runs "
                                  "that share instance metadata");
            }
        }
        for (auto& e : load_entries(rd)) {
            if (labels.count(e.label)) e.label = rd.filename().string() + "/" + e.label;
            labels.insert(e.label);
            entries.push_back(std::move(e));
        }
    }

    // Per entry, per instance: the runs with their final fronts.
    std::vector<std::map<std::string, std::vector<RunData>>> data(entries.size());
    std::map<std::string, std::vector<moo::ParetoArchive>> finals;
    std::vector<std::string> instance_order;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& rec = entries[k].record;
        const auto art = entries[k].dir / engines::artifact_dir_name(rec.combination, rec.seed);
        for (const auto& rr : rec.runs) {
            if (!contexts.count(rr.instance))
                throw ConfigError("no HV context for instance " + rr.instance + " in " + entries[k].run_dir.string());
            RunData d;
            d.hv = rr.hv;
            d.dir = art / rr.instance / ("run" + std::to_string(rr.run));
            if (fs::exists(d.dir / "front.tsv")) d.front = moo::load_front(d.dir / "front.tsv");
            finals[rr.instance].push_back(d.front);
            if (std::find(instance_order.begin(), instance_order.end(), rr.instance) == instance_order.end())
                instance_order.push_back(rr.instance);
            data[k][rr.instance].push_back(std::move(d));
        }
    }
    std::sort(instance_order.begin(), instance_order.end());
    std::map<std::string, moo::ReferenceFront> refs;
    for (const auto& inst : instance_order) {
        refs[inst] = moo::ReferenceFront::from_union(finals[inst], "union of reported final fronts");
        for (auto& per : data)
            for (auto& d : per[inst]) d.igd = refs[inst].points.empty() ? 0.0 : moo::igd(d.front, refs[inst], contexts[inst]);
    }

    Report rep;
    rep.baseline = baseline;
    std::optional<std::size_t> base_k;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& l = entries[k].label;
        if (!baseline.empty() && (l == baseline || (l.size() > baseline.size() && l.ends_with("/" + baseline)))) {
            base_k = k;
            break;
        }
    }
    if (!baseline.empty() && !base_k) throw ConfigError("baseline entry '" + baseline + "' not found in the reported runs");

    const auto stats = [&](std::size_t k, const std::vector<std::string>& insts) {
        StatRow row;
        row.entry = entries[k].label;
        std::vector<double> hv, igd;
        for (const auto& inst : insts) {
            const auto it = data[k].find(inst);
            if (it == data[k].end()) continue;
            ++row.instances;
            for (const auto& d : it->second) hv.push_back(d.hv), igd.push_back(d.igd);
        }
        row.runs = static_cast<int>(hv.size());
        std::tie(row.hv_mean, row.hv_std) = mean_std(hv);
        std::tie(row.igd_mean, row.igd_std) = mean_std(igd);
        return row;
    };
    const auto with_ri = [&](StatRow row, const StatRow& base) {
        if (base.runs > 0 && row.runs > 0 && base.hv_mean != 0.0) row.ri = moo::relative_improvement(row.hv_mean, base.hv_mean);
        return row;
    };

    for (std::size_t k = 0; k < entries.size(); ++k) {
        for (const auto& inst : instance_order) {
            if (!data[k].count(inst)) continue;
            auto row = stats(k, {inst});
            row.scope = inst;
            const auto s = entries[k].set_of.find(inst);
            row.set = s == entries[k].set_of.end() ? "other" : s->second;
            if (base_k) row = with_ri(row, stats(*base_k, {inst}));
            rep.instances.push_back(std::move(row));
        }
        for (const std::string set : {"train", "test", "all"}) {
            std::vector<std::string> insts;
            for (const auto& inst : instance_order) {
                const auto s = entries[k].set_of.find(inst);
                const std::string which = s == entries[k].set_of.end() ? "other" : s->second;
                if (set == "all" || which == set) insts.push_back(inst);
            }
            auto row = stats(k, insts);
            if (row.runs == 0) continue;
            row.scope = set;
            row.set = set;
            if (base_k) row = with_ri(row, stats(*base_k, insts));
            rep.sets.push_back(std::move(row));
        }
    }

    if (out) {
        write_report_tables(*out, rep);
        std::ostringstream traj, fronts;
        traj << "entry\tinstance\tgeneration\thv_mean\tigd_mean\n";
        fronts << "entry\tinstance\trun\tobjectives\n";
        for (std::size_t k = 0; k < entries.size(); ++k)
            for (const auto& inst : instance_order) {
                const auto it = data[k].find(inst);
                if (it == data[k].end()) continue;
                std::vector<std::vector<double>> hv_series;
                std::vector<std::map<int, std::vector<moo::ObjectiveVector>>> hist;
                for (std::size_t r = 0; r < it->second.size(); ++r) {
                    const auto& d = it->second[r];
                    std::vector<double> series;
                    for (const auto& row : read_rows(d.dir / "trajectory.tsv"))
                        if (row.size() >= 2) series.push_back(row[1]);
                    hv_series.push_back(std::move(series));
                    std::map<int, std::vector<moo::ObjectiveVector>> h;
                    for (const auto& row : read_rows(d.dir / "history.tsv"))
                        if (row.size() >= 2) h[static_cast<int>(row[0])].push_back({row.begin() + 1, row.end()});
                    hist.push_back(std::move(h));
                    const auto sorted = d.front.sorted();
                    for (const auto& e : sorted.entries()) {
                        fronts << entries[k].label << '\t' << inst << '\t' << r;
                        for (double x : e.f) fronts << '\t' << format_real(x);
                        fronts << '\n';
                    }
                }
                std::size_t gens = 0;
                for (const auto& s : hv_series) gens = std::max(gens, s.size());
                for (std::size_t g = 0; g < gens; ++g) {
                    std::vector<double> hv, igd;
                    for (std::size_t r = 0; r < hv_series.size(); ++r) {
                        if (g < hv_series[r].size()) hv.push_back(hv_series[r][g]);
                        const auto h = hist[r].find(static_cast<int>(g));
                        if (h != hist[r].end() && !refs[inst].points.empty())
                            igd.push_back(moo::igd(moo::ParetoArchive::from_points(h->second), refs[inst], contexts[inst]));
                    }
                    traj << entries[k].label << '\t' << inst << '\t' << g << '\t' << format_real(mean_std(hv).first) << '\t'
                         << (igd.empty() ? std::string() : format_real(mean_std(igd).first)) << '\n';
                }
            }
        write_text(*out / "trajectories.tsv", traj.str());
        write_text(*out / "fronts.tsv", fronts.str());
        fs::create_directories(*out / "reference");
        for (const auto& inst : instance_order) {
            moo::ParetoArchive a;
            for (std::size_t i = 0; i < refs[inst].points.size(); ++i) a.insert("r" + std::to_string(i), refs[inst].points[i]);
            moo::save_front(*out / "reference" / (inst + ".tsv"), a);
        }
    }
    return rep;
}

namespace {

std::string format_rows(const std::vector<StatRow>& rows, bool per_instance) {
    std::ostringstream s;
    s << "entry\t" << (per_instance ? "instance\tset" : "set\tinstances") << "\truns\thv_mean\thv_std\tigd_mean\tigd_std\tri\n";
    for (const auto& r : rows) {
        s << r.entry << '\t';
        if (per_instance) s << r.scope << '\t' << r.set;
        else s << r.scope << '\t' << r.instances;
        s << '\t' << r.runs << '\t' << format_real(r.hv_mean) << '\t' << format_real(r.hv_std) << '\t'
          << format_real(r.igd_mean) << '\t' << format_real(r.igd_std) << '\t' << fmt_opt(r.ri) << '\n';
    }
    return s.str();
}

}  // namespace

std::string format_set_table(const Report& r) { return format_rows(r.sets, false); }

void write_report_tables(const fs::path& out, const Report& r) {
    fs::create_directories(out);
    write_text(out / "table.tsv", format_rows(r.sets, false));
    write_text(out / "instances.tsv", format_rows(r.instances, true));
}

}  // namespace e2oc::cli
