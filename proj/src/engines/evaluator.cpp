#include "e2oc/engines/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <set>
#include <thread>

#include "e2oc/common/error.hpp"
#include "e2oc/engines/moea.hpp"
#include "e2oc/moo/front_io.hpp"
#include "e2oc/moo/hypervolume.hpp"

namespace e2oc::engines {

double mean_hv(const std::vector<RunRecord>& runs) {
    if (runs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : runs) s += r.hv;
    return s / static_cast<double>(runs.size());
}

KeyValue EvaluationRecord::to_kv() const {
    KeyValue kv;
    kv.set("combination", combination);
    std::string ids;
    for (const auto& i : instances) ids += (ids.empty() ? "" : ",") + i;
    kv.set("instances", ids);
    kv.set("runs_per_instance", static_cast<long long>(runs_per_instance));
    kv.set("seed", std::to_string(seed));
    kv.set("fit", fit);
    kv.set("flagged", static_cast<long long>(flagged));
    kv.set("wall_seconds", wall_seconds);
    kv.set("budget_charge", budget_charge);
    kv.set("run_count", static_cast<long long>(runs.size()));
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto p = "run." + std::to_string(k) + ".";
        const auto& r = runs[k];
        kv.set(p + "instance", r.instance);
        kv.set(p + "index", static_cast<long long>(r.run));
        kv.set(p + "seed", std::to_string(r.seed));
        kv.set(p + "hv", r.hv);
        kv.set(p + "front_size", static_cast<long long>(r.front_size));
        kv.set(p + "aborted", static_cast<long long>(r.aborted));
        kv.set(p + "clamped", static_cast<long long>(r.clamped));
        if (!r.error.empty()) kv.set(p + "error", r.error);
    }
    return kv;
}

EvaluationRecord EvaluationRecord::from_kv(const KeyValue& kv) {
    EvaluationRecord r;
    r.combination = kv.str("combination");
    r.instances = kv.list("instances");
    r.runs_per_instance = static_cast<int>(kv.integer("runs_per_instance"));
    r.seed = std::stoull(kv.str("seed"));
    r.fit = kv.real("fit");
    r.flagged = kv.integer("flagged") != 0;
    r.wall_seconds = kv.real("wall_seconds", 0.0);
    r.budget_charge = kv.integer("budget_charge", 0);
    const auto n = kv.integer("run_count");
    for (long long k = 0; k < n; ++k) {
        const auto p = "run." + std::to_string(k) + ".";
        RunRecord rr;
        rr.instance = kv.str(p + "instance");
        rr.run = static_cast<int>(kv.integer(p + "index"));
        rr.seed = std::stoull(kv.str(p + "seed"));
        rr.hv = kv.real(p + "hv");
        rr.front_size = static_cast<std::size_t>(kv.integer(p + "front_size"));
        rr.aborted = kv.integer(p + "aborted") != 0;
        rr.clamped = kv.integer(p + "clamped", 0) != 0;
        rr.error = kv.str(p + "error", "");
        r.runs.push_back(std::move(rr));
    }
    return r;
}

std::uint64_t run_seed(std::uint64_t experiment_seed, const std::string& combination, const std::string& instance,
                       int run) {
    return derive_seed({experiment_seed, fnv1a64(combination), fnv1a64(instance), static_cast<std::uint64_t>(run)});
}

std::string artifact_dir_name(const std::string& combination, std::uint64_t seed) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%016llx-%llu", static_cast<unsigned long long>(fnv1a64(combination)),
                  static_cast<unsigned long long>(seed));
    return buf;
}

MoeaEvaluator::MoeaEvaluator(EvaluatorSettings settings, std::vector<InstanceEntry> instances)
    : settings_(std::move(settings)), instances_(std::move(instances)) {
    settings_.moea.validate();
    if (settings_.runs < 1) throw ConfigError("evaluator needs at least one run per instance");
    if (instances_.empty()) throw ConfigError("evaluator needs at least one instance");
    std::set<std::string> ids;
    for (const auto& e : instances_) {
        if (!e.problem) throw ConfigError("null problem in evaluator instance list");
        e.ctx.validate();
        if (e.ctx.dimension() != e.problem->objectives())
            throw DimensionError("HV context of " + e.problem->id() + " has the wrong dimension");
        if (!ids.insert(e.problem->id()).second) throw ConfigError("duplicate instance id " + e.problem->id());
    }
    // Canonical order keeps the fit independent of the order instances were given in.
    std::sort(instances_.begin(), instances_.end(),
              [](const InstanceEntry& a, const InstanceEntry& b) { return a.problem->id() < b.problem->id(); });
}

namespace {

bool needs_runtime(const operators::OperatorCombination& combo) {
    for (const auto& op : combo.operators())
        if (!op->is_native()) return true;
    return false;
}

void write_trajectory(const std::filesystem::path& file, const std::vector<double>& hv) {
    std::string text = "generation\thv\n";
    for (std::size_t g = 0; g < hv.size(); ++g) text += std::to_string(g) + "\t" + format_real(hv[g]) + "\n";
    write_text(file, text);
}

void write_history(const std::filesystem::path& file, const std::vector<moo::ParetoArchive>& history) {
    std::string text = "generation\tobjectives\n";
    for (std::size_t g = 0; g < history.size(); ++g)
        for (const auto& e : history[g].entries()) {
            text += std::to_string(g);
            for (double x : e.f) text += "\t" + format_real(x);
            text += "\n";
        }
    write_text(file, text);
}

}  // namespace

EvaluationRecord MoeaEvaluator::evaluate(const operators::OperatorCombination& combo, std::uint64_t seed) {
    ++calls_;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cid = combo.id();
    for (const auto& e : instances_)
        if (!combo.fits(e.problem->kind()))
            throw ContractError("combination " + cid + " does not fit instance " + e.problem->id());

    EvaluationRecord rec;
    rec.combination = cid;
    rec.runs_per_instance = settings_.runs;
    rec.seed = seed;
    for (const auto& e : instances_) rec.instances.push_back(e.problem->id());
    for (std::size_t i = 0; i < instances_.size(); ++i)
        for (int r = 0; r < settings_.runs; ++r) {
            RunRecord rr;
            rr.instance = instances_[i].problem->id();
            rr.run = r;
            rr.seed = run_seed(seed, cid, rr.instance, r);
            rec.runs.push_back(std::move(rr));
        }

    std::optional<std::filesystem::path> dir;
    if (settings_.artifacts) {
        dir = *settings_.artifacts / artifact_dir_name(cid, seed);
        std::filesystem::create_directories(*dir);
    }

    const bool external = needs_runtime(combo);
    std::atomic<std::size_t> next{0};
    std::mutex io_mu;
    auto worker = [&] {
        std::unique_ptr<operators::ExternalRuntime> rt;
        if (external) rt = std::make_unique<operators::ExternalRuntime>(settings_.runtime);
        for (;;) {
            const auto k = next.fetch_add(1);
            if (k >= rec.runs.size()) return;
            auto& rr = rec.runs[k];
            const auto& entry = instances_[k / static_cast<std::size_t>(settings_.runs)];
            MoeaConfig cfg = settings_.moea;
            cfg.seed = rr.seed;
            RunOptions opts;
            opts.runtime = rt.get();
            if (dir) opts.ctx = &entry.ctx;
            opts.keep_history = dir && settings_.keep_history;
            moo::ParetoArchive front;
            RunResult res;
            try {
                res = run_moea(*entry.problem, combo, cfg, opts);
                front = res.front;
                const auto hv = moo::hypervolume(front, entry.ctx);
                rr.hv = hv.value;
                rr.clamped = hv.clamped;
                rr.front_size = front.size();
            } catch (const OperatorFailure& e) {
                rr.aborted = true;
                rr.hv = 0.0;
                rr.error = e.what();
            }
            ++moea_runs_;
            if (dir) {
                const auto rd = *dir / rr.instance / ("run" + std::to_string(rr.run));
                std::lock_guard lk(io_mu);
                std::filesystem::create_directories(rd);
                moo::save_front(rd / "front.tsv", front);
                write_trajectory(rd / "trajectory.tsv", res.hv_trajectory);
                if (opts.keep_history) write_history(rd / "history.tsv", res.history);
                KeyValue snap;
                write_config(snap, cfg);
                snap.set("combination", cid);
                snap.set("instance", rr.instance);
                snap.set("run", static_cast<long long>(rr.run));
                moo::write_hv_context(snap, entry.ctx);
                snap.save(rd / "config.kv");
            }
        }
    };
    const auto n_workers = static_cast<std::size_t>(std::max(1, settings_.workers));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (std::size_t w = 0; w < std::min(n_workers, rec.runs.size()); ++w)
            pool.emplace_back([&] {
                try {
                    worker();
                } catch (...) {
                    std::lock_guard lk(err_mu);
                    if (!err) err = std::current_exception();
                    next.store(rec.runs.size());
                }
            });
        for (auto& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    }

    rec.fit = mean_hv(rec.runs);
    rec.flagged = std::any_of(rec.runs.begin(), rec.runs.end(),
                              [](const RunRecord& r) { return r.aborted || r.front_size == 0; });
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dir) rec.to_kv().save(*dir / "record.kv");
    return rec;
}

Calibration calibrate_context(const problems::Problem& problem, const operators::OperatorCombination& baseline,
                              const MoeaConfig& cfg, int runs, std::uint64_t seed) {
    std::vector<moo::ParetoArchive> fronts;
    for (int r = 0; r < runs; ++r) {
        MoeaConfig c = cfg;
        c.seed = run_seed(seed, "calibration:" + baseline.id(), problem.id(), r);
        fronts.push_back(run_moea(problem, baseline, c).front);
    }
    const auto uni = moo::ReferenceFront::from_union(fronts, "calibration");
    Calibration out;
    out.ctx = moo::make_hv_context(problem.ideal(), uni.points);
    for (std::size_t i = 0; i < uni.points.size(); ++i) out.baseline_front.insert("b" + std::to_string(i), uni.points[i]);
    return out;
}

}  // namespace e2oc::engines
