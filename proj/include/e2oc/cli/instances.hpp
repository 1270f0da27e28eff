#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "e2oc/engines/config.hpp"
#include "e2oc/engines/evaluator.hpp"
#include "e2oc/moo/archive.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::cli {

/// Generator parameters for the id "mk01" .. "mk15": job and machine counts
/// of the Brandimarte size classes, operation and flexibility ranges
/// approximated per class.
problems::FjspGeneratorParams mk_params(int index);

/// Builds a problem from a generated-instance id: "tsp<k>_<n>" (k nodes) or
/// "mk<NN>". Throws ConfigError for other ids.
std::shared_ptr<const problems::Problem> generate_instance(problems::ProblemKind kind, const std::string& id,
                                                           std::uint64_t seed);

/// Instance file: <id>.fjs for FJSP, <id>.m<M>.tsp for TSP.
std::filesystem::path instance_file(const std::filesystem::path& dir, problems::ProblemKind kind,
                                    const std::string& id);
/// Metadata (HV context, provenance): <id>.<problem>.kv; baseline union
/// front: <id>.<problem>.front.tsv.
std::filesystem::path metadata_file(const std::filesystem::path& dir, problems::ProblemKind kind,
                                    const std::string& id);

void write_instance(const std::filesystem::path& dir, const problems::Problem& p);
std::shared_ptr<const problems::Problem> read_instance(const std::filesystem::path& dir, problems::ProblemKind kind,
                                                       const std::string& id);

struct CalibrationSettings {
    std::string baseline;
    engines::MoeaConfig moea;
    int runs = 3;
    std::uint64_t seed = 1;
};

/// Calibrates the HV context against the baseline and writes the metadata.
engines::InstanceEntry calibrate_instance(const std::filesystem::path& dir, std::shared_ptr<const problems::Problem> p,
                                          const CalibrationSettings& s);

/// Instance plus stored context. Throws ConfigError (with a gen-instances
/// hint) when the file or its metadata is missing.
engines::InstanceEntry load_instance(const std::filesystem::path& dir, problems::ProblemKind kind,
                                     const std::string& id);

}  // namespace e2oc::cli
