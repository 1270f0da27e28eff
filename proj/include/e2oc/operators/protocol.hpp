#pragma once

// Host side of the line-delimited variation protocol spoken with the
// out-of-process operator harness. Field names are frozen in
// docs/variation-protocol.md.

#include <cstdint>
#include <string>
#include <vector>

#include "e2oc/operators/operator.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::operators {

inline constexpr int kProtocolVersion = 1;

struct VariationRequest {
    int version = kProtocolVersion;
    std::uint64_t id = 0;
    Role role = Role::tsp_mutation;
    std::string entry = "variation";
    /// JSON object text, see instance_summary().
    std::string instance = "{}";
    std::vector<problems::Genome> parents;
    std::uint64_t seed = 0;
    Params params;
};

struct VariationResponse {
    int version = kProtocolVersion;
    std::uint64_t id = 0;
    bool ok = false;
    std::vector<problems::Genome> children;
    std::string error_kind;
    std::string message;
};

/// Sizes plus the eligible-machine table (FJSP) or coordinates (TSP).
std::string instance_summary(const problems::Problem& problem);

std::string encode_request(const VariationRequest& r);
VariationRequest decode_request(const std::string& line);
std::string encode_response(const VariationResponse& r);
/// Throws ProtocolError quoting the offending line.
VariationResponse decode_response(const std::string& line);

}  // namespace e2oc::operators
