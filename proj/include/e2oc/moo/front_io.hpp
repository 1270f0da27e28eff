#pragma once

#include <filesystem>
#include <string>

#include "e2oc/common/kv.hpp"
#include "e2oc/moo/archive.hpp"

namespace e2oc::moo {

/// "id<TAB>f1<TAB>...<TAB>fM" per line, raw objective values, shortest
/// round-trip decimal formatting.
std::string format_front(const ParetoArchive& front);
ParetoArchive parse_front(const std::string& text);

void save_front(const std::filesystem::path& file, const ParetoArchive& front);
ParetoArchive load_front(const std::filesystem::path& file);

void write_hv_context(KeyValue& kv, const HvContext& ctx);
HvContext read_hv_context(const KeyValue& kv);

void save_hv_context(const std::filesystem::path& file, const HvContext& ctx);
HvContext load_hv_context(const std::filesystem::path& file);

}  // namespace e2oc::moo
