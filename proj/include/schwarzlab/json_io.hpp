#pragma once

#include <filesystem>

#include "json.hpp"
#include "schwarzlab/harmonic.hpp"
#include "schwarzlab/model_spaces.hpp"
#include "schwarzlab/schwarz.hpp"
#include "schwarzlab/weierstrass.hpp"

namespace swz::io {

inline constexpr int format_version = 1;

// Readers throw input_error naming the offending field; every writer stamps
// "format_version" and every reader checks it.

nlohmann::json arc_to_json(const BoundaryArc& arc);
BoundaryArc arc_from_json(const nlohmann::json& j);

nlohmann::json inner_spec_to_json(const InnerFunctionSpec& spec);
InnerFunctionSpec inner_spec_from_json(const nlohmann::json& j);

nlohmann::json pencil_to_json(const MonicPolyPencil& pencil);
MonicPolyPencil pencil_from_json(const nlohmann::json& j);

nlohmann::json halfdisk_to_json(const HalfDiskHarmonic& u);
HalfDiskHarmonic halfdisk_from_json(const nlohmann::json& j);

void write_trace_csv(const std::filesystem::path& path, const CircleFunction& f);
CircleFunction read_trace_csv(const std::filesystem::path& path);

void write_match_csv(const std::filesystem::path& path, const MatchTable& table);

nlohmann::json load_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace swz::io
