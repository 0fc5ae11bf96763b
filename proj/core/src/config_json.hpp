#pragma once

#include <string>
#include <vector>

#include "inspath/config.hpp"
#include "json_util.hpp"

namespace inspath::detail {

/// A slice object or an array of them. Errors are config-errors naming `path`.
std::vector<SliceSpec> slices_from_json(const nlohmann::json& j, double voxel, const std::string& path);
ojson slices_to_json(const std::vector<SliceSpec>& slices);

ClusterSelection selection_from_json(const nlohmann::json& j, const std::string& path);
ojson selection_to_json(const ClusterSelection& selection);

ojson config_to_ojson(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

}  // namespace inspath::detail
