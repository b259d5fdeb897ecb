#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "pstomo/bases.hpp"
#include "pstomo/measurement.hpp"
#include "pstomo/noise.hpp"
#include "pstomo/reconstruction.hpp"
#include "pstomo/states.hpp"

namespace pstomo::io {

using nlohmann::json;

inline constexpr double kFileNormTolerance = 1e-6;

json to_json(const PureState& s);
// Rejects |norm - 1| > 1e-6 unless renormalize is set.
PureState state_from_json(const json& j, bool renormalize = false);

json to_json(const OrthonormalBasis& b);
OrthonormalBasis basis_from_json(const json& j);

json to_json(const OutcomeCounts& c);
OutcomeCounts counts_from_json(const json& j);

json to_json(const ReconstructionReport& r);
json to_json(const NoiseCorrectedReport& r);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

} // namespace pstomo::io
