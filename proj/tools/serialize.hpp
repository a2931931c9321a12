#pragma once

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "kgstab/evolve.hpp"
#include "kgstab/model.hpp"
#include "kgstab/spectrum.hpp"
#include "kgstab/stability.hpp"

namespace kgstab::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";

/// %.17g, independent of the global locale.
std::string format_number(double v);

nlohmann::json params_json(const ModelParams& p);
nlohmann::json to_json(const Extremum& e);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const RunSummary& s, const Diagnostics& d);

/// Envelope without provenance; payloads are deterministic for fixed argv.
nlohmann::json envelope(const std::string& command, const nlohmann::json& params,
                        const nlohmann::json& payload);

}  // namespace kgstab::cli
