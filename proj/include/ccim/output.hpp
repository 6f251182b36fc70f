#pragma once

// Serialization of experiment results. Column schemas: docs/outputs.md.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ccim/costmodel.hpp"
#include "ccim/doaapp.hpp"
#include "ccim/metrology.hpp"

namespace ccim::output {

inline constexpr int kSchemaVersion = 1;

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const metrology::RmsReport& r);
nlohmann::json to_json(const metrology::Distribution& d);
nlohmann::json to_json(const metrology::MismatchCurve& c);
nlohmann::json to_json(const metrology::SweepResult& s);
nlohmann::json to_json(const metrology::ZeroCrossingReport& z);
nlohmann::json to_json(const metrology::AdcCharacterization& a);
nlohmann::json to_json(const cost::CostTable& t, const std::array<cost::Reduction, 3>& red);
nlohmann::json to_json(const doa::RmseReport& r);

std::string to_csv(const metrology::RmsReport& r);
std::string to_csv(const metrology::MismatchCurve& c);
std::string to_csv(const metrology::SweepResult& s);
std::string to_csv(const metrology::AdcCharacterization& a);
std::string to_csv(const cost::CostTable& t, const std::array<cost::Reduction, 3>& red);
std::string to_csv(const doa::RmseReport& r);

/// Shortest round-trip decimal form, stable across runs.
std::string format_double(double v);

}  // namespace ccim::output
