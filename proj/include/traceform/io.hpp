#pragma once

#include "traceform/darned_forms.hpp"
#include "traceform/decomposition.hpp"
#include "traceform/energy.hpp"
#include "traceform/grid_function.hpp"
#include "traceform/harmonic_trace.hpp"
#include "traceform/interval_set.hpp"
#include "traceform/simulation.hpp"
#include "traceform/speed_measure.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace traceform {

using Json = nlohmann::ordered_json;

const char* version();

// Reals: finite values as numbers, infinities as the strings "inf" / "-inf".
Json real_to_json(double x);
double real_from_json(const Json& j);

Json to_json(const IntervalSet& set);
IntervalSet interval_set_from_json(const Json& j);

Json to_json(const SpeedMeasure& m);
SpeedMeasure speed_measure_from_json(const Json& j);

Json to_json(const ValidationReport& r);
Json to_json(const EnergyReport& r, bool with_breakdown = true);
Json to_json(const EstimatorResult& r);
Json to_json(const DarnedSpaceReport& r);
Json to_json(const DarningImage& img);
/// Constants and case tag; the two functions are written as CSV next to it.
Json to_json(const Decomposition& d);

std::string grid_function_csv(const GridFunction& u);
/// Parses "x,value" rows; with `set`, also checks that the grid is adapted to it.
GridFunction grid_function_from_csv(const std::string& text, const IntervalSet* set = nullptr);

std::string path_csv(const PathSample& p);
std::string jump_table_csv(const std::vector<JumpRow>& rows);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form of x.
std::string format_real(double x);

}  // namespace traceform
