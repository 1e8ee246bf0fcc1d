#pragma once

// File formats: signal CSV, diagram / curve / estimate JSON, curve CSV, and the
// JSON form of every configuration type. Floats use shortest round-trip text.

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "psig/estimation.hpp"
#include "psig/functionals.hpp"
#include "psig/persistence.hpp"
#include "psig/simulator.hpp"
#include "psig/time_series.hpp"

namespace psig {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double x);

// Signal CSV: header "t,value", rows "n*dt,value".
void write_series_csv(std::ostream& out, const TimeSeries& series);
[[nodiscard]] TimeSeries read_series_csv(std::istream& in);
[[nodiscard]] TimeSeries read_series_csv(const std::filesystem::path& path);

[[nodiscard]] Json to_json(const PersistenceDiagram& d);
[[nodiscard]] PersistenceDiagram diagram_from_json(const Json& j);

[[nodiscard]] Json to_json(const EvaluationGrid& g);
[[nodiscard]] EvaluationGrid grid_from_json(const Json& j);

[[nodiscard]] Json to_json(const FunctionalCurve& c);
[[nodiscard]] FunctionalCurve curve_from_json(const Json& j);
/// "t,value" (1-D) or "x,y,value" (2-D).
void write_curve_csv(std::ostream& out, const FunctionalCurve& c);

[[nodiscard]] Json to_json(const SignatureEstimate& e);
[[nodiscard]] SignatureEstimate estimate_from_json(const Json& j);
/// "t,mean,lower,upper" (1-D) or "x,y,mean,lower,upper" (2-D).
void write_estimate_csv(std::ostream& out, const SignatureEstimate& e);

[[nodiscard]] Json to_json(const TruncationSpec& s);
[[nodiscard]] TruncationSpec truncation_from_json(const Json& j);
[[nodiscard]] Json to_json(const KernelSpec& k);
[[nodiscard]] KernelSpec kernel_from_json(const Json& j);
[[nodiscard]] Json to_json(const WindowConfig& w);
[[nodiscard]] WindowConfig window_from_json(const Json& j);
[[nodiscard]] Json to_json(const BootstrapConfig& b);
[[nodiscard]] BootstrapConfig bootstrap_from_json(const Json& j);
[[nodiscard]] Json to_json(const PeriodicTemplate& t);
[[nodiscard]] PeriodicTemplate template_from_json(const Json& j);
[[nodiscard]] Json to_json(const ReparamModel& r);
[[nodiscard]] ReparamModel reparam_from_json(const Json& j);
[[nodiscard]] Json to_json(const NoiseModel& n);
[[nodiscard]] NoiseModel noise_from_json(const Json& j);
[[nodiscard]] Json to_json(const SimulationConfig& c);
[[nodiscard]] SimulationConfig simulation_from_json(const Json& j);

[[nodiscard]] Json read_json_file(const std::filesystem::path& path);
/// Writes `j.dump(2)` plus a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace psig
