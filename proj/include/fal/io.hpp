#pragma once

// Serialization: binary vectors (little-endian float64 with an 8-byte length
// header), instance directories (spec.json + x_true.bin + b.bin), and
// JSON/CSV report rendering shared by the CLI subcommands.

#include <filesystem>
#include <string>

#include "fal/fal.hpp"
#include "fal/probgen.hpp"

#include <json.hpp>

namespace fal {

void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

// Writes spec.json (generation spec + operator spec + noise metadata),
// b.bin, and x_true.bin (when present).
void save_instance(const std::filesystem::path& dir, const SignalSpec& spec,
                   const ProblemInstance& instance);

struct LoadedInstance {
  SignalSpec spec;
  ProblemInstance instance;
};

// Reconstructs the operator from spec.json (partial-DCT row list verbatim;
// dense matrices regenerated from the recorded seed) and reads the vectors
// back bit-exactly.
LoadedInstance load_instance(const std::filesystem::path& dir);

// FNV-1a over the raw bytes of b; the instance digest printed by cmd_gen.
std::string instance_digest(const ProblemInstance& instance);

nlohmann::json report_to_json(const SolveReport& report);
std::string metric_csv_header();
std::string metric_csv_line(const SolveReport& report);

// Scientific notation, 6 significant digits; NaN renders as empty field.
std::string format_sci(double v);

}  // namespace fal
