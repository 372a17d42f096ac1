#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roughstart/blowup.hpp"
#include "roughstart/criticality.hpp"
#include "roughstart/equations.hpp"
#include "roughstart/random_ic.hpp"
#include "roughstart/solver.hpp"

namespace roughstart {

inline constexpr const char* library_version = "0.1.0";
/// Bumped whenever a CSV column set changes.
inline constexpr int csv_schema_version = 1;

enum class Command { classify, sample, probe, solve, blowup, asymptotics };

std::string to_string(Command c);
Command command_from_string(const std::string& name);

struct EquationSection {
  EquationSpec spec;
  /// Noise exponent used by classify (defaults to the equation's theta_default).
  std::optional<Rational> theta;
};

struct IcSection {
  /// "gaussian" (random field) or "sine"/"cosine" (amplitude * trig(mode x)).
  std::string type = "gaussian";
  GaussianICSpec spec{};
  int mode = 1;
  /// Number of replicas for sample.
  std::size_t replicas = 1;
  std::uint64_t replica = 0;
};

struct ProbeSection {
  std::size_t M = 100;
  ProbeOptions options{};
};

struct BlowupSection {
  BlowupWeightSpec spec{};
  std::size_t M = 500;
  std::vector<double> epsilon_grid;
  /// Xi regularity probe lattice radius and sample count (0 disables).
  int probe_N = 0;
  std::size_t probe_M = 100;
};

struct AsymptoticsSection {
  std::vector<std::array<double, 3>> triples;
  int per_decade = 50;
};

struct ExperimentConfig {
  std::optional<Command> command;
  std::optional<EquationSection> equation;
  std::optional<IcSection> ic;
  std::optional<PicardConfig> solver;
  std::optional<BlowupSection> blowup;
  std::optional<ProbeSection> probe;
  std::optional<AsymptoticsSection> asymptotics;
  std::string output_dir = "out";
  std::optional<std::uint64_t> seed;
  /// Source text for the manifest.
  std::string source;
};

/// Parses TOML text. Throws ValidationError on malformed or inconsistent input.
ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::string& path);

/// [equation] table: catalogue kinds reject exponent overrides.
EquationSection equation_from_toml_text(const std::string& toml_text);

/// Throws ValidationError naming the first missing section.
void require_sections(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

struct GoldenRow {
  EquationKind kind;
  Rational tau, sigma, a, b, alpha_min, delta;
  std::string critical_space;
  Rational r_threshold_fix1;
  /// Regime as stated in the narrative.
  Regime regime;
  /// Regime computed by classify at theta_default.
  Regime computed_regime;
  /// Disagreements between narrative and computation.
  std::vector<std::string> flags;
};

/// Surface growth, KPZ, Kuramoto-Sivashinsky and reaction-diffusion.
std::vector<GoldenRow> golden_table();

std::string golden_table_text(const std::vector<GoldenRow>& rows);
nlohmann::json golden_table_json(const std::vector<GoldenRow>& rows);
nlohmann::json to_json(const CriticalityReport& report);

/// Executes the command; returns 0 on success, 2 on validation failure,
/// 3 on numerical failure. Diagnostics go to err.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace roughstart
