#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qkdlab/attacks.hpp"
#include "qkdlab/protocol.hpp"

namespace qkdlab {

const char* auth_cli_name(AuthVariant v);
std::optional<AuthVariant> auth_from_cli(const std::string& s);

/// One seeded Monte-Carlo sweep over (protocol x auth x attack x parameters).
struct ExperimentConfig {
  ProtocolVariant protocol = ProtocolVariant::P1;
  AuthVariant auth_variant = AuthVariant::TwoStep;
  unsigned z_bits = 12;
  unsigned t_bits = 16;
  AttackSpec attack;
  std::size_t n_slots = 1024;
  ChannelParams channel;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  std::string out_path;  // empty: stdout only
  unsigned threads = 1;

  AuthScheme auth_scheme() const;
  /// Flat key=value text form; round-trips losslessly.
  std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text);
  void validate() const;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  int correlation_case = 0;
  FinalRelation relation = FinalRelation::None;
  std::optional<std::string> abort_by;
  AbortReason abort_reason = AbortReason::None;
  double qber = 0.0;
  std::size_t key_bits_consumed = 0;
  std::size_t final_key_bits = 0;
  std::uint64_t forge_candidates = 0;
  unsigned forge_weight = 0;
  bool first_forge_accepted = false;
  unsigned eve_uncertain_bits = 0;
  double wall_seconds = 0.0;  // excluded from the canonical record stream

  /// Canonical JSON line (sorted keys, no wall time): the reproducible unit.
  std::string to_json() const;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};
/// 95% score interval; safe at small samples.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials);

struct SweepSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  WilsonInterval interval;
  double mean_qber = 0.0;
  double mean_key_bits = 0.0;
  std::size_t aborts = 0;
  bool degenerate = false;  // trials == 0

  std::string to_json() const;
};

struct SweepResult {
  std::vector<TrialRecord> records;  // sorted by trial index
  SweepSummary summary;
};

/// Derives per-trial seeds from the master seed (derive_seed(master, index)),
/// runs the trials (optionally across threads; record order never changes),
/// and aggregates exactly the emitted records.
SweepResult run_sweep(const ExperimentConfig& config);

/// Recomputes the summary from records; must reproduce SweepResult::summary.
SweepSummary aggregate(const std::vector<TrialRecord>& records);

/// JSON-lines: one record per line, then one summary line.
void write_jsonl(std::ostream& os, const SweepResult& result);

/// One session under the config's parameters with the given seed.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t index);

}  // namespace qkdlab
