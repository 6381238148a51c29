#include "qkdlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace qkdlab {

namespace {

using nlohmann::json;

}  // namespace

const char* auth_cli_name(AuthVariant v) {
  switch (v) {
    case AuthVariant::TwoStep: return "twostep";
    case AuthVariant::Salted: return "salt";
    case AuthVariant::NonceAlice: return "nonce-a";
    case AuthVariant::NonceBob: return "nonce-b";
    case AuthVariant::FixedSecret: return "fixed-secret";
    case AuthVariant::FreshSecret: return "fresh-secret";
    case AuthVariant::ItsComposed: return "its";
  }
  return "?";
}

std::optional<AuthVariant> auth_from_cli(const std::string& s) {
  for (auto v : {AuthVariant::TwoStep, AuthVariant::Salted, AuthVariant::NonceAlice,
                 AuthVariant::NonceBob, AuthVariant::FixedSecret, AuthVariant::FreshSecret,
                 AuthVariant::ItsComposed})
    if (s == auth_cli_name(v)) return v;
  return std::nullopt;
}

AuthScheme ExperimentConfig::auth_scheme() const {
  AuthScheme a;
  a.variant = auth_variant;
  a.public_hash.z_bits = z_bits;
  a.t_bits = t_bits;
  switch (auth_variant) {
    case AuthVariant::Salted:
      a.salt = BitString::from_uint(0x5a17ed5a17ed5a17ULL, 64);
      break;
    case AuthVariant::FixedSecret:
      // fixed per link; derived from the master seed so runs reproduce
      a.fixed_secret = Rng(derive_seed(master_seed, 0xf1)).bits(64);
      break;
    case AuthVariant::ItsComposed:
      a.au2.z_bits = 32;
      a.au2.max_blocks = 16384;
      break;
    default:
      break;
  }
  return a;
}

void ExperimentConfig::validate() const {
  if (z_bits < 1 || z_bits > 64) throw std::invalid_argument("z_bits must be in [1,64]");
  if (t_bits < 1 || t_bits > 64) throw std::invalid_argument("t_bits must be in [1,64]");
  if (n_slots == 0 || n_slots % 8 != 0)
    throw std::invalid_argument("n_slots must be a positive multiple of 8");
  if (channel.loss_prob < 0 || channel.loss_prob > 1 || channel.flip_prob < 0 ||
      channel.flip_prob > 1)
    throw std::invalid_argument("channel probabilities must lie in [0,1]");
  if (threads == 0) throw std::invalid_argument("threads must be positive");
  if (attack.kind != AttackKind::None) {
    ProtocolVariant expected = attack_default_protocol(attack);
    if (expected != protocol)
      throw std::invalid_argument(std::string("attack '") + attack_name(attack) +
                                  "' is written against protocol " + protocol_name(expected));
  }
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "protocol = " << protocol_name(protocol) << "\n";
  os << "auth = " << auth_cli_name(auth_variant) << "\n";
  os << "z_bits = " << z_bits << "\n";
  os << "t_bits = " << t_bits << "\n";
  os << "attack = " << attack_name(attack) << "\n";
  os << "w_max = " << attack.w_max << "\n";
  os << "n = " << n_slots << "\n";
  os << "loss = " << channel.loss_prob << "\n";
  os << "flip = " << channel.flip_prob << "\n";
  os << "trials = " << trials << "\n";
  os << "seed = " << master_seed << "\n";
  os << "threads = " << threads << "\n";
  os << "blank_fraction = " << attack.blank_fraction << "\n";
  if (!out_path.empty()) os << "out = " << out_path << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "protocol") {
      auto v = protocol_from_name(value);
      if (!v) throw std::invalid_argument("unknown protocol: " + value);
      cfg.protocol = *v;
    } else if (key == "auth") {
      auto v = auth_from_cli(value);
      if (!v) throw std::invalid_argument("unknown auth scheme: " + value);
      cfg.auth_variant = *v;
    } else if (key == "z_bits") cfg.z_bits = static_cast<unsigned>(std::stoul(value));
    else if (key == "t_bits") cfg.t_bits = static_cast<unsigned>(std::stoul(value));
    else if (key == "attack") {
      auto v = attack_from_name(value);
      if (!v) throw std::invalid_argument("unknown attack: " + value);
      AttackSpec keep = cfg.attack;
      cfg.attack = *v;
      cfg.attack.w_max = keep.w_max;
      cfg.attack.blank_fraction = keep.blank_fraction;
    } else if (key == "w_max") cfg.attack.w_max = static_cast<unsigned>(std::stoul(value));
    else if (key == "n") cfg.n_slots = std::stoul(value);
    else if (key == "loss") cfg.channel.loss_prob = std::stod(value);
    else if (key == "flip") cfg.channel.flip_prob = std::stod(value);
    else if (key == "trials") cfg.trials = std::stoul(value);
    else if (key == "seed") cfg.master_seed = std::stoull(value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
    else if (key == "blank_fraction") cfg.attack.blank_fraction = std::stod(value);
    else if (key == "out") cfg.out_path = value;
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

std::string TrialRecord::to_json() const {
  json j;
  j["trial"] = index;
  j["seed"] = seed;
  j["success"] = success;
  j["case"] = correlation_case;
  j["relation"] = final_relation_name(relation);
  j["abort_by"] = abort_by ? json(*abort_by) : json();
  j["abort_reason"] = abort_reason_name(abort_reason);
  j["qber"] = qber;
  j["key_bits_consumed"] = key_bits_consumed;
  j["final_key_bits"] = final_key_bits;
  j["forge_candidates"] = forge_candidates;
  j["forge_weight"] = forge_weight;
  j["first_forge_accepted"] = first_forge_accepted;
  j["eve_uncertain_bits"] = eve_uncertain_bits;
  return j.dump();
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SweepSummary aggregate(const std::vector<TrialRecord>& records) {
  SweepSummary s;
  s.trials = records.size();
  if (records.empty()) {
    s.degenerate = true;
    return s;
  }
  double qber_sum = 0.0, key_sum = 0.0;
  for (const auto& r : records) {
    if (r.success) ++s.successes;
    if (r.abort_by) ++s.aborts;
    qber_sum += r.qber;
    key_sum += static_cast<double>(r.final_key_bits);
  }
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.interval = wilson_interval(s.successes, s.trials);
  s.mean_qber = qber_sum / static_cast<double>(s.trials);
  s.mean_key_bits = key_sum / static_cast<double>(s.trials);
  return s;
}

std::string SweepSummary::to_json() const {
  json j;
  j["summary"] = true;
  j["trials"] = trials;
  j["successes"] = successes;
  j["success_rate"] = success_rate;
  j["wilson_low"] = interval.low;
  j["wilson_high"] = interval.high;
  j["mean_qber"] = mean_qber;
  j["mean_key_bits"] = mean_key_bits;
  j["aborts"] = aborts;
  j["degenerate"] = degenerate;
  return j.dump();
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.master_seed, index);

  SessionConfig sc;
  sc.variant = config.protocol;
  sc.auth = config.auth_scheme();
  sc.n_slots = config.n_slots;
  sc.channel = config.channel;
  sc.seed = rec.seed;

  auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<AttackStrategyBase> strategy = make_attack(config.attack);
  SessionOutcome out = run_protocol(sc, strategy.get());
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (strategy) {
    rec.success = out.attack_goal_met;
  } else {
    rec.success = !out.abort_by && out.key_a && out.key_b && *out.key_a == *out.key_b;
  }
  rec.correlation_case = out.correlation_case;
  rec.relation = out.final_relation;
  rec.abort_by = out.abort_by;
  rec.abort_reason = out.abort_reason;
  rec.qber = out.qber_observed;
  rec.key_bits_consumed = out.key_bits_consumed;
  rec.final_key_bits = out.key_a ? out.key_a->size() : 0;
  rec.forge_candidates = out.forge_candidates_total;
  rec.forge_weight = out.forge_weight_total;
  rec.first_forge_accepted = out.first_forge_accepted;
  rec.eve_uncertain_bits = out.eve_uncertain_bits;
  return rec;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.records.resize(config.trials);
  if (config.trials == 0) {
    result.summary = aggregate(result.records);
    return result;
  }
  unsigned workers = std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials));
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.trials; ++i) result.records[i] = run_trial(config, i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= config.trials) return;
          result.records[i] = run_trial(config, i);
        }
      });
    for (auto& t : pool) t.join();
  }
  result.summary = aggregate(result.records);
  return result;
}

void write_jsonl(std::ostream& os, const SweepResult& result) {
  for (const auto& r : result.records) os << r.to_json() << "\n";
  os << result.summary.to_json() << "\n";
}

}  // namespace qkdlab
