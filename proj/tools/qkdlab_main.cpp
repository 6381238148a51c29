// Batch experiment runner: seeded sweeps, bound calculators, family
// verifiers and verbose single-run attack traces.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkdlab/bases_craft.hpp"
#include "qkdlab/bounds.hpp"
#include "qkdlab/experiment.hpp"
#include "qkdlab/family_verify.hpp"
#include "qkdlab/subsequence.hpp"

using namespace qkdlab;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string protocol = "1";
  std::string auth = "twostep";
  std::string attack = "none";
  unsigned z_bits = 12;
  unsigned t_bits = 16;
  unsigned w_max = 3;
  std::size_t n_slots = 1024;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double loss = 0.0;
  double flip = 0.0;
  double blank = 0.125;
  unsigned threads = 1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "flat key=value config file; flags override");
  cmd->add_option("--protocol", o.protocol, "1|2|3|1-noP3|2-noP3|3-noP3|1-otpEC");
  cmd->add_option("--auth", o.auth,
                  "twostep|salt|nonce-a|nonce-b|fixed-secret|fresh-secret|its");
  cmd->add_option("--attack", o.attack, "attack strategy (see README)");
  cmd->add_option("--n", o.n_slots, "time slots per session");
  cmd->add_option("--z-bits", o.z_bits, "inner digest width");
  cmd->add_option("--t-bits", o.t_bits, "tag width");
  cmd->add_option("--w-max", o.w_max, "Hamming-ball radius for forging");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--loss", o.loss, "quantum channel loss probability");
  cmd->add_option("--flip", o.flip, "quantum channel flip probability");
  cmd->add_option("--blank", o.blank, "adversary blanking fraction (memory interleaves)");
  cmd->add_option("--threads", o.threads, "worker threads (output order is fixed)");
  cmd->add_option("--out", o.out, "JSON-lines output path (default stdout)");
}

ExperimentConfig build_config(const CommonOpts& o, const CLI::App* cmd) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = ExperimentConfig::from_text(ss.str());
  }
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (o.config_path.empty() || given("--protocol")) {
    auto v = protocol_from_name(o.protocol);
    if (!v) throw CLI::ValidationError("--protocol", "unknown protocol " + o.protocol);
    cfg.protocol = *v;
  }
  if (o.config_path.empty() || given("--auth")) {
    auto v = auth_from_cli(o.auth);
    if (!v) throw CLI::ValidationError("--auth", "unknown scheme " + o.auth);
    cfg.auth_variant = *v;
  }
  if (o.config_path.empty() || given("--attack")) {
    auto v = attack_from_name(o.attack);
    if (!v) throw CLI::ValidationError("--attack", "unknown attack " + o.attack);
    double blank = cfg.attack.blank_fraction;
    unsigned w = cfg.attack.w_max;
    cfg.attack = *v;
    cfg.attack.blank_fraction = blank;
    cfg.attack.w_max = w;
  }
  if (o.config_path.empty() || given("--z-bits")) cfg.z_bits = o.z_bits;
  if (o.config_path.empty() || given("--t-bits")) cfg.t_bits = o.t_bits;
  if (o.config_path.empty() || given("--w-max")) cfg.attack.w_max = o.w_max;
  if (o.config_path.empty() || given("--n")) cfg.n_slots = o.n_slots;
  if (o.config_path.empty() || given("--trials")) cfg.trials = o.trials;
  if (o.config_path.empty() || given("--seed")) cfg.master_seed = o.seed;
  if (o.config_path.empty() || given("--loss")) cfg.channel.loss_prob = o.loss;
  if (o.config_path.empty() || given("--flip")) cfg.channel.flip_prob = o.flip;
  if (o.config_path.empty() || given("--blank")) cfg.attack.blank_fraction = o.blank;
  if (o.config_path.empty() || given("--threads")) cfg.threads = o.threads;
  if (given("--out")) cfg.out_path = o.out;
  return cfg;
}

int emit_sweep(const ExperimentConfig& cfg) {
  auto result = run_sweep(cfg);
  if (cfg.out_path.empty()) {
    write_jsonl(std::cout, result);
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return 2;
    }
    write_jsonl(out, result);
  }
  std::cerr << "trials " << result.summary.trials << ", success rate "
            << result.summary.success_rate << " [" << result.summary.interval.low << ", "
            << result.summary.interval.high << "], mean qber " << result.summary.mean_qber
            << ", mean key bits " << result.summary.mean_key_bits << "\n";
  return 0;
}

json verdict_json(const FamilyVerdict& v) {
  json j;
  j["measured_epsilon"] = v.measured_epsilon.str();
  j["bound_epsilon"] = v.bound_epsilon.str();
  j["condition_a_exact"] = v.condition_a_exact;
  j["is_au2"] = v.is_au2;
  j["is_su2"] = v.is_su2;
  j["is_asu2"] = v.is_asu2;
  j["verdict"] = v.verdict;
  j["worst_pair"] = {v.worst_m1, v.worst_m2, v.worst_t1, v.worst_t2};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale QKD post-processing authentication attack laboratory"};
  app.require_subcommand(1);

  // ---- run ---------------------------------------------------------------
  CommonOpts run_opts;
  auto* run_cmd = app.add_subcommand("run", "seeded Monte Carlo sweep, JSON-lines records");
  add_common(run_cmd, run_opts);

  // ---- attack-trace ------------------------------------------------------
  CommonOpts trace_opts;
  auto* trace_cmd = app.add_subcommand("attack-trace", "single verbose run with event log");
  add_common(trace_cmd, trace_opts);

  // ---- bound -------------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "closed-form bound calculators");
  std::string bound_kind;
  std::vector<std::string> bound_params;
  bool bound_mc = false;
  std::uint64_t bound_mc_trials = 2000;
  std::uint64_t bound_seed = 1;
  bound_cmd->add_option("kind", bound_kind, "lemma1|lemma2|subseq-exact|key-consumption|eq9")
      ->required();
  bound_cmd->add_option("params", bound_params, "kind-specific numeric parameters");
  bound_cmd->add_flag("--mc", bound_mc, "print a Monte Carlo estimate next to the bound");
  bound_cmd->add_option("--mc-trials", bound_mc_trials, "Monte Carlo sample count");
  bound_cmd->add_option("--seed", bound_seed, "Monte Carlo seed");

  // ---- verify ------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "brute-force hash-family verifiers");
  std::string family_sel;
  unsigned vz = 4, vt = 2, vmb = 3;
  verify_cmd->add_option("family", family_sel, "su2|poly|all-functions|composed|constant-su2")
      ->required();
  verify_cmd->add_option("--z-bits", vz, "field width");
  verify_cmd->add_option("--t-bits", vt, "tag width");
  verify_cmd->add_option("--max-blocks", vmb, "polynomial block budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return emit_sweep(build_config(run_opts, run_cmd));
    }

    if (trace_cmd->parsed()) {
      ExperimentConfig cfg = build_config(trace_opts, trace_cmd);
      cfg.trials = 1;
      cfg.validate();
      SessionConfig sc;
      sc.variant = cfg.protocol;
      sc.auth = cfg.auth_scheme();
      sc.n_slots = cfg.n_slots;
      sc.channel = cfg.channel;
      sc.seed = derive_seed(cfg.master_seed, 0);
      auto strategy = make_attack(cfg.attack);
      auto out = run_protocol(sc, strategy.get());
      for (const auto& ev : out.trace) {
        json j;
        j["direction"] = ev.direction;
        j["type"] = static_cast<unsigned>(ev.type);
        j["forged"] = ev.forged;
        j["weight"] = ev.weight;
        j["candidates_tested"] = ev.candidates_tested;
        std::cout << j.dump() << "\n";
      }
      json j;
      j["summary"] = true;
      j["case"] = out.correlation_case;
      j["relation"] = final_relation_name(out.final_relation);
      j["goal_met"] = out.attack_goal_met;
      j["qber"] = out.qber_observed;
      j["abort_by"] = out.abort_by ? json(*out.abort_by) : json();
      j["abort_reason"] = abort_reason_name(out.abort_reason);
      j["key_bits_consumed"] = out.key_bits_consumed;
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (bound_cmd->parsed()) {
      auto need = [&](std::size_t k) {
        if (bound_params.size() != k)
          throw CLI::ValidationError("params", "expected " + std::to_string(k) + " parameters");
      };
      json j;
      if (bound_kind == "lemma1") {
        need(3);  // ell w z_bits
        std::uint64_t ell = std::stoull(bound_params[0]);
        std::uint64_t w = std::stoull(bound_params[1]);
        unsigned z = static_cast<unsigned>(std::stoul(bound_params[2]));
        auto b = collision_ball_success_bound(ell, w, z);
        j["kind"] = "lemma1";
        j["ball_size"] = b.ball_size.str();
        j["loose_bound"] = b.loose_bound;
        j["full_ball_bound"] = b.full_ball_bound;
        if (bound_mc && ell <= 64 && z <= 24) {
          Rng rng(bound_seed);
          std::uint64_t hits = 0;
          PublicHashSpec spec{z, kDefaultMixerSeed};
          for (std::uint64_t t = 0; t < bound_mc_trials; ++t) {
            WireMessage base;
            base.msg_type = MsgType::BasesA;
            base.fields = {rng.bits(ell)};
            MutationSpace space;
            space.base_message = base;
            space.mutable_field = 0;
            for (std::uint32_t i = 0; i < ell; ++i) space.mutable_positions.push_back(i);
            space.w_max = static_cast<unsigned>(w);
            if (find_colliding_message(space, rng.below(std::uint64_t{1} << z), spec).found)
              ++hits;
          }
          j["mc_estimate"] = static_cast<double>(hits) / static_cast<double>(bound_mc_trials);
          j["mc_trials"] = bound_mc_trials;
        }
      } else if (bound_kind == "lemma2") {
        need(2);  // n k
        double n = std::stod(bound_params[0]);
        double k = std::stod(bound_params[1]);
        j["kind"] = "lemma2";
        j["bound"] = 1.0 - std::exp(-2.0 * k * k / n);
        if (bound_mc) {
          Rng rng(bound_seed);
          std::size_t nn = static_cast<std::size_t>(n);
          std::size_t m = nn / 2 - static_cast<std::size_t>(k);
          std::uint64_t ok = 0;
          for (std::uint64_t t = 0; t < bound_mc_trials; ++t) {
            try {
              auto c = craft_bases_mask(rng.bits(nn), rng.bits(m),
                                        static_cast<std::size_t>(k));
              if (c.mismatches <= static_cast<std::size_t>(k)) ++ok;
            } catch (const CraftFailure&) {
            }
          }
          j["mc_estimate"] = static_cast<double>(ok) / static_cast<double>(bound_mc_trials);
          j["mc_trials"] = bound_mc_trials;
        }
      } else if (bound_kind == "subseq-exact") {
        need(2);  // m n
        std::uint64_t m = std::stoull(bound_params[0]);
        std::uint64_t n = std::stoull(bound_params[1]);
        Rational p = subsequence_probability(m, n);
        j["kind"] = "subseq-exact";
        j["probability"] = p.str();
        j["probability_double"] = rational_to_double(p);
        if (bound_mc) {
          Rng rng(bound_seed);
          std::uint64_t ok = 0;
          for (std::uint64_t t = 0; t < bound_mc_trials; ++t)
            if (find_subsequence(rng.bits(m), rng.bits(n))) ++ok;
          j["mc_estimate"] = static_cast<double>(ok) / static_cast<double>(bound_mc_trials);
        }
      } else if (bound_kind == "key-consumption") {
        // message_bits t_bits, or z_bits t_bits with --exact-widths semantics
        need(2);
        BigInt bits(bound_params[0]);
        unsigned t = static_cast<unsigned>(std::stoul(bound_params[1]));
        auto sizing = min_composed_key_bits(bits, t);
        j["kind"] = "key-consumption";
        j["message_bits"] = bits.str();
        j["z_bits"] = sizing.z_bits;
        j["t_bits"] = sizing.t_bits;
        j["total_key_bits"] = sizing.total_key_bits;
      } else if (bound_kind == "eq9") {
        need(3);  // z t message_bits -> family size lower bound and capacity
        unsigned z = static_cast<unsigned>(std::stoul(bound_params[0]));
        unsigned t = static_cast<unsigned>(std::stoul(bound_params[1]));
        BigInt bits(bound_params[2]);
        AuthScheme its;
        its.variant = AuthVariant::ItsComposed;
        its.au2 = Au2FamilySpec{z, 8};
        its.t_bits = t;
        auto kc = key_consumption(its, bits);
        j["kind"] = "eq9";
        j["bits_per_tag"] = kc.bits_per_tag;
        j["max_message_bits"] = kc.max_message_bits ? kc.max_message_bits->str() : "unbounded";
        // the tight family-size floor at epsilon' = 1/|T|
        BigInt family_floor = BigInt(pow2_big(t)) * ((bits.is_zero() ? BigInt(0) : bits) / z + 1);
        j["family_size_floor"] = family_floor.str();
      } else {
        throw CLI::ValidationError("kind", "unknown bound kind " + bound_kind);
      }
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (verify_cmd->parsed()) {
      json j;
      if (family_sel == "su2") {
        auto fam = make_su2_affine_family(vz, vt);
        auto v = verify_family(fam, FamilyKind::SU2, Rational(1, pow2_big(vt)));
        j = verdict_json(v);
      } else if (family_sel == "poly") {
        Au2FamilySpec spec{vz, vmb};
        std::vector<BitString> msgs;
        for (std::size_t len = 0; len <= spec.capacity_bits(); ++len)
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << len); ++m)
            msgs.push_back(BitString::from_uint(m, len));
        auto fam = make_poly_family(spec, std::move(msgs));
        auto v = verify_family(fam, FamilyKind::AU2, Rational(vmb - 1, pow2_big(vz)));
        j = verdict_json(v);
      } else if (family_sel == "all-functions") {
        auto fam = make_all_functions_family(std::uint64_t{1} << vz, std::uint64_t{1} << vt);
        auto v = verify_family(fam, FamilyKind::AU2, Rational(1, pow2_big(vt)));
        j = verdict_json(v);
      } else if (family_sel == "constant-su2") {
        auto fam = make_constant_padded_family(std::uint64_t{1} << vz, std::uint64_t{1} << vt);
        auto v = verify_family(fam, FamilyKind::SU2, Rational(1, pow2_big(vt)));
        j = verdict_json(v);
      } else if (family_sel == "composed") {
        auto f = make_all_functions_family(std::uint64_t{1} << vz, 2);
        auto h = make_su2_affine_family(1, 1);
        auto rep = verify_composition_theorem(f, h, Rational(1, 2));
        j["epsilon_prime_f"] = rep.epsilon_prime_f.str();
        j["epsilon_g"] = rep.epsilon_g.str();
        j["formula_epsilon"] = rep.formula_epsilon.str();
        j["identity_holds"] = rep.identity_holds;
        j["forward_holds"] = rep.forward_holds;
        j["reverse_witnessed"] = rep.reverse_witnessed;
        j["iff_holds"] = rep.identity_holds && rep.forward_holds && rep.reverse_witnessed;
      } else {
        throw CLI::ValidationError("family", "unknown family " + family_sel);
      }
      std::cout << j.dump() << "\n";
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
