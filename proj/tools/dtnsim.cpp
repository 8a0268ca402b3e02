#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dtn/behavior.hpp"
#include "dtn/campaign.hpp"
#include "dtn/errors.hpp"
#include "dtn/mobility.hpp"
#include "dtn/oracle.hpp"
#include "dtn/trainer.hpp"
#include "dtn/world.hpp"

namespace fs = std::filesystem;
using namespace dtn;

namespace {

std::string provenance_of(const SimConfig& cfg) {
  return "digest=" + digest_hex(config_digest(cfg)) + " seed=" + std::to_string(cfg.rng_seed);
}

int cmd_train(const std::string& plan_path, const std::string& out_model,
              const std::string& outdir, uint64_t seed_override, bool have_seed) {
  CLPlan plan = load_plan(plan_path);
  if (have_seed) plan.train_seed = seed_override;
  ReplayStore store;
  std::vector<RoundLoss> losses;
  QNetwork net = train_cl(plan, store, &losses);

  fs::create_directories(outdir);
  std::string prov = "plan=" + plan_path + " train_seed=" + std::to_string(plan.train_seed);
  save_qnetwork(net, out_model, prov);
  for (const auto& ds : store.datasets)
    write_experience_log(ds, store.schema_hash, prov,
                         outdir + "/" + ds.scenario_id + "_experiences.log");
  write_loss_csv(losses, outdir + "/loss_trace.csv");
  std::cout << "trained " << plan.scenarios.size() << " scenario(s), model -> " << out_model
            << "\n";
  return 0;
}

int cmd_finetune(const std::string& base_path, const std::string& scenario_path, int budget,
                 int round_len, const std::string& out_model, const std::string& outdir) {
  SimConfig scenario = load_scenario(scenario_path);
  QNetwork base = load_qnetwork(base_path, schema_hash(scenario.features));
  CLPlan plan;
  plan.hyper = base.hyper;
  plan.batch = base.hyper.batch;
  plan.train_seed = scenario.rng_seed;
  std::vector<RoundLoss> losses;
  QNetwork tuned = fine_tune(base, scenario, budget, round_len, plan, &losses);
  save_qnetwork(tuned, out_model,
                "base=" + base_path + " " + provenance_of(scenario) + " budget=" +
                    std::to_string(budget) + " round_len=" + std::to_string(round_len));
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    write_loss_csv(losses, outdir + "/finetune_loss.csv");
  }
  std::cout << "fine-tuned over " << budget << " steps (" << losses.size() << " rounds), model -> "
            << out_model << "\n";
  return 0;
}

int cmd_eval(const std::string& campaign_path) {
  Campaign campaign = load_campaign(campaign_path);
  CampaignResult res = run_campaign(campaign);
  std::cout << "wrote " << res.runs_csv << " and " << res.summary_csv << "\n";
  if (res.dominance_violations >= 0)
    std::cout << "oracle dominance: " << res.dominance_compared << " packets compared, "
              << res.dominance_violations << " violations\n";
  return 0;
}

int cmd_analyze(const std::vector<std::string>& logs, const std::string& policy,
                const std::string& out) {
  BehaviorReport rep = analyze_decision_files(logs, policy);
  std::ofstream f(out);
  if (!f) throw SimError("cannot open '" + out + "' for writing");
  f << behavior_csv_header() << "\n" << behavior_csv_rows(rep);
  if (rep.empty)
    std::cout << "no qualifying decisions in " << logs.size() << " log(s); empty report -> " << out
              << "\n";
  else
    std::cout << "P(fast|mixed)=" << rep.all.p_choose_fast
              << " baseline=" << rep.all.uniform_baseline << " over " << rep.all.n
              << " decisions -> " << out << "\n";
  return 0;
}

int cmd_export_trace(const std::string& scenario_path, int steps, const std::string& out,
                     uint64_t seed_override, bool have_seed) {
  SimConfig cfg = load_scenario(scenario_path);
  if (have_seed) cfg.rng_seed = seed_override;
  if (steps <= 0) steps = cfg.duration;
  export_trace(cfg, steps, out);
  std::cout << "wrote " << steps << " steps x " << cfg.node_count << " nodes -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"packet-level DTN forwarding simulator with a DRL stack"};
  app.require_subcommand(1);

  std::string plan_path, model_out = "base.model", outdir = "out";
  uint64_t seed = 0;
  bool have_seed = false;
  auto* train = app.add_subcommand("train", "run a (continual-learning) training plan");
  train->add_option("--plan", plan_path, "plan file")->required();
  train->add_option("--out", model_out, "output model file");
  train->add_option("--outdir", outdir, "directory for datasets and loss traces");
  train->add_option("--seed", seed, "override train seed")->each([&](const std::string&) {
    have_seed = true;
  });

  std::string base_path, scenario_path, tuned_out = "tuned.model", ft_outdir;
  int budget = 2000, round_len = 50;
  auto* finetune = app.add_subcommand("finetune", "fine-tune a base model on one scenario");
  finetune->add_option("--base", base_path, "base model file")->required();
  finetune->add_option("--scenario", scenario_path, "scenario config (trace or synthetic)")
      ->required();
  finetune->add_option("--budget", budget, "simulated seconds of fine-tuning data");
  finetune->add_option("--round-len", round_len, "round length in seconds");
  finetune->add_option("--out", tuned_out, "output model file");
  finetune->add_option("--outdir", ft_outdir, "directory for loss traces");

  std::string campaign_path;
  auto* eval = app.add_subcommand("eval", "run an evaluation campaign");
  eval->add_option("--campaign", campaign_path, "campaign file")->required();

  std::vector<std::string> logs;
  std::string policy_label = "drl-cl", analyze_out = "behavior.csv";
  auto* analyze = app.add_subcommand("analyze", "forwarding-behavior report from decision logs");
  analyze->add_option("--log", logs, "decision log CSV (repeatable)")->required();
  analyze->add_option("--policy", policy_label, "policy label for the report");
  analyze->add_option("--out", analyze_out, "output CSV");

  std::string trace_out = "trace.csv";
  int steps = 0;
  auto* export_cmd = app.add_subcommand("export-trace", "export synthetic mobility as trace CSV");
  export_cmd->add_option("--scenario", scenario_path, "scenario config")->required();
  export_cmd->add_option("--steps", steps, "timesteps (default: scenario duration)");
  export_cmd->add_option("--out", trace_out, "output CSV");
  export_cmd->add_option("--seed", seed, "override rng seed")->each([&](const std::string&) {
    have_seed = true;
  });

  auto* schema_cmd = app.add_subcommand("schema", "print the feature schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(plan_path, model_out, outdir, seed, have_seed);
    if (*finetune)
      return cmd_finetune(base_path, scenario_path, budget, round_len, tuned_out, ft_outdir);
    if (*eval) return cmd_eval(campaign_path);
    if (*analyze) return cmd_analyze(logs, policy_label, analyze_out);
    if (*export_cmd) return cmd_export_trace(scenario_path, steps, trace_out, seed, have_seed);
    if (*schema_cmd) {
      FeatureParams p;
      std::cout << schema_text(p) << "hash " << digest_hex(schema_hash(p)) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
