#include "dtn/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "dtn/baselines.hpp"
#include "dtn/drl_policy.hpp"
#include "dtn/errors.hpp"
#include "dtn/oracle.hpp"
#include "dtn/world.hpp"

namespace dtn {

namespace fs = std::filesystem;

Campaign load_campaign(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open campaign '" + path + "'");
  Campaign c;
  std::string dir;
  if (auto slash = path.find_last_of('/'); slash != std::string::npos)
    dir = path.substr(0, slash + 1);
  auto resolve = [&](std::string p) {
    if (!p.empty() && p[0] != '/' && !dir.empty()) p = dir + p;
    return p;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string key, eq, val;
    if (!(is >> key)) continue;
    if (!(is >> eq) || eq != "=")
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::getline(is, val);
    auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    val.erase(std::find_if(val.rbegin(), val.rend(), notspace).base(), val.end());
    if (val.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty value");
    if (key == "scenario") c.scenario_paths.push_back(resolve(val));
    else if (key == "policy") c.policies.push_back(val);
    else if (key.rfind("model.", 0) == 0) c.model_paths[key.substr(6)] = resolve(val);
    else if (key == "seeds") {
      std::istringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ',')) c.seeds.push_back(std::stoull(tok));
    } else if (key == "outdir") c.outdir = resolve(val);
    else if (key == "utility_theta") c.utility_theta = std::stod(val);
    else if (key == "decision_logs") c.decision_logs = val != "0" && val != "false";
    else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (c.scenario_paths.empty() || c.policies.empty() || c.seeds.empty())
    throw ConfigError(path + ": campaign needs scenario, policy and seeds entries");
  return c;
}

MetricsReport run_cell(const SimConfig& cfg, const std::string& policy_name,
                       const QNetwork* model, double utility_theta,
                       std::vector<DecisionRecord>* decisions) {
  if (policy_name == "oracle") return oracle_run(cfg).report;

  std::unique_ptr<ForwardingPolicy> policy;
  QNetwork net_copy = model ? *model : QNetwork({1, 1}, 0, 0);
  if (policy_name.rfind("drl", 0) == 0) {
    if (!model) throw ConfigError("policy '" + policy_name + "' needs a model");
    if (net_copy.schema_hash != schema_hash(cfg.features))
      throw SchemaError("model schema does not match scenario feature schema");
    policy = std::make_unique<DrlPolicy>(&net_copy, 0.0, policy_name);  // greedy in eval
  } else if (policy_name == "utility") {
    policy = std::make_unique<UtilityPolicy>(utility_theta);
  } else if (policy_name == "seek-focus") {
    policy = std::make_unique<SeekFocusPolicy>(utility_theta);
  } else if (policy_name == "random") {
    policy = std::make_unique<RandomPolicy>();
  } else {
    throw ConfigError("unknown policy '" + policy_name + "'");
  }

  World world(cfg);
  world.decision_log = decisions;
  world.run(*policy);
  return world.collect_metrics(policy_name);
}

double t_quantile_975(int df) {
  // two-sided 95% quantiles; df beyond the table use the normal limit
  static const double kTable[] = {0,      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                  2.306,  2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                                  2.120,  2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                                  2.064,  2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 0;
  if (df <= 30) return kTable[df];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsReport>& runs) {
  std::map<std::pair<std::string, std::string>, std::vector<const MetricsReport*>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& r : runs) {
    auto key = std::make_pair(r.scenario_id, r.policy);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  auto ci = [](const std::vector<double>& xs, double& mean, double& half) {
    const int n = static_cast<int>(xs.size());
    mean = 0;
    for (double x : xs) mean += x;
    mean /= n;
    if (n < 2) {
      half = 0;
      return;
    }
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / (n - 1));
    half = t_quantile_975(n - 1) * sd / std::sqrt(static_cast<double>(n));
  };
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    SummaryRow row;
    row.scenario = key.first;
    row.policy = key.second;
    row.n = static_cast<int>(groups[key].size());
    std::vector<double> dr, dl, fw;
    for (const auto* r : groups[key]) {
      dr.push_back(r->delivery_rate);
      dl.push_back(r->mean_delay);
      fw.push_back(r->mean_forwards);
    }
    ci(dr, row.delivery_mean, row.delivery_ci);
    ci(dl, row.delay_mean, row.delay_ci);
    ci(fw, row.forwards_mean, row.forwards_ci);
    out.push_back(row);
  }
  return out;
}

CampaignResult run_campaign(const Campaign& campaign) {
  fs::create_directories(campaign.outdir);
  CampaignResult result;
  std::vector<MetricsReport>& runs = result.runs;

  std::map<std::string, QNetwork> models;
  for (const auto& name : campaign.policies) {
    if (name.rfind("drl", 0) == 0) {
      auto it = campaign.model_paths.find(name);
      if (it == campaign.model_paths.end())
        throw ConfigError("campaign: policy '" + name + "' has no model." + name + " entry");
      models.emplace(name, load_qnetwork(it->second, 0));
    }
  }

  bool has_oracle =
      std::find(campaign.policies.begin(), campaign.policies.end(), "oracle") !=
      campaign.policies.end();
  long violations = 0, compared = 0;

  std::ofstream runs_csv(campaign.outdir + "/runs.csv");
  for (const auto& spath : campaign.scenario_paths) {
    SimConfig base = load_scenario(spath);
    runs_csv << "# scenario=" << base.scenario_id << " digest=" << digest_hex(config_digest(base))
             << "\n";
  }
  runs_csv << metrics_csv_header() << "\n";

  for (const auto& spath : campaign.scenario_paths) {
    SimConfig base = load_scenario(spath);
    for (uint64_t seed : campaign.seeds) {
      SimConfig cfg = base;
      cfg.rng_seed = seed;
      std::map<int, int> oracle_delay;  // packet -> delay, for pairing
      const size_t seed_first_run = runs.size();
      for (const auto& policy : campaign.policies) {
        const QNetwork* model = nullptr;
        if (auto it = models.find(policy); it != models.end()) model = &it->second;
        std::vector<DecisionRecord> decisions;
        bool want_log = campaign.decision_logs && policy != "oracle";
        MetricsReport rep = run_cell(cfg, policy, model, campaign.utility_theta,
                                     want_log ? &decisions : nullptr);
        runs_csv << metrics_csv_row(rep) << "\n";
        std::string stem = campaign.outdir + "/" + cfg.scenario_id + "_" + policy + "_s" +
                           std::to_string(seed);
        write_packets_csv(rep, stem + "_packets.csv");
        std::string log_path;
        if (want_log) {
          log_path = stem + "_decisions.csv";
          write_decision_log_csv(decisions, log_path, rep.config_digest, seed);
        }
        if (policy == "oracle")
          for (const auto& p : rep.packets)
            if (p.status == PacketStatus::kDelivered)
              oracle_delay[p.id] = p.delivered_at - p.created;
        runs.push_back(std::move(rep));
        result.decision_logs.push_back(log_path);
      }
      if (has_oracle) {
        for (size_t i = seed_first_run; i < runs.size(); ++i) {
          if (runs[i].policy == "oracle") continue;
          for (const auto& p : runs[i].packets) {
            if (p.status != PacketStatus::kDelivered) continue;
            ++compared;
            auto it = oracle_delay.find(p.id);
            if (it == oracle_delay.end() || it->second > p.delivered_at - p.created) ++violations;
          }
        }
      }
    }
  }
  result.runs_csv = campaign.outdir + "/runs.csv";
  runs_csv.close();

  auto rows = summarize(runs);
  result.summary_csv = campaign.outdir + "/summary.csv";
  std::ofstream sf(result.summary_csv);
  sf << "scenario,policy,n,delivery_rate_mean,delivery_rate_ci95,mean_delay_s,mean_delay_ci95,"
        "mean_forwards,mean_forwards_ci95\n";
  for (const auto& r : rows)
    sf << r.scenario << ',' << r.policy << ',' << r.n << ',' << format_double(r.delivery_mean)
       << ',' << format_double(r.delivery_ci) << ',' << format_double(r.delay_mean) << ','
       << format_double(r.delay_ci) << ',' << format_double(r.forwards_mean) << ','
       << format_double(r.forwards_ci) << '\n';

  if (has_oracle) {
    result.dominance_violations = violations;
    result.dominance_compared = compared;
    std::ofstream df(campaign.outdir + "/dominance.csv");
    df << "compared,violations\n" << compared << ',' << violations << '\n';
  }
  return result;
}

}  // namespace dtn
