#include "dtn/behavior.hpp"

#include <sstream>

#include "dtn/metrics.hpp"

namespace dtn {

namespace {

BehaviorStats stats_over(const std::vector<DecisionRecord>& log, bool exclude_dst_nbr) {
  BehaviorStats s;
  long fast_chosen = 0;
  double baseline_sum = 0;
  long group_chosen = 0;
  for (const auto& d : log) {
    if (exclude_dst_nbr && d.dest_is_nbr) continue;
    if (d.n_fast > 0 && d.n_slow > 0) {
      ++s.n;
      if (d.chose_fast) ++fast_chosen;
      baseline_sum += static_cast<double>(d.n_fast) / (d.n_fast + d.n_slow);
    }
    if (d.dest_group_present) {
      ++s.n_group;
      if (d.chose_dest_group) ++group_chosen;
    }
  }
  if (s.n > 0) {
    s.p_choose_fast = static_cast<double>(fast_chosen) / s.n;
    s.uniform_baseline = baseline_sum / s.n;
  }
  if (s.n_group > 0) s.p_choose_dest_group = static_cast<double>(group_chosen) / s.n_group;
  return s;
}

}  // namespace

BehaviorReport analyze_decisions(const std::vector<DecisionRecord>& log,
                                 const std::string& policy) {
  BehaviorReport r;
  r.policy = policy;
  r.all = stats_over(log, false);
  r.excl_dst_nbr = stats_over(log, true);
  r.empty = r.all.n == 0 && r.all.n_group == 0;
  return r;
}

BehaviorReport analyze_decision_files(const std::vector<std::string>& paths,
                                      const std::string& policy) {
  std::vector<DecisionRecord> all;
  for (const auto& p : paths) {
    auto part = read_decision_log_csv(p);
    all.insert(all.end(), part.begin(), part.end());
  }
  return analyze_decisions(all, policy);
}

std::string behavior_csv_header() {
  return "policy,variant,n_mixed,p_choose_fast,uniform_baseline,n_group,p_choose_dest_group,"
         "empty";
}

std::string behavior_csv_rows(const BehaviorReport& r) {
  std::ostringstream os;
  auto row = [&](const char* variant, const BehaviorStats& s) {
    os << r.policy << ',' << variant << ',' << s.n << ',' << format_double(s.p_choose_fast) << ','
       << format_double(s.uniform_baseline) << ',' << s.n_group << ','
       << format_double(s.p_choose_dest_group) << ',' << (r.empty ? 1 : 0) << '\n';
  };
  row("all", r.all);
  row("excl_dst_nbr", r.excl_dst_nbr);
  return os.str();
}

}  // namespace dtn
