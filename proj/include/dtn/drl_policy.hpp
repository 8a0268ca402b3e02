#pragma once

#include "dtn/policy.hpp"
#include "dtn/qnet.hpp"

namespace dtn {

// The packet-agent policy: Q-value per candidate row, epsilon-greedy during
// training (epsilon = 0 evaluates greedily). Ties break to the lowest node
// id. There is no delivery shortcut: reaching the destination has to win on
// Q-value.
class DrlPolicy : public ForwardingPolicy {
 public:
  DrlPolicy(QNetwork* net, double epsilon, std::string label = "drl")
      : net_(net), epsilon_(epsilon), label_(std::move(label)) {}

  int decide(const World& world, int v, const Packet& p, const std::vector<int>& candidates,
             const Eigen::MatrixXd* feature_rows, Rng& rng, Decision& out) override;
  bool needs_feature_rows() const override { return true; }
  std::string name() const override { return label_; }

 private:
  QNetwork* net_;
  double epsilon_;
  std::string label_;
};

}  // namespace dtn
