#include "dtn/drl_policy.hpp"

#include "dtn/errors.hpp"
#include "dtn/schema.hpp"
#include "dtn/world.hpp"

namespace dtn {

int DrlPolicy::decide(const World& world, int v, const Packet& p,
                      const std::vector<int>& candidates, const Eigen::MatrixXd* feature_rows,
                      Rng& rng, Decision& out) {
  (void)world;
  (void)p;
  if (!feature_rows) throw SimError("DrlPolicy needs candidate feature rows");
  if (feature_rows->cols() != net_->input_dim())
    throw SchemaError("DrlPolicy: feature width " + std::to_string(feature_rows->cols()) +
                      " does not match network input " + std::to_string(net_->input_dim()));

  const bool explore = epsilon_ > 0 && rng.uniform() < epsilon_;
  int choice;
  if (explore) {
    choice = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
    out.explored = true;
  } else {
    Eigen::VectorXd q = net_->forward(*feature_rows);
    out.q_values.assign(q.data(), q.data() + q.size());
    int best = 0;
    for (int i = 1; i < q.size(); ++i)
      if (q[i] > q[best]) best = i;  // ties keep the lowest node id
    choice = candidates[best];
  }
  (void)v;
  out.chosen = choice;
  return choice;
}

}  // namespace dtn
