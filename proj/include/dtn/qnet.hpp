#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dtn/policy.hpp"
#include "dtn/rng.hpp"

namespace dtn {

struct QHyper {
  double lr = 1e-4;
  int batch = 32;
  int epochs = 10;
  double val_split = 0.2;
  double gamma = 0.99;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;
};

// Fully connected value network [F, 10F, F/2, 1], ReLU hidden layers and a
// linear output, trained with Adam on MSE. All math is double precision.
class QNetwork {
 public:
  QNetwork(std::vector<int> layer_dims, uint64_t schema, uint64_t init_seed, QHyper h = {});

  static std::vector<int> default_dims(int feature_dim) {
    return {feature_dim, 10 * feature_dim, feature_dim / 2, 1};
  }

  int input_dim() const { return dims.front(); }

  // X: samples x input_dim. Returns one Q-value per row.
  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;
  double value(const Eigen::VectorXd& x) const;

  double mse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const;
  Gradients gradients(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const;
  void adam_step(const Gradients& g);
  // One Adam step on the batch MSE; returns pre-step loss.
  double fit_batch(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

  std::vector<int> dims;
  uint64_t schema_hash = 0;
  QHyper hyper;
  std::vector<Eigen::MatrixXd> W;  // W[l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> b;
  std::vector<Eigen::MatrixXd> mW, vW;  // Adam moments
  std::vector<Eigen::VectorXd> mb, vb;
  long adam_steps = 0;
};

struct TrainBatch {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

struct EpochTrace {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;
};

// Runs hyper.epochs Adam/MSE passes over the batches. The trailing
// val_split fraction of batches is held out and only evaluated (the spec'd
// split reports, it never stops training early). Batch order is reshuffled
// each epoch from rng. Throws SimError on a non-finite loss.
EpochTrace train_epochs(QNetwork& net, const std::vector<TrainBatch>& batches, Rng& rng);

// target = r for terminal experiences, else r + gamma * max_a' Q(snapshot).
Eigen::VectorXd bellman_targets(const QNetwork& snapshot,
                                const std::vector<const Experience*>& exps, double gamma);

// Text model file; decimal round-trip is exact (17 significant digits).
void save_qnetwork(const QNetwork& net, const std::string& path,
                   const std::string& provenance = "");
QNetwork load_qnetwork(const std::string& path, uint64_t expected_schema);

}  // namespace dtn
