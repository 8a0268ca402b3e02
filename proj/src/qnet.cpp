#include "dtn/qnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dtn/config.hpp"
#include "dtn/errors.hpp"

namespace dtn {

namespace {
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
}  // namespace

QNetwork::QNetwork(std::vector<int> layer_dims, uint64_t schema, uint64_t init_seed, QHyper h)
    : dims(std::move(layer_dims)), schema_hash(schema), hyper(h) {
  if (dims.size() < 2 || dims.back() != 1)
    throw SimError("QNetwork needs at least one layer and a scalar output");
  Rng rng(init_seed);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    Eigen::MatrixXd w(out, in);
    const double limit = std::sqrt(6.0 / in);  // He-style uniform, fan-in scaled
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) w(i, j) = rng.uniform(-limit, limit);
    W.push_back(w);
    b.emplace_back(Eigen::VectorXd::Zero(out));
    mW.emplace_back(Eigen::MatrixXd::Zero(out, in));
    vW.emplace_back(Eigen::MatrixXd::Zero(out, in));
    mb.emplace_back(Eigen::VectorXd::Zero(out));
    vb.emplace_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::VectorXd QNetwork::forward(const Eigen::MatrixXd& X) const {
  if (X.cols() != dims.front())
    throw SchemaError("forward: input width " + std::to_string(X.cols()) + " != " +
                      std::to_string(dims.front()));
  Eigen::MatrixXd a = X;
  for (size_t l = 0; l < W.size(); ++l) {
    Eigen::MatrixXd z = (a * W[l].transpose()).rowwise() + b[l].transpose();
    if (l + 1 < W.size()) z = z.cwiseMax(0.0);  // ReLU on hidden layers
    a = std::move(z);
  }
  return a.col(0);
}

double QNetwork::value(const Eigen::VectorXd& x) const {
  return forward(x.transpose())(0);
}

double QNetwork::mse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const {
  Eigen::VectorXd pred = forward(X);
  return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

Gradients QNetwork::gradients(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const {
  const auto layers = W.size();
  std::vector<Eigen::MatrixXd> acts;  // post-activation, acts[0] = input
  acts.reserve(layers + 1);
  acts.push_back(X);
  for (size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (acts[l] * W[l].transpose()).rowwise() + b[l].transpose();
    if (l + 1 < layers) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
  }
  Gradients g;
  g.W.resize(layers);
  g.b.resize(layers);
  const double n = static_cast<double>(y.size());
  // d(MSE)/d(pred) = 2 (pred - y) / n
  Eigen::MatrixXd delta = (acts.back().col(0) - y).matrix() * (2.0 / n);
  for (size_t l = layers; l-- > 0;) {
    g.W[l] = delta.transpose() * acts[l];
    g.b[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * W[l];
      delta = delta.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

void QNetwork::adam_step(const Gradients& g) {
  ++adam_steps;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam_steps));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam_steps));
  for (size_t l = 0; l < W.size(); ++l) {
    mW[l] = kAdamBeta1 * mW[l] + (1 - kAdamBeta1) * g.W[l];
    vW[l] = kAdamBeta2 * vW[l] + (1 - kAdamBeta2) * g.W[l].cwiseProduct(g.W[l]);
    W[l] -= hyper.lr *
            (mW[l] / c1).cwiseQuotient(((vW[l] / c2).cwiseSqrt().array() + kAdamEps).matrix());
    mb[l] = kAdamBeta1 * mb[l] + (1 - kAdamBeta1) * g.b[l];
    vb[l] = kAdamBeta2 * vb[l] + (1 - kAdamBeta2) * g.b[l].cwiseProduct(g.b[l]);
    b[l] -= hyper.lr *
            (mb[l] / c1).cwiseQuotient(((vb[l] / c2).cwiseSqrt().array() + kAdamEps).matrix());
  }
}

double QNetwork::fit_batch(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  double loss = mse(X, y);
  adam_step(gradients(X, y));
  return loss;
}

EpochTrace train_epochs(QNetwork& net, const std::vector<TrainBatch>& batches, Rng& rng) {
  if (batches.empty()) throw SimError("train_epochs: no batches");
  const auto total = static_cast<int>(batches.size());
  int n_val = static_cast<int>(std::floor(net.hyper.val_split * total));
  n_val = std::min(n_val, total - 1);  // always keep at least one training batch
  const int n_train = total - n_val;

  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  EpochTrace trace;
  for (int epoch = 0; epoch < net.hyper.epochs; ++epoch) {
    for (int i = n_train - 1; i > 0; --i)
      std::swap(order[i], order[rng.uniform_int(i + 1)]);
    double loss_sum = 0;
    long sample_count = 0;
    for (int i : order) {
      double loss = net.fit_batch(batches[i].X, batches[i].y);
      if (!std::isfinite(loss)) throw SimError("train_epochs: non-finite training loss");
      loss_sum += loss * static_cast<double>(batches[i].y.size());
      sample_count += batches[i].y.size();
    }
    trace.train_loss.push_back(loss_sum / static_cast<double>(sample_count));
    double vloss = 0;
    long vcount = 0;
    for (int i = n_train; i < total; ++i) {
      vloss += net.mse(batches[i].X, batches[i].y) * static_cast<double>(batches[i].y.size());
      vcount += batches[i].y.size();
    }
    trace.val_loss.push_back(vcount > 0 ? vloss / static_cast<double>(vcount) : 0.0);
  }
  return trace;
}

Eigen::VectorXd bellman_targets(const QNetwork& snapshot,
                                const std::vector<const Experience*>& exps, double gamma) {
  Eigen::VectorXd y(static_cast<int>(exps.size()));
  for (int i = 0; i < y.size(); ++i) {
    const Experience& e = *exps[i];
    if (e.terminal) {
      y[i] = e.reward;
    } else {
      if (e.next_candidates.rows() == 0)
        throw SimError("non-terminal experience with no next candidates (logging bug)");
      y[i] = e.reward + gamma * snapshot.forward(e.next_candidates).maxCoeff();
    }
  }
  return y;
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void save_qnetwork(const QNetwork& net, const std::string& path, const std::string& provenance) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open '" + path + "' for writing");
  f << "dtnq-model v1\n";
  if (!provenance.empty()) f << "provenance " << provenance << "\n";
  f << "dims";
  for (int d : net.dims) f << ' ' << d;
  f << "\nschema " << std::hex << net.schema_hash << std::dec << "\n";
  f << "hyper lr " << fmt17(net.hyper.lr) << " batch " << net.hyper.batch << " epochs "
    << net.hyper.epochs << " val_split " << fmt17(net.hyper.val_split) << " gamma "
    << fmt17(net.hyper.gamma) << "\n";
  f << "adam_steps " << net.adam_steps << "\n";
  auto dump_mat = [&](const std::string& tag, const Eigen::MatrixXd& m) {
    f << tag << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) f << (j ? " " : "") << fmt17(m(i, j));
      f << '\n';
    }
  };
  auto dump_vec = [&](const std::string& tag, const Eigen::VectorXd& v) {
    f << tag << ' ' << v.size() << '\n';
    for (int i = 0; i < v.size(); ++i) f << (i ? " " : "") << fmt17(v(i));
    f << '\n';
  };
  for (size_t l = 0; l < net.W.size(); ++l) {
    const std::string ls = std::to_string(l);
    dump_mat("W" + ls, net.W[l]);
    dump_vec("b" + ls, net.b[l]);
    dump_mat("mW" + ls, net.mW[l]);
    dump_mat("vW" + ls, net.vW[l]);
    dump_vec("mb" + ls, net.mb[l]);
    dump_vec("vb" + ls, net.vb[l]);
  }
}

QNetwork load_qnetwork(const std::string& path, uint64_t expected_schema) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open model '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != "dtnq-model v1")
    throw SchemaError(path + ": not a dtnq-model v1 file");
  std::vector<int> dims;
  uint64_t schema = 0;
  QHyper hyper;
  long adam_steps = 0;
  std::string word;
  while (f >> word) {
    if (word == "provenance") {
      std::getline(f, line);
    } else if (word == "dims") {
      std::getline(f, line);
      std::istringstream is(line);
      int d;
      while (is >> d) dims.push_back(d);
      break;
    }
  }
  if (dims.empty()) throw SchemaError(path + ": missing dims");
  if (!(f >> word) || word != "schema" || !(f >> std::hex >> schema >> std::dec))
    throw SchemaError(path + ": missing schema hash");
  if (expected_schema != 0 && schema != expected_schema)
    throw SchemaError(path + ": feature schema mismatch (model " + digest_hex(schema) +
                      ", runtime " + digest_hex(expected_schema) + ")");
  f >> word;  // hyper
  f >> word >> hyper.lr >> word >> hyper.batch >> word >> hyper.epochs >> word >>
      hyper.val_split >> word >> hyper.gamma;
  f >> word >> adam_steps;
  if (!f) throw SchemaError(path + ": truncated header");

  QNetwork net(dims, schema, 0, hyper);
  net.adam_steps = adam_steps;
  auto read_mat = [&](Eigen::MatrixXd& m, const std::string& tag) {
    long rows, cols;
    if (!(f >> word >> rows >> cols) || word != tag)
      throw SchemaError(path + ": expected " + tag);
    m.resize(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j)
        if (!(f >> m(i, j))) throw SchemaError(path + ": truncated " + tag);
  };
  auto read_vec = [&](Eigen::VectorXd& v, const std::string& tag) {
    long n;
    if (!(f >> word >> n) || word != tag) throw SchemaError(path + ": expected " + tag);
    v.resize(n);
    for (long i = 0; i < n; ++i)
      if (!(f >> v(i))) throw SchemaError(path + ": truncated " + tag);
  };
  for (size_t l = 0; l < net.W.size(); ++l) {
    const std::string ls = std::to_string(l);
    read_mat(net.W[l], "W" + ls);
    read_vec(net.b[l], "b" + ls);
    read_mat(net.mW[l], "mW" + ls);
    read_mat(net.vW[l], "vW" + ls);
    read_vec(net.mb[l], "mb" + ls);
    read_vec(net.vb[l], "vb" + ls);
  }
  return net;
}

}  // namespace dtn
