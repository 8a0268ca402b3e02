#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dtn {

// Fixed normalization constants shared by every scenario. T, B and N are
// per-scenario normalizers and live in SimConfig instead: the same model
// must run on networks of different size.
struct FeatureParams {
  double degree_scale = 10.0;      // S
  double distance_scale = 1500.0;  // L, metres
  double sigmoid_k = 0.01;         // k
  double sigmoid_mid = 200.0;      // x-bar, seconds
  int dynconn_short = 100;         // delta_s, seconds
  int dynconn_long = 500;          // delta_l, seconds
  int dispersion_short = 10;       // tau_s, seconds
  int dispersion_long = 100;       // tau_l, seconds
  double dispersion_beta = 0.5;    // EWMA weight
  double init_timer = 200.0;       // transitive timer / AoI / contact age init, seconds
  double init_dst_queue_frac = 0.1;  // init dst-queue = 0.1 * B
};

constexpr int kDeviceDim = 8;
constexpr int kPathDim = 4;
constexpr int kDevicePathDim = kDeviceDim + kPathDim;
constexpr int kStateDim = 1 + kDevicePathDim + 3 * kDevicePathDim;  // 49
constexpr int kActionDim = kDevicePathDim + 2;                      // 14
constexpr int kFeatureDim = kStateDim + kActionDim;                 // 63

// Normalization formulas from the feature table. All outputs are in [0,1].
inline double norm_count(double x, double cap) { return (x + 1.0) / (cap + 1.0); }
inline double norm_count_clamped(double x, double cap) {
  return std::min(1.0, (x + 1.0) / (cap + 1.0));
}
inline double norm_fraction(double x, double n) { return std::min(1.0, (x + 1.0) / n); }
inline double norm_sigmoid(double x, const FeatureParams& p) {
  return 1.0 / (1.0 + std::exp(-p.sigmoid_k * (x - p.sigmoid_mid)));
}
inline double norm_distance(double x, const FeatureParams& p) {
  return std::min(1.0, (x + 1.0) / (p.distance_scale + 1.0));
}

const std::array<std::string, kDevicePathDim>& device_path_feature_names();
std::vector<std::string> feature_names();  // all kFeatureDim, in vector order

// Canonical schema text (ordered names, symbolic formulas, fixed params)
// and its 64-bit fingerprint. Embedded in model files and experience logs.
std::string schema_text(const FeatureParams& p);
uint64_t schema_hash(const FeatureParams& p);

uint64_t fnv1a64(const std::string& s);

}  // namespace dtn
