#include "dtn/schema.hpp"

#include <sstream>

namespace dtn {

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

const std::array<std::string, kDevicePathDim>& device_path_feature_names() {
  static const std::array<std::string, kDevicePathDim> names = {
      "queue_len",      "node_density",    "node_degree",     "dynconn_short",
      "dynconn_long",   "dispersion_short", "dispersion_long", "contact_age",
      "dst_queue_len",  "euclid_distance", "transitive_timer", "aoi"};
  return names;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> out;
  out.reserve(kFeatureDim);
  const auto& dp = device_path_feature_names();
  out.push_back("ttl");
  for (const auto& n : dp) out.push_back("self." + n);
  static const char* kStats[] = {"min", "max", "mean"};
  for (const auto& n : dp)
    for (const char* s : kStats) out.push_back("nbr_" + std::string(s) + "." + n);
  for (const auto& n : dp) out.push_back("action." + n);
  out.push_back("action.visited");
  out.push_back("action.transmit");
  return out;
}

std::string schema_text(const FeatureParams& p) {
  std::ostringstream os;
  os << "dtn-feature-schema v1\n";
  os << "dims state=" << kStateDim << " action=" << kActionDim << " total=" << kFeatureDim
     << "\n";
  os << "params S=" << p.degree_scale << " L=" << p.distance_scale << " k=" << p.sigmoid_k
     << " xbar=" << p.sigmoid_mid << " delta_s=" << p.dynconn_short
     << " delta_l=" << p.dynconn_long << " tau_s=" << p.dispersion_short
     << " tau_l=" << p.dispersion_long << " beta=" << p.dispersion_beta
     << " init_timer=" << p.init_timer << " init_dstq=" << p.init_dst_queue_frac << "\n";
  static const char* kFormulas[kDevicePathDim] = {
      "(x+1)/(B+1)",        "min(1,(x+1)/(N+1))", "min(1,(x+1)/(S+1))", "(x+1)/N",
      "(x+1)/N",            "(x+1)/(L+1)",        "(x+1)/(L+1)",        "sigmoid",
      "(x+1)/(B+1)",        "(x+1)/(L+1)",        "sigmoid",            "sigmoid"};
  os << "packet ttl (x+1)/(T+1)\n";
  const auto& dp = device_path_feature_names();
  for (int i = 0; i < kDevicePathDim; ++i)
    os << (i < kDeviceDim ? "device " : "path ") << dp[i] << " " << kFormulas[i] << "\n";
  os << "nbrhood min,max,mean over device+path of Nbr(v)\n";
  os << "context visited transmit\n";
  return os.str();
}

uint64_t schema_hash(const FeatureParams& p) { return fnv1a64(schema_text(p)); }

}  // namespace dtn
