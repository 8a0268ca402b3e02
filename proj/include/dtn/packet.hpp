#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace dtn {

enum class PacketStatus { kInFlight, kDelivered, kDroppedTtl, kDroppedBuffer };

std::string to_string(PacketStatus s);

struct Packet {
  int id = -1;
  int flow = -1;
  int src = -1, dst = -1;
  int created_at = 0;
  int ttl_remaining = 0;
  int holder = -1;
  std::vector<int> visited;  // in visit order, starts at {src}
  PacketStatus status = PacketStatus::kInFlight;
  int forwards = 0;
  int delivered_at = -1;

  bool has_visited(int node) const {
    return std::find(visited.begin(), visited.end(), node) != visited.end();
  }
};

struct Flow {
  int id = -1;
  int src = -1, dst = -1;
  int start = 0, end = 0;  // active while start <= t < end
};

}  // namespace dtn
