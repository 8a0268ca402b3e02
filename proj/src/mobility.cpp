#include "dtn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dtn/errors.hpp"

namespace dtn {

namespace {

constexpr int kWarmupSteps = 5000;  // steady-state approximation for waypoint models

struct SpeedClass {
  double lo, hi;
};

SpeedClass class_of(bool fast) {
  return fast ? SpeedClass{kFastSpeedLo, kFastSpeedHi} : SpeedClass{kSlowSpeedLo, kSlowSpeedHi};
}

// Waypoint walker with per-step speed dithering: each second the node moves
// a distance drawn uniformly from its class range toward the waypoint,
// rolling leftover distance into the next leg. The per-step mean speed is
// then exactly the class mean.
struct WaypointWalker {
  Vec2 pos, target;
  SpeedClass cls;
  double pause_left = 0, pause = 0;
  Vec2 lo, hi;  // waypoint box
  long leg = 0;

  void init(Rng& rng, SpeedClass c, Vec2 boxlo, Vec2 boxhi, double pause_s) {
    cls = c;
    lo = boxlo;
    hi = boxhi;
    pause = pause_s;
    pos = {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y())};
    target = {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y())};
  }

  void step(Rng& rng) {
    if (pause_left > 0) {
      pause_left -= 1;
      return;
    }
    double budget = rng.uniform(cls.lo, cls.hi);
    while (budget > 0) {
      Vec2 d = target - pos;
      double dist = d.norm();
      if (dist <= budget) {
        pos = target;
        budget -= dist;
        ++leg;
        target = {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y())};
        if (pause > 0) {
          pause_left = pause;
          break;
        }
      } else {
        pos += d * (budget / dist);
        budget = 0;
      }
    }
  }
};

}  // namespace

struct Mobility::Impl {
  virtual ~Impl() = default;
  virtual void step(int t, std::vector<Vec2>& pos) = 0;  // called with t = 0,1,2,...
};

namespace {

struct RwpImpl : Mobility::Impl {
  std::vector<WaypointWalker> walkers;
  std::vector<Rng> rngs;

  RwpImpl(const SimConfig& cfg, const std::vector<NodeMeta>& meta) {
    Rng root = Rng(cfg.rng_seed).fork(0x6d6f62696cull);  // mobility stream
    for (int i = 0; i < cfg.node_count; ++i) {
      rngs.push_back(root.fork(i));
      WaypointWalker w;
      w.init(rngs.back(), class_of(meta[i].fast), {0, 0}, {cfg.area_width, cfg.area_height},
             cfg.mobility.pause);
      walkers.push_back(w);
    }
    for (int k = 0; k < kWarmupSteps; ++k)
      for (int i = 0; i < cfg.node_count; ++i) walkers[i].step(rngs[i]);
  }

  void step(int t, std::vector<Vec2>& pos) override {
    for (size_t i = 0; i < walkers.size(); ++i) {
      if (t > 0) walkers[i].step(rngs[i]);
      pos[i] = walkers[i].pos;
    }
  }
};

// Reference-point group mobility: each group's reference point is a slow RWP
// walker confined so the whole offset disc stays in-bounds; nodes hold an
// offset in that disc, re-drawn whenever the reference picks a new waypoint,
// and drift toward it at <= 1 m/s on top of the reference motion.
struct RpgmImpl : Mobility::Impl {
  struct GroupRef {
    WaypointWalker ref;
    Rng rng;
  };
  struct Member {
    int group;
    Vec2 offset, offset_target;
    long seen_leg = 0;
    Rng rng;
  };
  static constexpr double kOffsetDriftSpeed = 1.0;

  std::vector<GroupRef> groups;
  std::vector<Member> members;
  double radius;

  RpgmImpl(const SimConfig& cfg, const std::vector<NodeMeta>& meta) : radius(cfg.mobility.group_radius) {
    Rng root = Rng(cfg.rng_seed).fork(0x6d6f62696cull);
    const double r = radius;
    Vec2 lo{std::min(r, cfg.area_width / 2), std::min(r, cfg.area_height / 2)};
    Vec2 hi{std::max(cfg.area_width - r, cfg.area_width / 2),
            std::max(cfg.area_height - r, cfg.area_height / 2)};
    for (int g = 0; g < cfg.mobility.group_count; ++g) {
      GroupRef gr{WaypointWalker{}, root.fork(1000 + g)};
      gr.ref.init(gr.rng, class_of(false), lo, hi, cfg.mobility.pause);
      groups.push_back(std::move(gr));
    }
    for (int i = 0; i < cfg.node_count; ++i) {
      Member m{meta[i].group, {0, 0}, {0, 0}, 0, root.fork(i)};
      m.offset = sample_disc(m.rng);
      m.offset_target = m.offset;
      members.push_back(std::move(m));
    }
    for (int k = 0; k < kWarmupSteps; ++k) warm_step();
  }

  Vec2 sample_disc(Rng& rng) {
    while (true) {
      Vec2 v{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
      if (v.squaredNorm() <= radius * radius) return v;
    }
  }

  void warm_step() {
    for (auto& g : groups) g.ref.step(g.rng);
    for (auto& m : members) member_step(m);
  }

  void member_step(Member& m) {
    const auto& g = groups[m.group];
    if (g.ref.leg != m.seen_leg) {
      m.seen_leg = g.ref.leg;
      m.offset_target = sample_disc(m.rng);
    }
    Vec2 d = m.offset_target - m.offset;
    double dist = d.norm();
    if (dist <= kOffsetDriftSpeed)
      m.offset = m.offset_target;
    else
      m.offset += d * (kOffsetDriftSpeed / dist);
  }

  void step(int t, std::vector<Vec2>& pos) override {
    if (t > 0) warm_step();
    for (size_t i = 0; i < members.size(); ++i)
      pos[i] = groups[members[i].group].ref.pos + members[i].offset;
  }
};

// Manhattan grid: nodes ride grid lines, turning only at intersections
// (straight 0.5, left 0.25, right 0.25 among directions that stay in-area;
// U-turn only when nothing else is possible).
struct GridImpl : Mobility::Impl {
  struct Rider {
    Vec2 pos;
    int heading;  // 0:+x 1:+y 2:-x 3:-y
    SpeedClass cls;
  };
  std::vector<Rider> riders;
  std::vector<Rng> rngs;
  double block, w, h;

  GridImpl(const SimConfig& cfg, const std::vector<NodeMeta>& meta)
      : block(cfg.mobility.block_size), w(cfg.area_width), h(cfg.area_height) {
    Rng root = Rng(cfg.rng_seed).fork(0x6d6f62696cull);
    int nx = static_cast<int>(std::floor(w / block));
    int ny = static_cast<int>(std::floor(h / block));
    for (int i = 0; i < cfg.node_count; ++i) {
      rngs.push_back(root.fork(i));
      Rng& rng = rngs.back();
      Rider r;
      r.cls = class_of(meta[i].fast);
      if (rng.uniform_int(2) == 0) {  // on a horizontal line
        double y = block * rng.uniform_int(ny + 1);
        r.pos = {rng.uniform(0, w), y};
        r.heading = rng.uniform_int(2) == 0 ? 0 : 2;
      } else {
        double x = block * rng.uniform_int(nx + 1);
        r.pos = {x, rng.uniform(0, h)};
        r.heading = rng.uniform_int(2) == 0 ? 1 : 3;
      }
      riders.push_back(r);
    }
  }

  static Vec2 dir(int heading) {
    switch (heading & 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

  bool in_area(Vec2 p) const {
    return p.x() >= -1e-9 && p.x() <= w + 1e-9 && p.y() >= -1e-9 && p.y() <= h + 1e-9;
  }

  int pick_turn(Rng& rng, Vec2 at, int heading) {
    // candidate headings: straight, left, right with probs .5/.25/.25
    int straight = heading, left = (heading + 1) & 3, right = (heading + 3) & 3;
    double probe = block * 1e-3;
    auto ok = [&](int hd) { return in_area(at + dir(hd) * probe); };
    std::vector<std::pair<int, double>> opts;
    if (ok(straight)) opts.push_back({straight, 0.5});
    if (ok(left)) opts.push_back({left, 0.25});
    if (ok(right)) opts.push_back({right, 0.25});
    if (opts.empty()) return (heading + 2) & 3;  // U-turn at a dead end
    double total = 0;
    for (auto& o : opts) total += o.second;
    double u = rng.uniform() * total;
    for (auto& o : opts) {
      if (u < o.second) return o.first;
      u -= o.second;
    }
    return opts.back().first;
  }

  void step_rider(Rider& r, Rng& rng) {
    double budget = rng.uniform(r.cls.lo, r.cls.hi);
    // at most one intersection crossing per step (speed < block size)
    Vec2 d = dir(r.heading);
    int axis = (r.heading & 1);  // 0: moving in x, 1: moving in y
    double coord = axis == 0 ? r.pos.x() : r.pos.y();
    double sgn = (r.heading == 0 || r.heading == 1) ? 1.0 : -1.0;
    // next intersection along the direction of travel
    double k = sgn > 0 ? std::floor(coord / block + 1e-9) + 1 : std::ceil(coord / block - 1e-9) - 1;
    double boundary = k * block;
    double to_boundary = std::abs(boundary - coord);
    if (to_boundary <= budget) {
      // snap exactly onto the intersection, then maybe turn
      if (axis == 0) r.pos.x() = boundary; else r.pos.y() = boundary;
      budget -= to_boundary;
      r.heading = pick_turn(rng, r.pos, r.heading);
      d = dir(r.heading);
    }
    r.pos += d * budget;
    r.pos.x() = std::clamp(r.pos.x(), 0.0, w);
    r.pos.y() = std::clamp(r.pos.y(), 0.0, h);
  }

  void step(int t, std::vector<Vec2>& pos) override {
    for (size_t i = 0; i < riders.size(); ++i) {
      if (t > 0) step_rider(riders[i], rngs[i]);
      pos[i] = riders[i].pos;
    }
  }
};

struct TraceImpl : Mobility::Impl {
  TraceTable table;
  explicit TraceImpl(const SimConfig& cfg) {
    table = load_trace(cfg.mobility.trace_path);
    if (table.node_count != cfg.node_count)
      throw ConfigError(cfg.scenario_id + ": trace has " + std::to_string(table.node_count) +
                        " nodes, config says " + std::to_string(cfg.node_count));
    if (table.duration < cfg.duration)
      throw ConfigError(cfg.scenario_id + ": trace covers " + std::to_string(table.duration) +
                        " steps, config needs " + std::to_string(cfg.duration));
  }
  void step(int t, std::vector<Vec2>& pos) override { pos = table.pos[t]; }
};

std::vector<NodeMeta> assign_meta(const SimConfig& cfg) {
  std::vector<NodeMeta> meta(cfg.node_count);
  // fast nodes take the high ids; rpgm groups split ids contiguously
  const int slow = cfg.slow_count();
  for (int i = 0; i < cfg.node_count; ++i) meta[i].fast = i >= slow;
  if (cfg.mobility.model == MobilityModel::kRpgm) {
    const int g = cfg.mobility.group_count;
    const int per = (cfg.node_count + g - 1) / g;
    for (int i = 0; i < cfg.node_count; ++i) meta[i].group = std::min(i / per, g - 1);
  }
  return meta;
}

}  // namespace

Mobility::Mobility(const SimConfig& cfg) {
  meta_ = assign_meta(cfg);
  pos_.resize(cfg.node_count);
  switch (cfg.mobility.model) {
    case MobilityModel::kRwp: impl_ = std::make_shared<RwpImpl>(cfg, meta_); break;
    case MobilityModel::kRpgm: impl_ = std::make_shared<RpgmImpl>(cfg, meta_); break;
    case MobilityModel::kGrid: impl_ = std::make_shared<GridImpl>(cfg, meta_); break;
    case MobilityModel::kTrace: impl_ = std::make_shared<TraceImpl>(cfg); break;
  }
  advance_to(0);
}

void Mobility::advance_to(int t) {
  if (t == t_) return;
  if (t != t_ + 1) throw SimError("Mobility::advance_to must be called sequentially");
  impl_->step(t, pos_);
  t_ = t;
}

TraceTable load_trace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open trace '" + path + "'");
  struct Sample {
    int t, node;
    double x, y;
  };
  std::vector<Sample> samples;
  int max_t = -1, max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("t,", 0) == 0) continue;  // header
    Sample s{};
    char extra;
    int got = std::sscanf(line.c_str(), "%d ,%d ,%lf ,%lf %c", &s.t, &s.node, &s.x, &s.y, &extra);
    if (got != 4)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed trace line '" + line +
                        "'");
    if (s.t < 0 || s.node < 0)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": negative t or node id");
    samples.push_back(s);
    max_t = std::max(max_t, s.t);
    max_node = std::max(max_node, s.node);
  }
  if (samples.empty()) throw ConfigError(path + ": empty trace");
  TraceTable table;
  table.node_count = max_node + 1;
  table.duration = max_t + 1;
  table.pos.assign(table.duration, std::vector<Vec2>(table.node_count, Vec2{-1, -1}));
  std::vector<std::vector<bool>> seen(table.duration, std::vector<bool>(table.node_count, false));
  for (const auto& s : samples) {
    if (seen[s.t][s.node])
      throw ConfigError(path + ": duplicate sample for node " + std::to_string(s.node) + " at t=" +
                        std::to_string(s.t));
    seen[s.t][s.node] = true;
    table.pos[s.t][s.node] = {s.x, s.y};
  }
  for (int t = 0; t < table.duration; ++t)
    for (int n = 0; n < table.node_count; ++n)
      if (!seen[t][n])
        throw ConfigError(path + ": gap: node " + std::to_string(n) + " missing at t=" +
                          std::to_string(t));
  return table;
}

void export_trace(const SimConfig& cfg, int steps, const std::string& out_path) {
  Mobility mob(cfg);
  std::ofstream f(out_path);
  if (!f) throw ConfigError("cannot open '" + out_path + "' for writing");
  f << "t,node_id,x,y\n";
  char buf[128];
  for (int t = 0; t < steps; ++t) {
    mob.advance_to(t);
    const auto& pos = mob.positions();
    for (int n = 0; n < static_cast<int>(pos.size()); ++n) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f\n", t, n, pos[n].x(), pos[n].y());
      f << buf;
    }
  }
}

}  // namespace dtn
