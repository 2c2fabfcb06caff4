#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "kevt/state.hpp"

namespace kevt {

struct DoublingMap {};

/// T(x) = beta * x (mod 1).
struct BetaMap {
  double beta;
};

/// Integer 2x2 toral automorphism [[a, b], [c, d]].
struct ToralMap {
  int a, b, c, d;
};

/// All-to-all coupled beta maps,
/// F_j(x) = (1 - gamma) T(x_j) + gamma/m * sum_i T(x_i)  (mod 1).
struct CoupledMap {
  double beta;
  double gamma;
  int m;
};

class MapModel {
 public:
  using Variant = std::variant<DoublingMap, BetaMap, ToralMap, CoupledMap>;

  static MapModel doubling();
  static MapModel beta(double beta);
  static MapModel toral(int a, int b, int c, int d);
  static MapModel coupled(double beta, double gamma, int m);

  const Variant& variant() const noexcept { return v_; }
  Eigen::Index dimension() const noexcept;
  std::string name() const;

  /// Largest eigenvalue of the toral matrix; only meaningful for ToralMap.
  double toral_unstable_eigenvalue() const;

 private:
  explicit MapModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

StatePoint step(const MapModel& map, const StatePoint& x);

/// In-place image of one row; the hot path of simulate.
void step_into(const MapModel& map, const double* x, double* out);

struct SimConfig {
  int n_trajectories = 500;
  int trajectory_length = 10000;
  std::uint64_t master_seed = 0;
  double noise_amplitude = 1e-8;

  void validate() const;
};

/// Trajectory `index` of the ensemble described by `cfg`.
///
/// Randomness comes from the Philox stream (master_seed, index): counter
/// position s * ceil(dim/2) + c/2, lane c%2, drives coordinate c at step s.
/// Step 0 draws the uniform initial condition (unless `start` is given),
/// step s >= 1 draws the uniform [-eps, eps] perturbation added after the
/// deterministic image. Results therefore do not depend on scheduling.
Trajectory simulate_trajectory(const MapModel& map, const SimConfig& cfg, int index,
                               const std::optional<StatePoint>& start = std::nullopt);

std::vector<Trajectory> simulate(const MapModel& map, const SimConfig& cfg,
                                 const std::optional<StatePoint>& start = std::nullopt);

/// Expansion transverse to `target`: |DT| at a fixed point for interval maps,
/// the unstable eigenvalue for toral maps, (1 - gamma) beta for the
/// synchrony diagonal of a coupled map.
double expansion_rate(const MapModel& map, const TargetSet& target);

/// True when `x0` is mapped to itself (circle/torus metric, 1e-12).
bool is_fixed_point(const MapModel& map, const StatePoint& x0);

/// Header `traj_id,step,x0[,x1,...]`, one row per step.
void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs);

/// Run `fn(i)` for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(int n, const std::function<void(int)>& fn, unsigned threads = 0);

}  // namespace kevt
