#include "kevt/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "kevt/error.hpp"
#include "kevt/rng.hpp"

namespace kevt {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double beta_step(double beta, double x) noexcept { return wrap_unit(beta * x); }

}  // namespace

MapModel MapModel::doubling() { return MapModel(DoublingMap{}); }

MapModel MapModel::beta(double beta) {
  if (!(beta > 1.0)) throw InvalidInput("beta map requires beta > 1");
  return MapModel(BetaMap{beta});
}

MapModel MapModel::toral(int a, int b, int c, int d) {
  const long det = static_cast<long>(a) * d - static_cast<long>(b) * c;
  if (det != 1 && det != -1) throw InvalidInput("toral map requires det = +-1");
  const double tr = a + d;
  const double disc = tr * tr - 4.0 * static_cast<double>(det);
  if (disc < 0.0) throw InvalidInput("toral map eigenvalues must be real");
  const double l1 = 0.5 * (tr + std::sqrt(disc));
  const double l2 = 0.5 * (tr - std::sqrt(disc));
  if (!(l1 > 0.0 && l2 > 0.0)) throw InvalidInput("toral map eigenvalues must be positive");
  if (std::fabs(l1 - 1.0) < 1e-12 || std::fabs(l2 - 1.0) < 1e-12)
    throw InvalidInput("toral map eigenvalues must be off the unit circle");
  return MapModel(ToralMap{a, b, c, d});
}

MapModel MapModel::coupled(double beta, double gamma, int m) {
  if (!(beta > 1.0)) throw InvalidInput("coupled map requires beta > 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("coupled map requires 0 < gamma < 1");
  if (m < 2) throw InvalidInput("coupled map requires m >= 2");
  if (!((1.0 - gamma) * beta > 1.0))
    throw InvalidInput("coupled map requires transverse expansion (1 - gamma) beta > 1");
  return MapModel(CoupledMap{beta, gamma, m});
}

Eigen::Index MapModel::dimension() const noexcept {
  return std::visit(overloaded{[](const DoublingMap&) -> Eigen::Index { return 1; },
                               [](const BetaMap&) -> Eigen::Index { return 1; },
                               [](const ToralMap&) -> Eigen::Index { return 2; },
                               [](const CoupledMap& c) -> Eigen::Index { return c.m; }},
                    v_);
}

std::string MapModel::name() const {
  return std::visit(overloaded{[](const DoublingMap&) { return std::string("doubling"); },
                               [](const BetaMap&) { return std::string("beta"); },
                               [](const ToralMap&) { return std::string("toral"); },
                               [](const CoupledMap&) { return std::string("coupled"); }},
                    v_);
}

double MapModel::toral_unstable_eigenvalue() const {
  const auto* t = std::get_if<ToralMap>(&v_);
  if (!t) throw InvalidInput("not a toral map");
  Eigen::Matrix2d a;
  a << t->a, t->b, t->c, t->d;
  const Eigen::Vector2cd ev = a.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

void step_into(const MapModel& map, const double* x, double* out) {
  std::visit(overloaded{[&](const DoublingMap&) { out[0] = wrap_unit(2.0 * x[0]); },
                        [&](const BetaMap& b) { out[0] = beta_step(b.beta, x[0]); },
                        [&](const ToralMap& t) {
                          const double u = t.a * x[0] + t.b * x[1];
                          const double v = t.c * x[0] + t.d * x[1];
                          out[0] = wrap_unit(u);
                          out[1] = wrap_unit(v);
                        },
                        [&](const CoupledMap& c) {
                          // out may alias x, so compute images first.
                          double mean = 0.0;
                          for (int j = 0; j < c.m; ++j) {
                            out[j] = beta_step(c.beta, x[j]);
                            mean += out[j];
                          }
                          mean = c.gamma * mean / c.m;
                          for (int j = 0; j < c.m; ++j)
                            out[j] = wrap_unit((1.0 - c.gamma) * out[j] + mean);
                        }},
             map.variant());
}

StatePoint step(const MapModel& map, const StatePoint& x) {
  if (x.size() != map.dimension())
    throw InvalidInput("state dimension " + std::to_string(x.size()) +
                       " does not match map dimension " + std::to_string(map.dimension()));
  StatePoint out(x.size());
  step_into(map, x.data(), out.data());
  return out;
}

void SimConfig::validate() const {
  if (n_trajectories <= 0) throw InvalidInput("n_trajectories must be positive");
  if (trajectory_length <= 0) throw InvalidInput("trajectory_length must be positive");
  if (!(noise_amplitude >= 0.0 && noise_amplitude <= 1e-6))
    throw InvalidInput("noise_amplitude must lie in [0, 1e-6]");
}

Trajectory simulate_trajectory(const MapModel& map, const SimConfig& cfg, int index,
                               const std::optional<StatePoint>& start) {
  cfg.validate();
  const Eigen::Index dim = map.dimension();
  const auto stride = static_cast<std::uint64_t>((dim + 1) / 2);
  const CounterStream rng(cfg.master_seed, static_cast<std::uint64_t>(index));

  Trajectory traj(cfg.trajectory_length, dim);
  if (start) {
    if (start->size() != dim) throw InvalidInput("start point dimension mismatch");
    for (Eigen::Index c = 0; c < dim; ++c) traj(0, c) = wrap_unit((*start)[c]);
  } else {
    for (Eigen::Index c = 0; c < dim; ++c)
      traj(0, c) = rng.uniform(static_cast<std::uint64_t>(c / 2), static_cast<unsigned>(c % 2));
  }

  const double eps = cfg.noise_amplitude;
  for (Eigen::Index s = 1; s < traj.rows(); ++s) {
    double* row = traj.row(s).data();
    step_into(map, traj.row(s - 1).data(), row);
    if (eps > 0.0) {
      const std::uint64_t base = static_cast<std::uint64_t>(s) * stride;
      for (Eigen::Index c = 0; c < dim; c += 2) {
        const auto u = rng.uniform2(base + static_cast<std::uint64_t>(c / 2));
        row[c] = wrap_unit(row[c] + eps * (2.0 * u[0] - 1.0));
        if (c + 1 < dim) row[c + 1] = wrap_unit(row[c + 1] + eps * (2.0 * u[1] - 1.0));
      }
    }
  }
  return traj;
}

std::vector<Trajectory> simulate(const MapModel& map, const SimConfig& cfg,
                                 const std::optional<StatePoint>& start) {
  cfg.validate();
  std::vector<Trajectory> out(static_cast<std::size_t>(cfg.n_trajectories));
  parallel_for(cfg.n_trajectories,
               [&](int i) { out[static_cast<std::size_t>(i)] = simulate_trajectory(map, cfg, i, start); });
  return out;
}

bool is_fixed_point(const MapModel& map, const StatePoint& x0) {
  const StatePoint y = step(map, x0);
  double d2 = 0.0;
  for (Eigen::Index c = 0; c < x0.size(); ++c) {
    const double g = circle_gap(x0[c], y[c]);
    d2 += g * g;
  }
  return std::sqrt(d2) < 1e-12;
}

double expansion_rate(const MapModel& map, const TargetSet& target) {
  if (std::holds_alternative<SynchronyDiagonal>(target)) {
    const auto* c = std::get_if<CoupledMap>(&map.variant());
    if (!c) throw Unsupported("synchrony diagonal target requires a coupled map");
    return (1.0 - c->gamma) * c->beta;
  }
  const auto& x0 = std::get<PointTarget>(target).x0;
  if (x0.size() != map.dimension()) throw InvalidInput("target dimension mismatch");
  if (std::holds_alternative<CoupledMap>(map.variant()))
    throw Unsupported("point targets are not supported for coupled maps");
  if (!is_fixed_point(map, x0)) throw Unsupported("target point is not invariant under the map");
  return std::visit(overloaded{[](const DoublingMap&) { return 2.0; },
                               [](const BetaMap& b) { return b.beta; },
                               [&](const ToralMap&) { return map.toral_unstable_eigenvalue(); },
                               [](const CoupledMap&) { return 0.0; }},
                    map.variant());
}

void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs) {
  const Eigen::Index dim = trajs.empty() ? 1 : trajs.front().cols();
  os << "traj_id,step";
  for (Eigen::Index c = 0; c < dim; ++c) os << ",x" << c;
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Trajectory& t = trajs[i];
    for (Eigen::Index s = 0; s < t.rows(); ++s) {
      os << i << ',' << s;
      for (Eigen::Index c = 0; c < t.cols(); ++c) os << ',' << t(s, c);
      os << '\n';
    }
  }
  os.precision(old);
}

void parallel_for(int n, const std::function<void(int)>& fn, unsigned threads) {
  if (n <= 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kevt
