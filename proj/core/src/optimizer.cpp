#include "deltakit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace deltakit {

namespace {
constexpr double kRangeEps = 1e-9;
}

int GridRange::count() const {
  if (!(step > 0.0) || !(start <= stop) || !std::isfinite(start) ||
      !std::isfinite(step) || !std::isfinite(stop)) {
    throw ConfigError("invalid range " + std::to_string(start) + ":" +
                      std::to_string(step) + ":" + std::to_string(stop));
  }
  return static_cast<int>(std::floor((stop - start) / step + kRangeEps)) + 1;
}

double GridRange::at(int i) const { return start + step * i; }

std::vector<DeltaParams> enumerate_grid(const ParameterGrid& grid) {
  const int nl = grid.link_length.count();
  const int nw = grid.leg_width.count();
  const int np = grid.offset_angle_deg.count();
  std::vector<DeltaParams> designs;
  designs.reserve(static_cast<std::size_t>(nl) * nw * np);
  for (int il = 0; il < nl; ++il) {
    for (int iw = 0; iw < nw; ++iw) {
      for (int ip = 0; ip < np; ++ip) {
        designs.push_back(derive_radii(
            grid.link_length.at(il), grid.leg_width.at(iw),
            grid.offset_angle_deg.at(ip), grid.sr_joint_radius,
            grid.rail_azimuths_deg));
      }
    }
  }
  return designs;
}

std::vector<std::size_t> pareto_filter(std::span<const SweepEntry> entries) {
  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].score.feasible && entries[i].score.gci &&
        entries[i].score.avg_torsional_compliance) {
      feasible.push_back(i);
    }
  }
  std::vector<std::size_t> front;
  for (std::size_t i : feasible) {
    const double gi = *entries[i].score.gci;
    const double ti = *entries[i].score.avg_torsional_compliance;
    bool dominated = false;
    for (std::size_t j : feasible) {
      if (i == j) continue;
      const double gj = *entries[j].score.gci;
      const double tj = *entries[j].score.avg_torsional_compliance;
      if (gj >= gi && tj <= ti && (gj > gi || tj < ti)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

std::size_t select_design(std::span<const SweepEntry> entries,
                          std::span<const std::size_t> front,
                          const ScalarizationWeights& weights) {
  if (front.empty()) throw DomainError("cannot select from an empty front");
  if (!(weights.gci >= 0.0) || !(weights.compliance >= 0.0) ||
      std::abs(weights.gci + weights.compliance - 1.0) > 1e-9) {
    throw DomainError("scalarization weights must be non-negative and sum to 1");
  }

  // Normalization bounds over the whole feasible set, not just the front.
  double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
  double tmin = gmin, tmax = -gmin;
  for (const SweepEntry& e : entries) {
    if (!e.score.feasible || !e.score.gci) continue;
    gmin = std::min(gmin, *e.score.gci);
    gmax = std::max(gmax, *e.score.gci);
    tmin = std::min(tmin, *e.score.avg_torsional_compliance);
    tmax = std::max(tmax, *e.score.avg_torsional_compliance);
  }
  const auto norm = [](double v, double lo, double hi) {
    return hi - lo > 0.0 ? (v - lo) / (hi - lo) : 0.5;
  };

  std::size_t best = front[0];
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i : front) {
    const double g = *entries[i].score.gci;
    const double t = *entries[i].score.avg_torsional_compliance;
    const double score =
        weights.gci * norm(g, gmin, gmax) - weights.compliance * norm(t, tmin, tmax);
    const bool better =
        score > best_score ||
        (score == best_score &&
         (g > *entries[best].score.gci ||
          (g == *entries[best].score.gci &&
           entries[i].params.link_length < entries[best].params.link_length)));
    if (better) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

SweepResult run_sweep(const ParameterGrid& grid, const WorkspaceSpec& spec,
                      const ComplianceLaw& law, double tau_z_ref_Nm,
                      const ConstraintPolicy& policy,
                      const ScalarizationWeights& weights,
                      const SweepOptions& options) {
  SweepResult result;
  result.grid = grid;
  result.workspace = spec;
  result.law = law;
  result.tau_z_ref_Nm = tau_z_ref_Nm;
  result.policy = policy;
  result.weights = weights;

  const std::vector<DeltaParams> designs = enumerate_grid(grid);
  result.entries.resize(designs.size());

  unsigned n_threads = options.threads > 0
                           ? static_cast<unsigned>(options.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads,
                                 std::max<std::size_t>(designs.size(), 1));

  // Parallel map over designs; each slot is written exactly once, so the
  // result is identical for every worker count.
  auto worker = [&](std::size_t begin, std::size_t end,
                    std::exception_ptr& error) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        result.entries[i] = {designs[i], evaluate_design(designs[i], spec, law,
                                                         tau_z_ref_Nm, policy)};
      }
    } catch (...) {
      error = std::current_exception();
    }
  };

  if (n_threads <= 1) {
    std::exception_ptr error;
    worker(0, designs.size(), error);
    if (error) std::rethrow_exception(error);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    const std::size_t chunk = (designs.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(designs.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end, std::ref(errors[t]));
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& error : errors) {
      if (error) std::rethrow_exception(error);
    }
  }

  result.pareto = pareto_filter(result.entries);
  if (!result.pareto.empty()) {
    result.selected = select_design(result.entries, result.pareto, weights);
  }
  return result;
}

}  // namespace deltakit
