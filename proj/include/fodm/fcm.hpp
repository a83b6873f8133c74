#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fodm/config.hpp"
#include "fodm/error.hpp"
#include "fodm/membership.hpp"

namespace fodm {

/// Result of clustering one attribute: centers ascend and membership
/// columns follow them, so column i belongs to the i-th label.
struct ClusterModel {
  std::string attribute;
  std::vector<double> centers;
  MembershipMatrix memberships;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;  // objective after each alternating pass
};

/// Memberships of a single value against fixed centers:
/// u_i = 1 / sum_j (|x-c_i| / |x-c_j|)^(2/(m-1)). A value sitting on a
/// center is crisply that center's. The result sums to 1.
inline std::vector<double> membership_of(double x, std::span<const double> centers, double m) {
  const std::size_t k = centers.size();
  std::vector<double> u(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (x == centers[i]) {
      u[i] = 1.0;
      return u;
    }
  }
  const double expo = 2.0 / (m - 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double di = std::fabs(x - centers[i]);
    double denom = 0.0;
    for (std::size_t j = 0; j < k; ++j) denom += std::pow(di / std::fabs(x - centers[j]), expo);
    u[i] = 1.0 / denom;
  }
  return u;
}

/// J = sum_i sum_p u_ip^m * (x_p - c_i)^2; zero exactly when every point
/// sits on a center with crisp membership.
inline double fcm_objective(std::span<const double> values, std::span<const double> centers,
                            const MembershipMatrix& memberships, double m) {
  double j = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p)
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = values[p] - centers[c];
      j += std::pow(memberships.at(p, c), m) * d * d;
    }
  return j;
}

namespace detail {

inline std::vector<double> quantile_init(std::span<const double> values, int k, std::uint64_t seed) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> centers(k);
  for (int i = 0; i < k; ++i) {
    const double pos = (i + 0.5) / k * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    centers[i] = lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
  }
  const double range = sorted.back() - sorted.front();
  const double eps = 1e-9 * (range > 0 ? range : 1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool dup = false;
    for (int i = 0; i < k && !dup; ++i)
      for (int j = i + 1; j < k && !dup; ++j)
        if (std::fabs(centers[i] - centers[j]) < eps) dup = true;
    if (!dup) return centers;
    for (int i = 1; i < k; ++i) centers[i] += dist(rng) * 1e-3 * (range > 0 ? range : 1.0);
  }
  throw DegenerateDataError("could not seed distinct initial centers");
}

// Re-seeds collapsed centers at the point farthest from its nearest center.
// Returns how many repairs were applied.
inline int repair_coincident_centers(std::span<const double> values, std::vector<double>& centers,
                                     double scale) {
  int repairs = 0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (std::fabs(centers[i] - centers[j]) >= 1e-12 * scale) continue;
      double best_val = values[0];
      double best_dist = -1.0;
      for (double x : values) {
        double nearest = std::numeric_limits<double>::infinity();
        for (double c : centers) nearest = std::min(nearest, std::fabs(x - c));
        if (nearest > best_dist) {
          best_dist = nearest;
          best_val = x;
        }
      }
      centers[j] = best_val;
      ++repairs;
    }
  }
  return repairs;
}

}  // namespace detail

/// Alternating-optimization fuzzy c-means over one attribute's values.
/// Deterministic for a fixed spec (seed included); clusters are re-indexed
/// so centers ascend before the model is returned.
inline ClusterModel cluster_attribute(std::span<const double> values, const AttributeSpec& spec,
                                      const std::vector<std::string>& object_ids,
                                      int first_cluster_ordinal = 1) {
  const std::size_t n = values.size();
  const int k = spec.k;
  if (n < 2) throw ValidationError(spec.attribute + ": need at least 2 values");
  if (k < 2 || static_cast<std::size_t>(k) >= n)
    throw ValidationError(spec.attribute + ": cluster count " + std::to_string(k) +
                          " must satisfy 2 <= k < " + std::to_string(n));
  if (object_ids.size() != n) throw InternalError("object id / value count mismatch");

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  if (*min_it == *max_it)
    throw DegenerateDataError(spec.attribute + ": all values identical, distinct centers impossible");
  const double scale = std::max({std::fabs(*min_it), std::fabs(*max_it), 1.0});

  std::vector<double> centers = detail::quantile_init(values, k, spec.seed);

  MembershipMatrix u;
  u.object_ids = object_ids;
  for (int c = 0; c < k; ++c) u.cluster_ids.push_back("C" + std::to_string(first_cluster_ordinal + c));
  u.mu.assign(n * k, 0.0);

  ClusterModel model;
  model.attribute = spec.attribute;
  int total_repairs = 0;
  double j_prev = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= spec.max_iter; ++iter) {
    for (std::size_t p = 0; p < n; ++p) {
      const std::vector<double> row = membership_of(values[p], centers, spec.fuzzifier_m);
      std::copy(row.begin(), row.end(), u.mu.begin() + static_cast<std::ptrdiff_t>(p * k));
    }
    for (int c = 0; c < k; ++c) {
      double num = 0.0, den = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        const double w = std::pow(u.at(p, c), spec.fuzzifier_m);
        num += w * values[p];
        den += w;
      }
      if (den > 0) centers[c] = num / den;
    }
    total_repairs += detail::repair_coincident_centers(values, centers, scale);
    if (total_repairs > 3)
      throw DegenerateDataError(spec.attribute + ": centers keep collapsing, data too degenerate");
    const double j = fcm_objective(values, centers, u, spec.fuzzifier_m);
    model.objective_trace.push_back(j);
    model.iterations = iter;
    if (j_prev - j < spec.tol) break;
    j_prev = j;
  }
  model.objective = model.objective_trace.back();

  // bind columns to ascending centers; stable so ties keep original index
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return centers[a] < centers[b]; });
  model.centers.resize(k);
  model.memberships.object_ids = u.object_ids;
  model.memberships.cluster_ids = u.cluster_ids;  // ids stay positional
  model.memberships.mu.assign(n * k, 0.0);
  for (int c = 0; c < k; ++c) {
    model.centers[c] = centers[order[c]];
    for (std::size_t p = 0; p < n; ++p) model.memberships.mu[p * k + c] = u.at(p, order[c]);
  }
  return model;
}

}  // namespace fodm
