#pragma once

// Combinatorial operators: the s-sparse projection and the proximal map of
// the 0/1 loss, with their fixed-point tests.

#include <cstddef>
#include <span>

#include "hmsvm/linalg.hpp"

namespace hmsvm {

/// Resolution of the two-valued prox at t == nu.
enum class BoundaryRule { PreferZero, PreferKeep };

/// Deterministic member of the set of s-largest supports.
enum class TieRule { LowestIndex };

inline constexpr double kDefaultTolerance = 1e-9;

/// Number of strictly positive coordinates (the 0/1 loss summed over samples).
std::size_t zero_one_count(std::span<const double> xi);

/// Proximal map of the scalar 0/1 loss: min(0, t) below nu, t above nu.
double positive_hard_threshold(double t, double nu,
                               BoundaryRule rule = BoundaryRule::PreferZero);

struct HardMarginProx {
  Vector proxed;
  IndexSet active;  ///< coordinates where proxed is nonzero, ascending
};

/// Coordinatewise positive hard-thresholding with nu = sqrt(2 * beta_lambda).
HardMarginProx prox_hard_margin(std::span<const double> xi, double beta_lambda,
                                BoundaryRule rule = BoundaryRule::PreferZero);

/// Moreau envelope of lambda * J with parameter beta, evaluated in closed form:
/// sum_i phi(v_i), phi(v) = 0 for v <= 0 and min(lambda, v^2 / (2 beta)) otherwise.
double moreau_envelope_hard_margin(std::span<const double> v, double beta, double lambda);

struct SparseProjection {
  Vector projected;
  IndexSet support;  ///< ascending indices of the kept coordinates
};

/// Indices of the s largest |w_i| (ties to the lowest index), ascending.
/// Returns every index when s >= w.size().
IndexSet largest_support(std::span<const double> w, std::size_t s,
                         TieRule rule = TieRule::LowestIndex);

/// Euclidean projection onto {x : ||x||_0 <= s}.
SparseProjection project_sparse(std::span<const double> w, std::size_t s,
                                TieRule rule = TieRule::LowestIndex);

/// s-th largest absolute value of w (0 when s > w.size()).
double kth_largest_magnitude(std::span<const double> w, std::size_t s);

/// Tests w in Proj_S(w - alpha q): q vanishes on supp(w) and is bounded by
/// |w|_(s) / alpha elsewhere.
bool fixed_point_check_projection(std::span<const double> w, std::span<const double> q,
                                  double alpha, std::size_t s, double tol = kDefaultTolerance);

/// Tests xi in Prox_{beta lambda J}(xi + beta v).
bool fixed_point_check_prox(std::span<const double> xi, std::span<const double> v, double beta,
                            double lambda, double tol = kDefaultTolerance);

}  // namespace hmsvm
