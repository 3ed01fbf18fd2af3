#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chunknet {

/// All bounds use base-2 logarithms: the code is over GF(2) and k + log2(1/eps)
/// is the standard full-rank bound for dense binary matrices. The base is a
/// parameter everywhere so its effect can be probed.
inline constexpr double kDefaultLogBase = 2.0;

struct BoundTerm {
    std::string name;
    double value = 0.0;
};

/// A sufficient-capacity bound broken into its additive terms. n_min is the
/// exact left-to-right sum of `terms`. `conditions` carries the asymptotic
/// hypotheses attached to the bound as dimensionless ratios (lhs/rhs of the
/// little-o statement evaluated at these parameters; << 1 means the regime is
/// plausibly respected, >> 1 means the bound is extrapolated far outside it).
struct BoundResult {
    std::string label;
    double n_min = 0.0;
    std::vector<BoundTerm> terms;
    std::vector<std::pair<std::string, double>> conditions;
    std::string note; // caveats, e.g. kappa reported at its upper bound
};

/// Dense code over a flow path: n >= k + l*log(kl/eps) + log(1/eps) + l + 1.
BoundResult dense_bound(double k, double l, double eps, double log_base = kDefaultLogBase);

/// Chunked code: n >= k + q*l*log(kl/eps) + q*log(1/eps) + q*log(q) + q,
/// under l^4 q^2 log(kl/eps) = o(k).
BoundResult cc_bound(double k, double l, double q, double eps,
                     double log_base = kDefaultLogBase);

/// Overlapped chunked code with overlap gamma >= sqrt(k):
/// n > k + q*l*log(kl/eps) + q*l + log(1/eps) + 1.
BoundResult occ_bound(double k, double l, double q, double eps,
                      double log_base = kDefaultLogBase);

/// Overlapped chunked code with gamma < sqrt(k): n >= k + q*l*log(kl/eps) +
/// kappa, with kappa reported at its upper bound q*log(1/eps) + q*log(q) + q
/// (tight for tau = 1, looser as tau grows).
BoundResult occ_small_overlap_bound(double k, double l, double q, double eps,
                                    double log_base = kDefaultLogBase);

enum class ErasureKind { Dense, Chunked };

/// Erasure-channel (l = 0 internal nodes) bounds: dense n > k + log(1/eps);
/// chunked n > k + q*log(1/eps) + q*log(q).
BoundResult erasure_bound(ErasureKind kind, double k, double q, double eps,
                          double log_base = kDefaultLogBase);

/// Per-chunk flow capacity lower bound
///   (1 - C*((l^4 q^2 / n) * log(l*n/eps))^(1/4)) * (n/q).
/// The hidden constant of the O(.) is unknown; C defaults to 1 and the value
/// is indicative only. Easily negative at desk scale, which just means the
/// asymptotic hypothesis (condition ratio >> 1) is violated there.
double lemma3_flow_bound(double n, double l, double q, double eps, double big_o_constant = 1.0,
                         double log_base = kDefaultLogBase);

/// Proof-internal per-chunk density threshold n/q - l*(log(n/q) + log(1/eps)
/// + log(l) + 1); exposed as a diagnostic only.
double per_chunk_density_threshold(double n, double l, double q, double eps,
                                   double log_base = kDefaultLogBase);

/// The four asymptotic conditions as (name, lhs/rhs) ratios:
///   (1) l^4 q^2 log(l*n/eps) = o(n)
///   (2) q^2 log(n/eps)       = o(n)
///   (3) l^4 q^2 log(k*l/eps) = o(k)
///   (4) tau = o(alpha / (l^4 q log(k*l/eps)))
std::vector<std::pair<std::string, double>> condition_diagnostics(
    double k, double n, double l, double q, double tau, double alpha, double eps,
    double log_base = kDefaultLogBase);

/// Conjectured rank-failure probability of a k x n banded random binary
/// matrix with large-enough apertures: 2^-(n-k); with eps supplied, the
/// balanced-aperture variant eps * 2^-(n-k). Returns 1 when n < k (failure
/// certain by counting). Probabilities are clamped to [0, 1].
double conjecture_rank_failure_prob(double k, double n, std::optional<double> eps = {});

} // namespace chunknet
