#pragma once
//
// Decremental greedy beam selection. Beams are removed one at a time, each
// step dropping the beam whose removal least increases Tr((H H^H)^-1); the
// running Gram inverse is maintained by Sherman-Morrison downdates. Also
// here: the from-scratch reference implementation, the exhaustive oracle,
// leverage-score pre-selection, and the norm / rate guarantees that relate
// the reduced system to the full one.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "beamsel/linalg.hpp"
#include "beamsel/rng.hpp"

namespace beamsel {

inline constexpr double kInfiniteCost =
    std::numeric_limits<double>::infinity();

struct SelectionResult {
  std::vector<std::size_t> selected;    // surviving columns, ascending
  std::vector<std::size_t> eliminated;  // removal order
  std::vector<double> step_costs;       // Tr of the Gram inverse after each removal
  double final_norm_sq = 0.0;           // ||H_s^+||_F^2
};

// Tr((H H^H - h_j h_j^H)^-1) for every column j, computed from the cached
// Gram inverse; +inf where the removal would break full row rank. Requires
// strictly more columns than rows.
std::vector<double> single_step_costs(const ComplexMatrix& h);

// Greedy removal down to k columns, n_u <= k <= n_b. Ties pick the lowest
// column index. Throws InfeasibleSelection if no rank-preserving removal
// remains before reaching k.
SelectionResult decremental_select(const ComplexMatrix& h, std::size_t k);

// Same contract, but every candidate cost is recomputed by a fresh
// factorization instead of a rank-1 downdate. Validation reference for the
// fast path.
SelectionResult decremental_select_naive(const ComplexMatrix& h,
                                         std::size_t k);

// Restrict a deeper greedy run to its state after n_b - k removals. Greedy
// removals are nested, so this equals decremental_select(h, k).
SelectionResult selection_at(const SelectionResult& run, std::size_t n_b,
                             std::size_t k, double full_norm_sq);

inline constexpr std::uint64_t kDefaultExhaustiveCap = 1'000'000;

// Minimum-norm subset over all C(n_b, k) combinations; ties resolve to the
// lexicographically smallest index set. Refuses to enumerate more than `cap`
// subsets.
SelectionResult exhaustive_select(const ComplexMatrix& h, std::size_t k,
                                  std::uint64_t cap = kDefaultExhaustiveCap);

// Norm inflation factor (n_total - n_u + 1) / (k - n_u + 1).
double bound_factor(std::size_t n_total, std::size_t n_u, std::size_t k);

// Guaranteed ceiling on ||H_s^+||_F^2 after greedy selection of k columns
// out of n_total, given ||H^+||_F^2 = base_norm_sq of the unselected matrix.
double selection_norm_bound(std::size_t n_total, std::size_t n_u,
                            std::size_t k, double base_norm_sq);

// The factor as a function of K traces the hyperbola y = a / x with
// a = n_b - n_u + 1 and x = K - n_u + 1; vertex at (n_u - 1 + sqrt(a), sqrt(a)).
struct HyperbolaProfile {
  std::vector<std::pair<std::size_t, double>> factors;  // K in [n_u, n_b]
  double vertex_k = 0.0;
  double vertex_factor = 0.0;
};

HyperbolaProfile hyperbola_profile(std::size_t n_b, std::size_t n_u);

struct LeverageScores {
  std::vector<double> pi;  // per-beam influence, sums to 1
  std::vector<double> p;   // min(1, n_b * pi_i)
};

// pi_i = ||i-th row of the right-singular-vector matrix||^2 / n_u. The
// singular vectors are lifted from the eigendecomposition of the small Gram
// H H^H rather than decomposing the n_b x n_b side.
LeverageScores leverage_scores(const ComplexMatrix& h);

enum class PreselectMode { kBernoulli, kTop };

struct PreselectResult {
  ComplexMatrix candidates;          // H_c
  std::vector<std::size_t> indices;  // ascending, into the input columns
  LeverageScores scores;
};

// Candidate pre-selection by leverage score. Bernoulli mode keeps beam i
// with probability min(1, oversample * n_b * pi_i); top mode keeps the n_c
// highest-score beams with n_c = max(k, round(expected Bernoulli count)).
// Either way the set is topped up in descending score order until it has at
// least k beams and full row rank.
PreselectResult preselect(const ComplexMatrix& h, std::size_t k,
                          PreselectMode mode, double oversample,
                          RandomStream& rng);

// Rate guaranteed by greedy selection of k beams out of n_c candidates:
// n_u * log2(1 + (k - n_u + 1) / (n_c - n_u + 1) * power / (noise_var * candidate_norm_sq)).
double rate_lower_bound(std::size_t n_c, std::size_t n_u, std::size_t k,
                        double candidate_norm_sq, double power,
                        double noise_var);

// Bound summary for one (channel, K) pair. Candidate fields are present only
// when pre-selection ran; rate_lower_bound only when an SNR was supplied
// (with no pre-selection it degenerates to n_c = n_b).
struct BoundReport {
  std::size_t n_b = 0;
  std::size_t n_u = 0;
  std::size_t k = 0;
  std::optional<std::size_t> n_c;
  double full_norm_sq = 0.0;
  std::optional<double> candidate_norm_sq;
  double theorem1_bound = 0.0;
  std::optional<double> improved_bound;
  std::optional<double> rate_lower_bound;
  std::optional<double> snr_db;
};

BoundReport make_bound_report(
    std::size_t n_b, std::size_t n_u, std::size_t k, double full_norm_sq,
    std::optional<std::pair<std::size_t, double>> candidate = std::nullopt,
    std::optional<double> snr_db = std::nullopt);

// Algebraic identities of the Gram inverse that underpin the selection
// guarantee, evaluated on a concrete channel. Removal costs use fresh
// factorizations, independent of the Sherman-Morrison path.
struct IdentityReport {
  std::size_t n_b = 0;
  std::size_t n_u = 0;
  double full_norm_sq = 0.0;          // Tr((H H^H)^-1)
  double projector_trace = 0.0;       // sum_m h_m^H (H H^H)^-1 h_m; equals n_u
  double pinv_energy = 0.0;           // sum_m ||(H H^H)^-1 h_m||^2; equals full_norm_sq
  double weighted_removal_sum = 0.0;  // sum_m (1 - h_m^H G^-1 h_m) Tr((G - h_m h_m^H)^-1)
  bool weighted_sum_evaluable = true; // false if some removal is rank-breaking
  double min_removal_cost = 0.0;      // min_j Tr((G - h_j h_j^H)^-1)
  double min_removal_bound = 0.0;     // (n_b - n_u + 1)/(n_b - n_u) * full_norm_sq
  std::vector<double> removal_costs;  // per column, +inf where infeasible
};

IdentityReport selection_identities(const ComplexMatrix& h);

}  // namespace beamsel
