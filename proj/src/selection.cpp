#include "beamsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "beamsel/precoding.hpp"

namespace beamsel {

namespace {

// Dense Hermitian inverse state for the greedy loop: raw storage plus the
// running trace, updated in place by rank-1 downdates.
struct InverseState {
  std::size_t n = 0;
  std::vector<cdouble> inv;  // row-major n x n
  double trace = 0.0;

  explicit InverseState(const HermitianMatrix& m) : n(m.dim()) {
    inv = m.matrix().entries();
    trace = m.trace_real();
  }

  // s = G^-1 h; returns (1 - h^H s, ||s||^2).
  std::pair<double, double> probe(const cdouble* h,
                                  std::vector<cdouble>& s) const {
    for (std::size_t i = 0; i < n; ++i) {
      cdouble acc{};
      const cdouble* row = inv.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * h[j];
      s[i] = acc;
    }
    double quad = 0.0;
    double snorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      quad += (std::conj(h[i]) * s[i]).real();
      snorm += std::norm(s[i]);
    }
    return {1.0 - quad, snorm};
  }

  // G^-1 <- G^-1 + s s^H / d, then re-symmetrize to stop drift.
  void downdate(const std::vector<cdouble>& s, double d) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        cdouble v = inv[i * n + j] + s[i] * std::conj(s[j]) / d;
        if (i == j) v = v.real();
        inv[i * n + j] = v;
        inv[j * n + i] = std::conj(v);
      }
    }
    trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += inv[i * n + i].real();
  }
};

// Column-major copy of the channel for contiguous per-beam access.
std::vector<cdouble> pack_columns(const ComplexMatrix& h) {
  std::vector<cdouble> cols(h.rows() * h.cols());
  for (std::size_t c = 0; c < h.cols(); ++c) {
    for (std::size_t r = 0; r < h.rows(); ++r) {
      cols[c * h.rows() + r] = h(r, c);
    }
  }
  return cols;
}

void validate_k(std::size_t n_u, std::size_t k, std::size_t n_b) {
  if (k < n_u || k > n_b) {
    throw std::invalid_argument("k must satisfy n_u <= k <= n_b");
  }
}

HermitianMatrix gram_of_columns(const std::vector<cdouble>& cols,
                                std::size_t n_u,
                                const std::vector<std::size_t>& alive) {
  ComplexMatrix g(n_u, n_u);
  for (const auto idx : alive) {
    const cdouble* col = cols.data() + idx * n_u;
    for (std::size_t i = 0; i < n_u; ++i) {
      for (std::size_t j = i; j < n_u; ++j) {
        g(i, j) += col[i] * std::conj(col[j]);
      }
    }
  }
  for (std::size_t i = 0; i < n_u; ++i) {
    g(i, i) = g(i, i).real();
    for (std::size_t j = i + 1; j < n_u; ++j) g(j, i) = std::conj(g(i, j));
  }
  return HermitianMatrix(std::move(g));
}

std::uint64_t binomial_capped(std::size_t n, std::size_t k,
                              std::uint64_t cap) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap) * 2.0L) {
      return cap + 1;  // enough to know the cap is exceeded
    }
  }
  return static_cast<std::uint64_t>(c + 0.5L);
}

}  // namespace

std::vector<double> single_step_costs(const ComplexMatrix& h) {
  if (h.rows() == h.cols()) {
    throw std::invalid_argument(
        "square channel: no beam can be removed without losing rank");
  }
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  const InverseState state(hermitian_inverse(gram(h)));
  const auto cols = pack_columns(h);

  std::vector<double> costs(n_b, kInfiniteCost);
  std::vector<cdouble> s(n_u);
  for (std::size_t j = 0; j < n_b; ++j) {
    const auto [d, snorm] = state.probe(cols.data() + j * n_u, s);
    if (d > kDowndateTolerance) costs[j] = state.trace + snorm / d;
  }
  return costs;
}

SelectionResult decremental_select(const ComplexMatrix& h, std::size_t k) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  validate_k(n_u, k, n_b);

  InverseState state(hermitian_inverse(gram(h)));
  const auto cols = pack_columns(h);

  std::vector<std::size_t> alive(n_b);
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  SelectionResult result;
  result.eliminated.reserve(n_b - k);
  result.step_costs.reserve(n_b - k);

  std::vector<cdouble> s(n_u);
  std::vector<cdouble> best_s(n_u);
  while (alive.size() > k) {
    std::size_t best_pos = alive.size();
    double best_cost = kInfiniteCost;
    double best_d = 0.0;
    for (std::size_t pos = 0; pos < alive.size(); ++pos) {
      const cdouble* col = cols.data() + alive[pos] * n_u;
      const auto [d, snorm] = state.probe(col, s);
      if (d <= kDowndateTolerance) continue;
      const double cost = state.trace + snorm / d;
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = pos;
        best_d = d;
        best_s.swap(s);
      }
    }
    if (best_pos == alive.size()) {
      throw InfeasibleSelection(
          "no rank-preserving removal left with " +
          std::to_string(alive.size()) + " beams alive");
    }
    state.downdate(best_s, best_d);
    result.eliminated.push_back(alive[best_pos]);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_pos));
    result.step_costs.push_back(state.trace);
  }

  result.selected = std::move(alive);
  result.final_norm_sq = state.trace;
  return result;
}

SelectionResult decremental_select_naive(const ComplexMatrix& h,
                                         std::size_t k) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  validate_k(n_u, k, n_b);

  const auto cols = pack_columns(h);
  std::vector<std::size_t> alive(n_b);
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  SelectionResult result;
  double current = trace_inverse(gram(h));

  while (alive.size() > k) {
    const auto g = gram_of_columns(cols, n_u, alive);
    std::size_t best_pos = alive.size();
    double best_cost = kInfiniteCost;
    for (std::size_t pos = 0; pos < alive.size(); ++pos) {
      const cdouble* col = cols.data() + alive[pos] * n_u;
      ComplexMatrix gd = g.matrix();
      for (std::size_t i = 0; i < n_u; ++i) {
        for (std::size_t j = 0; j < n_u; ++j) {
          gd(i, j) -= col[i] * std::conj(col[j]);
        }
      }
      double cost;
      try {
        cost = trace_inverse(HermitianMatrix(std::move(gd)));
      } catch (const SingularGram&) {
        continue;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = pos;
      }
    }
    if (best_pos == alive.size()) {
      throw InfeasibleSelection(
          "no rank-preserving removal left with " +
          std::to_string(alive.size()) + " beams alive");
    }
    result.eliminated.push_back(alive[best_pos]);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_pos));
    current = best_cost;
    result.step_costs.push_back(current);
  }

  result.selected = std::move(alive);
  result.final_norm_sq = current;
  return result;
}

SelectionResult selection_at(const SelectionResult& run, std::size_t n_b,
                             std::size_t k, double full_norm_sq) {
  if (k > n_b || run.eliminated.size() + run.selected.size() != n_b) {
    throw std::invalid_argument("inconsistent selection restriction");
  }
  const std::size_t removals = n_b - k;
  if (removals > run.eliminated.size()) {
    throw std::invalid_argument("run was not deep enough for requested k");
  }

  SelectionResult out;
  out.eliminated.assign(run.eliminated.begin(),
                        run.eliminated.begin() +
                            static_cast<std::ptrdiff_t>(removals));
  out.step_costs.assign(run.step_costs.begin(),
                        run.step_costs.begin() +
                            static_cast<std::ptrdiff_t>(removals));
  std::vector<bool> removed(n_b, false);
  for (const auto idx : out.eliminated) removed[idx] = true;
  out.selected.reserve(k);
  for (std::size_t c = 0; c < n_b; ++c) {
    if (!removed[c]) out.selected.push_back(c);
  }
  out.final_norm_sq =
      out.step_costs.empty() ? full_norm_sq : out.step_costs.back();
  return out;
}

SelectionResult exhaustive_select(const ComplexMatrix& h, std::size_t k,
                                  std::uint64_t cap) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  validate_k(n_u, k, n_b);

  if (binomial_capped(n_b, k, cap) > cap) {
    throw std::invalid_argument(
        "subset count exceeds the enumeration cap; use decremental_select");
  }

  const auto cols = pack_columns(h);
  std::vector<std::size_t> combo(k);
  std::iota(combo.begin(), combo.end(), std::size_t{0});

  std::vector<std::size_t> best;
  double best_norm = kInfiniteCost;
  while (true) {
    double norm = kInfiniteCost;
    try {
      norm = trace_inverse(gram_of_columns(cols, n_u, combo));
    } catch (const SingularGram&) {
      // rank-deficient subset, skip
    }
    if (norm < best_norm) {
      best_norm = norm;
      best = combo;
    }

    // next combination in lexicographic order
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (combo[i] != i + n_b - k) {
        ++combo[i];
        for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
        break;
      }
      if (i == 0) {
        i = k + 1;  // exhausted
        break;
      }
    }
    if (i == k + 1 || k == 0) break;
  }

  if (best.empty() && k > 0) {
    throw InfeasibleSelection("every k-subset is rank-deficient");
  }

  SelectionResult result;
  result.selected = std::move(best);
  std::vector<bool> taken(n_b, false);
  for (const auto idx : result.selected) taken[idx] = true;
  for (std::size_t c = 0; c < n_b; ++c) {
    if (!taken[c]) result.eliminated.push_back(c);
  }
  result.final_norm_sq = best_norm;
  return result;
}

double bound_factor(std::size_t n_total, std::size_t n_u, std::size_t k) {
  if (n_u == 0) throw std::invalid_argument("n_u must be positive");
  if (k < n_u || k > n_total) {
    throw std::invalid_argument("k must satisfy n_u <= k <= n_total");
  }
  return static_cast<double>(n_total - n_u + 1) /
         static_cast<double>(k - n_u + 1);
}

double selection_norm_bound(std::size_t n_total, std::size_t n_u,
                            std::size_t k, double base_norm_sq) {
  return bound_factor(n_total, n_u, k) * base_norm_sq;
}

HyperbolaProfile hyperbola_profile(std::size_t n_b, std::size_t n_u) {
  if (n_u == 0 || n_b <= n_u) {
    throw std::invalid_argument("requires n_b > n_u >= 1");
  }
  HyperbolaProfile out;
  out.factors.reserve(n_b - n_u + 1);
  for (std::size_t k = n_u; k <= n_b; ++k) {
    out.factors.emplace_back(k, bound_factor(n_b, n_u, k));
  }
  const double a = static_cast<double>(n_b - n_u + 1);
  out.vertex_k = static_cast<double>(n_u) - 1.0 + std::sqrt(a);
  out.vertex_factor = std::sqrt(a);
  return out;
}

LeverageScores leverage_scores(const ComplexMatrix& h) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  const auto eig = hermitian_eig(gram(h));

  const double lambda_max = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0];
  for (std::size_t t = 0; t < n_u; ++t) {
    if (!(eig.eigenvalues[t] > lambda_max * 1e-12) ||
        !(eig.eigenvalues[t] > 0.0)) {
      throw SingularGram(t, eig.eigenvalues[t]);
    }
  }

  // Right singular vectors, lifted: V = H^H W diag(1/sqrt(lambda)).
  // Row i of V has squared norm h_i^H W diag(1/lambda) W^H h_i.
  std::vector<double> inv_sqrt(n_u);
  for (std::size_t t = 0; t < n_u; ++t) {
    inv_sqrt[t] = 1.0 / std::sqrt(eig.eigenvalues[t]);
  }

  LeverageScores out;
  out.pi.resize(n_b);
  out.p.resize(n_b);
  for (std::size_t i = 0; i < n_b; ++i) {
    double row_norm_sq = 0.0;
    for (std::size_t t = 0; t < n_u; ++t) {
      cdouble v{};
      for (std::size_t u = 0; u < n_u; ++u) {
        v += std::conj(h(u, i)) * eig.eigenvectors(u, t);
      }
      row_norm_sq += std::norm(v * inv_sqrt[t]);
    }
    out.pi[i] = row_norm_sq / static_cast<double>(n_u);
    out.p[i] = std::min(1.0, static_cast<double>(n_b) * out.pi[i]);
  }
  return out;
}

PreselectResult preselect(const ComplexMatrix& h, std::size_t k,
                          PreselectMode mode, double oversample,
                          RandomStream& rng) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  validate_k(n_u, k, n_b);
  if (!(oversample >= 1.0)) {
    throw std::invalid_argument("oversample must be >= 1");
  }

  PreselectResult out;
  out.scores = leverage_scores(h);
  const auto& pi = out.scores.pi;

  auto inclusion_prob = [&](std::size_t i) {
    return std::min(1.0, oversample * static_cast<double>(n_b) * pi[i]);
  };

  std::vector<bool> chosen(n_b, false);
  std::size_t count = 0;
  if (mode == PreselectMode::kBernoulli) {
    for (std::size_t i = 0; i < n_b; ++i) {
      if (rng.next_double() < inclusion_prob(i)) {
        chosen[i] = true;
        ++count;
      }
    }
  } else {
    double expected = 0.0;
    for (std::size_t i = 0; i < n_b; ++i) expected += inclusion_prob(i);
    const auto n_c = std::max<std::size_t>(
        k, static_cast<std::size_t>(std::lround(expected)));
    std::vector<std::size_t> order(n_b);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                       return pi[x] > pi[y];
                     });
    for (std::size_t r = 0; r < std::min(n_c, n_b); ++r) {
      chosen[order[r]] = true;
      ++count;
    }
  }

  // Top up in descending score order until the candidate set has at least k
  // beams and spans the row space.
  std::vector<std::size_t> ranked(n_b);
  std::iota(ranked.begin(), ranked.end(), std::size_t{0});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t x, std::size_t y) {
                     return pi[x] > pi[y];
                   });
  auto next_unchosen = ranked.begin();
  auto add_one = [&]() {
    while (next_unchosen != ranked.end() && chosen[*next_unchosen]) {
      ++next_unchosen;
    }
    if (next_unchosen == ranked.end()) return false;
    chosen[*next_unchosen] = true;
    ++count;
    return true;
  };

  while (count < k) {
    if (!add_one()) break;
  }

  auto collect = [&]() {
    out.indices.clear();
    for (std::size_t i = 0; i < n_b; ++i) {
      if (chosen[i]) out.indices.push_back(i);
    }
    out.candidates = select_columns(h, out.indices);
  };
  collect();

  while (true) {
    try {
      trace_inverse(gram(out.candidates));
      break;
    } catch (const SingularGram&) {
      if (!add_one()) throw;  // cannot happen for full-row-rank input
      collect();
    }
  }
  return out;
}

double rate_lower_bound(std::size_t n_c, std::size_t n_u, std::size_t k,
                        double candidate_norm_sq, double power,
                        double noise_var) {
  const double bound_norm =
      selection_norm_bound(n_c, n_u, k, candidate_norm_sq);
  return sum_rate(bound_norm, power, noise_var, n_u);
}

BoundReport make_bound_report(
    std::size_t n_b, std::size_t n_u, std::size_t k, double full_norm_sq,
    std::optional<std::pair<std::size_t, double>> candidate,
    std::optional<double> snr_db) {
  BoundReport r;
  r.n_b = n_b;
  r.n_u = n_u;
  r.k = k;
  r.full_norm_sq = full_norm_sq;
  r.theorem1_bound = selection_norm_bound(n_b, n_u, k, full_norm_sq);
  if (candidate) {
    r.n_c = candidate->first;
    r.candidate_norm_sq = candidate->second;
    r.improved_bound =
        selection_norm_bound(candidate->first, n_u, k, candidate->second);
  }
  if (snr_db) {
    r.snr_db = snr_db;
    const double snr = std::pow(10.0, *snr_db / 10.0);
    const std::size_t n_c = candidate ? candidate->first : n_b;
    const double norm = candidate ? candidate->second : full_norm_sq;
    r.rate_lower_bound = rate_lower_bound(n_c, n_u, k, norm, snr, 1.0);
  }
  return r;
}

IdentityReport selection_identities(const ComplexMatrix& h) {
  const std::size_t n_u = h.rows();
  const std::size_t n_b = h.cols();
  if (n_b <= n_u) {
    throw std::invalid_argument("requires more beams than users");
  }

  const auto g = gram(h);
  const auto g_inv = hermitian_inverse(g);

  IdentityReport rep;
  rep.n_b = n_b;
  rep.n_u = n_u;
  rep.full_norm_sq = g_inv.trace_real();
  rep.min_removal_bound = rep.full_norm_sq *
                          static_cast<double>(n_b - n_u + 1) /
                          static_cast<double>(n_b - n_u);
  rep.removal_costs.assign(n_b, kInfiniteCost);

  const auto cols = pack_columns(h);
  std::vector<cdouble> s(n_u);
  double min_cost = kInfiniteCost;
  for (std::size_t m = 0; m < n_b; ++m) {
    const cdouble* col = cols.data() + m * n_u;
    // q_m^2 = h_m^H G^-1 h_m and the pseudo-inverse column energy.
    double quad = 0.0;
    double snorm = 0.0;
    for (std::size_t i = 0; i < n_u; ++i) {
      cdouble acc{};
      for (std::size_t j = 0; j < n_u; ++j) acc += g_inv(i, j) * col[j];
      s[i] = acc;
      quad += (std::conj(col[i]) * acc).real();
      snorm += std::norm(acc);
    }
    rep.projector_trace += quad;
    rep.pinv_energy += snorm;

    // Removal cost via a fresh factorization of G - h_m h_m^H.
    ComplexMatrix gd = g.matrix();
    for (std::size_t i = 0; i < n_u; ++i) {
      for (std::size_t j = 0; j < n_u; ++j) {
        gd(i, j) -= col[i] * std::conj(col[j]);
      }
    }
    double cost = kInfiniteCost;
    try {
      cost = trace_inverse(HermitianMatrix(std::move(gd)));
    } catch (const SingularGram&) {
      rep.weighted_sum_evaluable = false;
    }
    rep.removal_costs[m] = cost;
    if (cost < min_cost) min_cost = cost;
    if (std::isfinite(cost)) {
      rep.weighted_removal_sum += (1.0 - quad) * cost;
    }
  }
  rep.min_removal_cost = min_cost;
  return rep;
}

}  // namespace beamsel
