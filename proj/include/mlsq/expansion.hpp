#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mlsq/errors.hpp"
#include "mlsq/transfer.hpp"

namespace mlsq {

// Exact combinatorial reconstruction of the four elements of the full
// transmission matrix as cosine-product times (1 + Q) series over dyads
// D_ij = (q_i/q_j) t_i t_j and their odd-length extensions. Purely
// algebraic: near-zero cosines and wavenumbers are rejected here, the
// regularized q -> 0 path lives in layer_matrix.
//
// Element expansions (t_i = tan(q_i l_i), c_i = cos(q_i l_i)):
//   l11 = prod c * (1 + Q11)          Q11 over dyad chains D_{i1 j1}...
//   l12 = prod c * (sum t_i/q_i + Q12) Q12 chains of transposed dyads * t_k/q_k
//   l21 = prod c * (-sum q_i t_i - Q21) Q21 chains of dyads * q_k t_k
//   l22 = prod c * (1 + Q22)          Q22 over transposed dyad chains
// Chains run over strictly increasing index tuples; group n carries sign
// (-1)^n and has C(N, 2n) members (diagonal) or C(N, 2n+1) (off-diagonal).

enum class Element { L11, L12, L21, L22 };

struct TrigData {
  std::vector<Complex> q;    // wavenumbers
  std::vector<double> l;     // widths
  std::vector<Complex> c;    // cos(q*l)
  std::vector<Complex> t;    // tan(q*l)

  std::size_t size() const { return q.size(); }

  // Builds and checks c, t from wavenumbers and widths.
  static TrigData from_wavenumbers(std::span<const Complex> q, std::span<const double> l);
  // Trig data of a realized stack at energy E.
  static TrigData from_layers(std::span<const LayerValue> layers, double energy);
};

inline constexpr std::size_t kMaxExpansionLayers = 20;

Complex dyad(std::size_t i, std::size_t j, const TrigData& trig);
Complex triad(std::size_t i, std::size_t j, std::size_t k, const TrigData& trig);

// The signed Q-series of one element (zero for N < 2 diagonal / N < 3
// off-diagonal groups).
Complex q_series(Element element, const TrigData& trig);

// Full element via the series representation.
Complex element_via_series(Element element, const TrigData& trig);

TransferMatrix matrix_via_series(const TrigData& trig);

// Number of monomials in the element expansion; always 2^(N-1).
std::uint64_t term_count(std::size_t n_layers, Element element);

// Members of the n-th sign group: C(N, 2n) for diagonal elements (n = 0 is
// the leading 1), C(N, 2n+1) for off-diagonal (n = 0 is the single sum).
std::uint64_t group_count(std::size_t n_layers, Element element, std::size_t group);

// Enumerated tuple count for the same group, for cross-checking the
// enumerator against the closed-form binomials.
std::uint64_t enumerated_group_count(std::size_t n_layers, Element element, std::size_t group);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace mlsq
