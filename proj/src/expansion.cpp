#include "mlsq/expansion.hpp"

#include <cmath>

namespace mlsq {

namespace {

constexpr double kZeroTol = 1e-12;

void check_size(std::size_t n) {
  if (n == 0) throw Error("expansion needs at least one layer");
  if (n > kMaxExpansionLayers) {
    throw StructureTooLarge("expansion is Theta(2^(N-1)); N capped at 20");
  }
}

// Visits every strictly increasing index tuple of the given length,
// values in [0, n).
template <typename F>
void for_each_tuple(std::size_t n, std::size_t length, F&& visit) {
  if (length == 0 || length > n) return;
  std::vector<std::size_t> idx(length);
  for (std::size_t i = 0; i < length; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    // advance to next combination
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (idx[pos] != pos + n - length) break;
      if (pos == 0) return;
    }
    if (idx[pos] == pos + n - length) return;
    ++idx[pos];
    for (std::size_t k = pos + 1; k < length; ++k) idx[k] = idx[k - 1] + 1;
  }
}

}  // namespace

TrigData TrigData::from_wavenumbers(std::span<const Complex> q, std::span<const double> l) {
  if (q.size() != l.size()) throw Error("wavenumber/width length mismatch");
  check_size(q.size());
  TrigData trig;
  trig.q.assign(q.begin(), q.end());
  trig.l.assign(l.begin(), l.end());
  trig.c.resize(q.size());
  trig.t.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(l[i] > 0.0)) throw NonPositiveWidth("trig data width must be positive");
    if (std::abs(q[i]) < kZeroTol) {
      throw ZeroWavenumber("q = 0 has no tangent representation; use layer_matrix");
    }
    const Complex x = q[i] * l[i];
    trig.c[i] = std::cos(x);
    if (std::abs(trig.c[i]) < kZeroTol) {
      throw CosineZero("cos(q*l) = 0: tangent diverges");
    }
    trig.t[i] = std::tan(x);
  }
  return trig;
}

TrigData TrigData::from_layers(std::span<const LayerValue> layers, double energy) {
  std::vector<Complex> q(layers.size());
  std::vector<double> l(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    q[i] = wavenumber(energy, layers[i].potential);
    l[i] = layers[i].width;
  }
  return from_wavenumbers(q, l);
}

Complex dyad(std::size_t i, std::size_t j, const TrigData& trig) {
  if (i >= trig.size() || j >= trig.size() || i == j) throw IndexError("dyad indices");
  return (trig.q[i] / trig.q[j]) * trig.t[i] * trig.t[j];
}

Complex triad(std::size_t i, std::size_t j, std::size_t k, const TrigData& trig) {
  if (!(i < j && j < k) || k >= trig.size()) throw IndexError("triad indices");
  return dyad(i, j, trig) * trig.q[k] * trig.t[k];
}

Complex q_series(Element element, const TrigData& trig) {
  const std::size_t n = trig.size();
  check_size(n);
  const bool diagonal = element == Element::L11 || element == Element::L22;
  const bool transposed = element == Element::L22 || element == Element::L12;

  Complex total(0.0, 0.0);
  const std::size_t max_group = diagonal ? n / 2 : (n >= 1 ? (n - 1) / 2 : 0);
  for (std::size_t g = 1; g <= max_group; ++g) {
    const double sign = (g % 2 == 0) ? 1.0 : -1.0;
    const std::size_t tuple_len = diagonal ? 2 * g : 2 * g + 1;
    Complex group_sum(0.0, 0.0);
    for_each_tuple(n, tuple_len, [&](const std::vector<std::size_t>& idx) {
      Complex term(1.0, 0.0);
      for (std::size_t pair = 0; pair < g; ++pair) {
        const std::size_t a = idx[2 * pair];
        const std::size_t b = idx[2 * pair + 1];
        term *= transposed ? dyad(b, a, trig) : dyad(a, b, trig);
      }
      if (!diagonal) {
        const std::size_t k = idx[tuple_len - 1];
        term *= (element == Element::L21) ? trig.q[k] * trig.t[k] : trig.t[k] / trig.q[k];
      }
      group_sum += term;
    });
    total += sign * group_sum;
  }
  return total;
}

Complex element_via_series(Element element, const TrigData& trig) {
  const std::size_t n = trig.size();
  check_size(n);
  Complex cos_prod(1.0, 0.0);
  for (const auto& c : trig.c) cos_prod *= c;

  switch (element) {
    case Element::L11:
      return cos_prod * (1.0 + q_series(Element::L11, trig));
    case Element::L22:
      return cos_prod * (1.0 + q_series(Element::L22, trig));
    case Element::L12: {
      Complex singles(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) singles += trig.t[i] / trig.q[i];
      return cos_prod * (singles + q_series(Element::L12, trig));
    }
    case Element::L21: {
      Complex singles(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) singles += trig.q[i] * trig.t[i];
      return cos_prod * (-singles - q_series(Element::L21, trig));
    }
  }
  throw Error("unknown element");
}

TransferMatrix matrix_via_series(const TrigData& trig) {
  return {element_via_series(Element::L11, trig), element_via_series(Element::L12, trig),
          element_via_series(Element::L21, trig), element_via_series(Element::L22, trig)};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

std::uint64_t group_count(std::size_t n_layers, Element element, std::size_t group) {
  const bool diagonal = element == Element::L11 || element == Element::L22;
  return binomial(n_layers, diagonal ? 2 * group : 2 * group + 1);
}

std::uint64_t enumerated_group_count(std::size_t n_layers, Element element, std::size_t group) {
  const bool diagonal = element == Element::L11 || element == Element::L22;
  if (diagonal && group == 0) return 1;  // the leading 1
  const std::size_t tuple_len = diagonal ? 2 * group : 2 * group + 1;
  std::uint64_t count = 0;
  for_each_tuple(n_layers, tuple_len, [&](const std::vector<std::size_t>&) { ++count; });
  return count;
}

std::uint64_t term_count(std::size_t n_layers, Element element) {
  check_size(n_layers);
  const bool diagonal = element == Element::L11 || element == Element::L22;
  std::uint64_t total = 0;
  const std::size_t max_group = diagonal ? n_layers / 2 : (n_layers - 1) / 2;
  for (std::size_t g = 0; g <= max_group; ++g) {
    total += enumerated_group_count(n_layers, element, g);
  }
  return total;
}

}  // namespace mlsq
