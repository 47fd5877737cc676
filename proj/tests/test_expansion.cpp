#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mlsq/expansion.hpp"

using namespace mlsq;
using namespace mlsq::test;

namespace {

TrigData raw_trig(std::vector<Complex> q, std::vector<double> l) {
  return TrigData::from_wavenumbers(q, l);
}

}  // namespace

TEST_CASE("dyads and triads") {
  // q = (2, 1, 3), widths tuned so tan(q l) = tan(1) for all layers is
  // unnecessary; use explicit values instead
  TrigData trig;
  trig.q = {Complex(2, 0), Complex(1, 0), Complex(3, 0)};
  trig.l = {1.0, 1.0, 1.0};
  trig.c = {Complex(1, 0), Complex(1, 0), Complex(1, 0)};
  trig.t = {Complex(1, 0), Complex(1, 0), Complex(1, 0)};

  CHECK(rel_err(dyad(0, 1, trig), Complex(2, 0)) < 1e-15);
  CHECK(rel_err(dyad(0, 1, trig) * dyad(1, 0, trig),
                trig.t[0] * trig.t[0] * trig.t[1] * trig.t[1]) < 1e-15);
  CHECK(rel_err(triad(0, 1, 2, trig), Complex(6, 0)) < 1e-15);
  CHECK(rel_err(triad(0, 1, 2, trig), dyad(0, 1, trig) * trig.q[2] * trig.t[2]) < 1e-15);
  CHECK_THROWS_AS(dyad(0, 0, trig), IndexError);
}

TEST_CASE("trig data rejects degenerate input") {
  CHECK_THROWS_AS(raw_trig({Complex(0, 0)}, {1.0}), ZeroWavenumber);
  // cos(q l) = 0 at q l = pi/2
  CHECK_THROWS_AS(raw_trig({Complex(M_PI_2, 0)}, {1.0}), CosineZero);
  CHECK_THROWS_AS(raw_trig({Complex(1, 0), Complex(1, 0)}, {1.0}), Error);
}

TEST_CASE("q series closed forms") {
  std::mt19937 rng(23);
  const double e = 2.7;
  SUBCASE("N=2: Q11 is a single negative dyad, Q21 empty") {
    const auto stack = random_stack(rng, 2, e);
    const auto trig = TrigData::from_layers(stack, e);
    CHECK(rel_err(q_series(Element::L11, trig), -dyad(0, 1, trig)) < 1e-14);
    CHECK(rel_err(q_series(Element::L22, trig), -dyad(1, 0, trig)) < 1e-14);
    CHECK(std::abs(q_series(Element::L21, trig)) == 0.0);
    CHECK(std::abs(q_series(Element::L12, trig)) == 0.0);
  }
  SUBCASE("N=4: all six dyads at first order plus the disjoint pair") {
    const auto stack = random_stack(rng, 4, e);
    const auto trig = TrigData::from_layers(stack, e);
    Complex expected(0, 0);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) expected -= dyad(i, j, trig);
    }
    expected += dyad(0, 1, trig) * dyad(2, 3, trig);
    CHECK(rel_err(q_series(Element::L11, trig), expected) < 1e-13);
  }
}

TEST_CASE("element reconstruction against the direct product") {
  std::mt19937 rng(29);
  SUBCASE("N=1 reproduces the single-layer matrix") {
    const double e = 1.5;
    const std::vector<LayerValue> stack = {{-3.0, 0.8}};
    const auto trig = TrigData::from_layers(stack, e);
    const auto direct = layer_matrix(e, stack[0].potential, stack[0].width);
    CHECK(rel_err(element_via_series(Element::L11, trig), direct.l11) < 1e-14);
    CHECK(rel_err(element_via_series(Element::L12, trig), direct.l12) < 1e-14);
    CHECK(rel_err(element_via_series(Element::L21, trig), direct.l21) < 1e-14);
    CHECK(rel_err(element_via_series(Element::L22, trig), direct.l22) < 1e-14);
  }
  SUBCASE("N=2 element 11 is cc - (q1/q2) ss") {
    const double e = 4.2;
    const auto stack = random_stack(rng, 2, e);
    const auto trig = TrigData::from_layers(stack, e);
    const Complex q1 = wavenumber(e, stack[0].potential);
    const Complex q2 = wavenumber(e, stack[1].potential);
    const Complex expected = std::cos(q1 * stack[0].width) * std::cos(q2 * stack[1].width) -
                             (q1 / q2) * std::sin(q1 * stack[0].width) *
                                 std::sin(q2 * stack[1].width);
    CHECK(rel_err(element_via_series(Element::L11, trig), expected) < 1e-13);
  }
  SUBCASE("N=5 random matches full_matrix") {
    for (int trial = 0; trial < 200; ++trial) {
      const double e = 3.3;
      const auto stack = random_stack(rng, 5, e);
      const auto trig = TrigData::from_layers(stack, e);
      const auto direct = full_matrix(stack, e);
      const auto series = matrix_via_series(trig);
      CHECK(rel_err(series.l11, direct.l11) < 1e-10);
      CHECK(rel_err(series.l12, direct.l12) < 1e-10);
      CHECK(rel_err(series.l21, direct.l21) < 1e-10);
      CHECK(rel_err(series.l22, direct.l22) < 1e-10);
    }
  }
  SUBCASE("series matrix keeps det = 1") {
    for (int trial = 0; trial < 100; ++trial) {
      const double e = 2.0;
      const auto stack = random_stack(rng, 6, e);
      const auto series = matrix_via_series(TrigData::from_layers(stack, e));
      const double scale =
          std::max({1.0, std::abs(series.l11 * series.l22), std::abs(series.l12 * series.l21)});
      CHECK(std::abs(series.det() - 1.0) < 1e-9 * scale);
    }
  }
}

TEST_CASE("transposition symmetry between the diagonal series") {
  // Q22 equals Q11 with every dyad index pair swapped; verified against an
  // independent recursive enumerator
  std::mt19937 rng(31);
  const double e = 5.1;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto stack = random_stack(rng, n, e);
    const auto trig = TrigData::from_layers(stack, e);

    // test-local enumerator: sum over k dyad pairs, transposed
    std::vector<std::size_t> tuple;
    Complex total(0, 0);
    auto recurse = [&](auto&& self, std::size_t start, std::size_t pairs_left) -> void {
      if (pairs_left == 0) {
        Complex term(1, 0);
        for (std::size_t p = 0; p + 1 < tuple.size(); p += 2) {
          term *= dyad(tuple[p + 1], tuple[p], trig);
        }
        const std::size_t pairs = tuple.size() / 2;
        total += ((pairs % 2 == 1) ? -1.0 : 1.0) * term;
        return;
      }
      for (std::size_t a = start; a + 1 < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          tuple.push_back(a);
          tuple.push_back(b);
          self(self, b + 1, pairs_left - 1);
          tuple.pop_back();
          tuple.pop_back();
        }
      }
    };
    for (std::size_t pairs = 1; pairs <= n / 2; ++pairs) recurse(recurse, 0, pairs);
    CHECK(rel_err(q_series(Element::L22, trig), total) < 1e-12);
  }
}

TEST_CASE("term counts") {
  CHECK(term_count(1, Element::L11) == 1);
  CHECK(term_count(3, Element::L11) == 4);  // 1 + C(3,2)
  CHECK(term_count(6, Element::L21) == 32); // C(6,1)+C(6,3)+C(6,5)
  CHECK(binomial(6, 1) + binomial(6, 3) + binomial(6, 5) == 32);

  for (std::size_t n = 1; n <= 12; ++n) {
    for (const auto el : {Element::L11, Element::L12, Element::L21, Element::L22}) {
      CHECK(term_count(n, el) == (1ull << (n - 1)));
      const bool diagonal = el == Element::L11 || el == Element::L22;
      const std::size_t max_group = diagonal ? n / 2 : (n - 1) / 2;
      for (std::size_t g = 0; g <= max_group; ++g) {
        CHECK(enumerated_group_count(n, el, g) == group_count(n, el, g));
      }
    }
  }
  CHECK_THROWS_AS(term_count(21, Element::L11), StructureTooLarge);
}
