#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mlsq/model.hpp"
#include "mlsq/squeeze.hpp"

using namespace mlsq;
using namespace mlsq::test;

TEST_CASE("strength classification on the power-law family") {
  SUBCASE("delta-like") {
    const auto c = classify_strength({5.0, Ratio(1), 1.0});
    CHECK(c.kind == StrengthClass::Kind::G0);
    CHECK(c.alpha == 5.0);
    const auto sub = classify_strength({3.0, Ratio(1, 2), 1.0});
    CHECK(sub.kind == StrengthClass::Kind::G0);
    CHECK(sub.alpha == 0.0);
    const auto free_layer = classify_strength({0.0, Ratio(0), 1.0});
    CHECK(free_layer.kind == StrengthClass::Kind::G0);
    CHECK(free_layer.alpha == 0.0);
  }
  SUBCASE("delta-prime-like well and barrier") {
    const auto well = classify_strength({-9.0, Ratio(2), 1.0});
    CHECK(well.kind == StrengthClass::Kind::Gprime);
    CHECK(close(well.s.real(), 3.0, 1e-15));
    CHECK(well.s.imag() == 0.0);
    CHECK(close(well.half_strength_limit, 3.0, 1e-15));
    const auto barrier = classify_strength({9.0, Ratio(2), 1.0});
    CHECK(barrier.s.real() == 0.0);
    CHECK(close(barrier.s.imag(), 3.0, 1e-15));
  }
  SUBCASE("the gap class carries its own sigma") {
    const auto c = classify_strength({1.0, Ratio(3, 2), 1.0});
    CHECK(c.kind == StrengthClass::Kind::Gsigma);
    CHECK(c.sigma == Ratio(2));
    CHECK(c.c == 1.0);
    CHECK(c.in_g_set());
  }
  SUBCASE("p > 2 is rejected") {
    CHECK_THROWS_AS(classify_strength({1.0, Ratio(5, 2), 1.0}), ExponentOutOfRange);
  }
  SUBCASE("tags partition p in [0, 2]") {
    std::mt19937 rng(37);
    std::uniform_int_distribution<int> num(0, 40);
    for (int trial = 0; trial < 500; ++trial) {
      const Ratio p(num(rng), 20);  // 0..2 in steps of 1/20
      const auto c = classify_strength({1.0, p, 1.0});
      if (p <= Ratio(1)) CHECK(c.kind == StrengthClass::Kind::G0);
      else if (p < Ratio(2)) CHECK(c.kind == StrengthClass::Kind::Gsigma);
      else CHECK(c.kind == StrengthClass::Kind::Gprime);
    }
  }
}

TEST_CASE("region classification") {
  CHECK(classify_region(2.0, 2.0) == Region::P);
  CHECK(classify_region(1.5, 1.0) == Region::L1);
  CHECK(classify_region(1.5, 3.0) == Region::S);
  CHECK(classify_region(2.0, 3.0) == Region::L2);
  CHECK(classify_region(0.5, 1.0) == Region::Invalid);
  CHECK(classify_region(2.0, 1.0) == Region::Invalid);
  CHECK(classify_region(3.0, 3.0) == Region::Invalid);
  // the 1 - mu + nu > 0 constraint excludes points below the triangle
  CHECK(classify_region(1.5, 0.4) == Region::Invalid);

  SUBCASE("L1 and L2 meet at P") {
    for (const double d : {1e-3, 1e-6, 1e-9}) {
      CHECK(classify_region(2.0 - d, 2.0 * (1.0 - d)) == Region::L1);
      CHECK(classify_region(2.0, 2.0 + d) == Region::L2);
    }
    CHECK(classify_region(2.0, 2.0) == Region::P);
  }
  SUBCASE("valid tags tile the triangle") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> mu_d(1.0 + 1e-9, 2.0);
    std::uniform_real_distribution<double> off(1e-9, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
      const double mu = mu_d(rng);
      const double nu = 2.0 * (mu - 1.0) + off(rng);
      const auto r = classify_region(mu, nu);
      CHECK((r == Region::S || r == Region::L1 || r == Region::L2 || r == Region::P));
      CHECK(r == Region::S);  // interior draws
    }
  }
}

TEST_CASE("regions correspond to the strength class pairs they encode") {
  // the two-parameter family V_i ~ l^(-mu), V_j ~ l^(-nu/(1-mu+nu)):
  // P pairs two Gprime layers, L1/L2 one gap with one Gprime, S two gaps
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> mu_d(1.05, 1.95);
  std::uniform_real_distribution<double> off(0.05, 3.0);
  auto kinds = [](double mu, double nu) {
    const auto ci = classify_strength({1.0, Ratio::from_double(mu), 1.0});
    const auto cj =
        classify_strength({1.0, Ratio::from_double(nu / (1.0 - mu + nu)), 1.0});
    return std::pair(ci.kind, cj.kind);
  };
  using K = StrengthClass::Kind;

  CHECK(classify_region(2.0, 2.0) == Region::P);
  CHECK(kinds(2.0, 2.0) == std::pair(K::Gprime, K::Gprime));
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = mu_d(rng);
    const double nu_l1 = 2.0 * (mu - 1.0);
    CHECK(classify_region(mu, nu_l1) == Region::L1);
    CHECK(kinds(mu, nu_l1) == std::pair(K::Gsigma, K::Gprime));

    const double nu_l2 = 2.0 + off(rng);
    CHECK(classify_region(2.0, nu_l2) == Region::L2);
    CHECK(kinds(2.0, nu_l2) == std::pair(K::Gprime, K::Gsigma));

    const double nu_s = nu_l1 + off(rng);
    CHECK(classify_region(mu, nu_s) == Region::S);
    CHECK(kinds(mu, nu_s) == std::pair(K::Gsigma, K::Gsigma));
  }
}

TEST_CASE("pencil membership by exponent arithmetic") {
  const auto s = structure({{-1.0, Ratio(2), 1.0}, {-1.0, Ratio(2), 1.0}});

  SUBCASE("linear pencil is symmetric") {
    const auto m = pencil_membership(s, path({Ratio(1), Ratio(1)}), 0, 1, Ratio(1));
    const auto mt = pencil_membership(s, path({Ratio(1), Ratio(1)}), 1, 0, Ratio(1));
    CHECK(m.gamma_prime);
    CHECK(mt.gamma_prime);
    CHECK_FALSE(m.gamma);
    CHECK_FALSE(mt.gamma);
  }
  SUBCASE("gamma and its transpose exclude each other") {
    const auto m = pencil_membership(s, path({Ratio(2), Ratio(1)}), 0, 1, Ratio(1));
    const auto mt = pencil_membership(s, path({Ratio(2), Ratio(1)}), 1, 0, Ratio(1));
    CHECK(m.gamma);
    CHECK_FALSE(mt.gamma);
  }
  SUBCASE("sigma pencil at sigma = 2") {
    const auto m = pencil_membership(s, path({Ratio(2), Ratio(1)}), 0, 1, Ratio(2));
    CHECK(m.gamma_sigma);
  }
  SUBCASE("sigma = 1 coincides with the linear pencil") {
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> e_d(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
      const auto pth = path({Ratio(e_d(rng)), Ratio(e_d(rng))});
      const auto m = pencil_membership(s, pth, 0, 1, Ratio(1));
      CHECK(m.gamma_sigma == m.gamma_prime);
    }
  }
  SUBCASE("adjoint pencil from the strength exponent") {
    // p = 3/2, e_i = 2, e_j = 1: exponent of |V| l_i l_j is -1.5*2 + 2 + 1 = 0
    const auto sv = structure({{1.0, Ratio(3, 2), 1.0}, {-1.0, Ratio(2), 1.0}});
    const auto m = pencil_membership(sv, path({Ratio(2), Ratio(1)}), 0, 1, Ratio(1));
    CHECK(m.gamma_v_prime);
    CHECK_FALSE(m.gamma_v);
    // a slower shrink leaves the product vanishing (exponent 1/4 > 0)
    const auto m2 = pencil_membership(sv, path({Ratio(3, 2), Ratio(1)}), 0, 1, Ratio(1));
    CHECK(m2.gamma_v);
    CHECK_FALSE(m2.gamma_v_prime);
    // a faster shrink blows the product up: no adjoint membership at all
    const auto m3 = pencil_membership(sv, path({Ratio(3), Ratio(1)}), 0, 1, Ratio(1));
    CHECK_FALSE(m3.gamma_v);
    CHECK_FALSE(m3.gamma_v_prime);
  }
  SUBCASE("exact rational exponents decide boundaries") {
    const auto pth = path({Ratio(1, 3), Ratio(1, 3)});
    const auto m = pencil_membership(s, pth, 0, 1, Ratio(1));
    CHECK(m.gamma_prime);
  }
}

TEST_CASE("squeeze admissibility faces") {
  SUBCASE("all-G0 structures admit every path") {
    const auto s = structure({{2.0, Ratio(1), 1.0}, {-3.0, Ratio(1), 1.0}, {0.0, Ratio(0), 1.0}});
    for (const auto& pth : {path({Ratio(1), Ratio(1), Ratio(1)}),
                            path({Ratio(1), Ratio(5), Ratio(1)}),
                            path({Ratio(3), Ratio(1), Ratio(2)})}) {
      CHECK(check_squeeze_admissibility(s, pth).admissible);
    }
  }
  SUBCASE("two Gprime layers need commensurate widths") {
    const auto s = structure({{-4.0, Ratio(2), 1.0}, {9.0, Ratio(2), 1.0}});
    CHECK(check_squeeze_admissibility(s, path({Ratio(1), Ratio(1)})).admissible);
    const auto bad = check_squeeze_admissibility(s, path({Ratio(2), Ratio(1)}));
    CHECK_FALSE(bad.admissible);
    CHECK(bad.faces[0].rule_row == 1);
  }
  SUBCASE("diagonal entries stay bounded on admissible paths") {
    // Gprime pair on the linear pencil and a gap layer on its adjoint path
    const auto s = structure({{1.0, Ratio(3, 2), 1.0}, {-4.0, Ratio(2), 1.0}});
    const auto pth = path({Ratio(2), Ratio(1)});
    REQUIRE(check_squeeze_admissibility(s, pth).admissible);
    const auto sched = default_schedule(1e-1, 1e-6, 13);
    double bound = 0.0;
    for (const double eps : sched) {
      const auto m = full_matrix(realize(s, pth, eps), 1.0);
      bound = std::max({bound, std::abs(m.l11), std::abs(m.l22)});
    }
    CHECK(bound < 50.0);
  }
  SUBCASE("inadmissible path lets a diagonal entry diverge") {
    const auto s = structure({{-4.0, Ratio(2), 1.0}, {9.0, Ratio(2), 1.0}});
    const auto pth = path({Ratio(2), Ratio(1)});
    REQUIRE_FALSE(check_squeeze_admissibility(s, pth).admissible);
    const auto m_small = full_matrix(realize(s, pth, 1e-5), 1.0);
    const auto m_large = full_matrix(realize(s, pth, 1e-2), 1.0);
    CHECK(std::abs(m_small.l11) > 100.0 * std::abs(m_large.l11));
  }
}

TEST_CASE("face verdicts agree with numeric dyad boundedness") {
  // the admissibility rows exist precisely so both dyads of every face stay
  // finite; check the verdict against the observed growth of |D_12| and
  // |D_21| along the schedule for random class/path combinations
  std::mt19937 rng(59);
  std::uniform_int_distribution<int> kind_d(0, 2);
  std::uniform_int_distribution<int> e_num(1, 4);
  std::uniform_real_distribution<double> s_d(0.3, 1.2);
  auto make_layer = [&](int kind) {
    const double s = s_d(rng);
    switch (kind) {
      case 0: return Layer{2.0 * s, Ratio(1), 1.0};           // G0
      case 1: return Layer{s, Ratio(3, 2), 1.0};              // gap
      default: return Layer{-s * s, Ratio(2), 1.0};           // Gprime well
    }
  };
  int divergent_faces = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = structure({make_layer(kind_d(rng)), make_layer(kind_d(rng))});
    const auto pth = path({Ratio(e_num(rng), 2), Ratio(e_num(rng), 2)});
    const bool admissible = check_squeeze_admissibility(s, pth).admissible;

    // fitted growth exponent of the worse dyad over two decades of eps
    double growth = 0.0;
    auto dyad_mag = [&](double eps, std::size_t a, std::size_t b) {
      const auto v = realize(s, pth, eps);
      const Complex qa = wavenumber(1.0, v[a].potential);
      const Complex qb = wavenumber(1.0, v[b].potential);
      return std::abs((qa / qb) * std::tan(qa * v[a].width) * std::tan(qb * v[b].width));
    };
    for (const auto idx : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
      const double hi = dyad_mag(1e-6, idx.first, idx.second);
      const double lo = dyad_mag(1e-4, idx.first, idx.second);
      growth = std::max(growth, std::log10(hi / std::max(lo, 1e-300)) / 2.0);
    }
    const bool grows = growth > 0.05;
    CHECK(admissible == !grows);
    divergent_faces += grows ? 1 : 0;
  }
  CHECK(divergent_faces > 20);  // the draw actually exercises both verdicts
}

TEST_CASE("diagonal entries stay bounded on one path per admissibility row") {
  const Layer gp{-2.0, Ratio(2), 1.0};        // Gprime
  const Layer gap{1.5, Ratio(3, 2), 1.0};     // G\G0, own sigma 2
  const Layer g0{2.0, Ratio(1), 1.0};         // G0

  struct Case {
    StructureSpec s;
    PathSpec p;
  };
  const std::vector<Case> cases = {
      {structure({gp, gp}), path({Ratio(1), Ratio(1)})},     // row 1
      {structure({gap, gp}), path({Ratio(2), Ratio(1)})},    // row 2, adjoint
      {structure({g0, gp}), path({Ratio(3), Ratio(1)})},     // row 3
      {structure({gp, gap}), path({Ratio(1), Ratio(2)})},    // row 4
      {structure({gp, g0}), path({Ratio(1), Ratio(4)})},     // row 5
      {structure({gap, gap}), path({Ratio(2), Ratio(2)})},   // row 6, linear
      {structure({g0, gap}), path({Ratio(1), Ratio(2)})},    // row 7
      {structure({gap, g0}), path({Ratio(2), Ratio(1)})},    // row 8
      {structure({g0, g0}), path({Ratio(5), Ratio(1)})},     // row 9
  };
  const auto sched = default_schedule(1e-1, 1e-6, 13);
  for (std::size_t c = 0; c < cases.size(); ++c) {
    CAPTURE(c);
    REQUIRE(check_squeeze_admissibility(cases[c].s, cases[c].p).admissible);
    double peak = 0.0;
    for (const double eps : sched) {
      const auto m = full_matrix(realize(cases[c].s, cases[c].p, eps), 1.0);
      peak = std::max({peak, std::abs(m.l11), std::abs(m.l22)});
    }
    CHECK(peak < 100.0);
  }
}
