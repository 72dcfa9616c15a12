#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hyperlens;

TEST_CASE("power_sum closed forms") {
  CHECK(power_sum(1, 4) == 10);
  CHECK(power_sum(2, 3) == 14);
  CHECK(power_sum(4, 2) == 17);
  CHECK(power_sum(3, 5) == 225);

  SECTION("matches direct summation") {
    for (int k = 1; k <= 4; ++k) {
      Integer direct(0);
      for (Integer i = 1; i <= 50; ++i) {
        direct += int_pow(i, static_cast<unsigned>(k));
        CHECK(power_sum(k, i) == direct);
      }
    }
  }

  SECTION("rejects k outside {1,2,3,4}") {
    CHECK_THROWS_AS(power_sum(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(power_sum(5, 3), std::invalid_argument);
    CHECK_THROWS_AS(power_sum(2, 0), std::invalid_argument);
  }
}

TEST_CASE("vertex average of squared distances") {
  for (int d : {1, 2, 5, 9}) {
    for (int n : {1, 2, 3}) {
      const CubeSpec spec(d, n);
      const Anchor origin = Anchor::origin(d);
      CHECK(avg_sq_dist_vertices(spec, origin) == Rational(d) * n * n / 2);
      CHECK(moment_report(spec, origin, Population::vertices).normalized_average == Rational(1, 2));
    }
  }
  CHECK(avg_sq_dist_vertices(CubeSpec(2, 2), Anchor::of_ints({1, 1})) == 2);
  CHECK(avg_sq_dist_vertices(CubeSpec(1, 2), Anchor::of_ints({1})) == 1);

  CHECK_THROWS_AS(avg_sq_dist_vertices(CubeSpec(3, 1), Anchor::of_ints({0, 0})),
                  std::invalid_argument);
}

TEST_CASE("vertex sigma terms") {
  SECTION("d=1 stays exact despite the 2^(d-2) prefactor") {
    const SigmaTerms st = sigma_vertices(CubeSpec(1, 1), Anchor::origin(1));
    CHECK(st.s1 == 1);
    CHECK(st.total == 1);
  }
  SECTION("center of the 2x2 square") {
    const SigmaTerms st = sigma_vertices(CubeSpec(2, 2), Anchor::of_ints({1, 1}));
    CHECK(st.total == 16);
  }
  SECTION("duplicated terms and signed recombination") {
    StreamRng rng(0xE5A37, 0);
    for (int i = 0; i < 20; ++i) {
      const CubeSpec spec(1 + static_cast<int>(rng.next_below(6)),
                          1 + static_cast<int>(rng.next_below(3)));
      const Anchor a = testing::random_free_anchor(spec, rng);
      const SigmaTerms st = sigma_vertices(spec, a);
      CHECK(st.s4 == st.s2);
      CHECK(st.s7 == st.s3);
      CHECK(st.s8 == st.s6);
      CHECK(st.total == st.signed_sum());
      CHECK(st.total == testing::sigma_vertices_polynomial(spec, a));
    }
  }
}

TEST_CASE("vertex second moment") {
  CHECK(second_moment_vertices(CubeSpec(2, 2), Anchor::of_ints({1, 1})) == 0);
  CHECK(second_moment_vertices(CubeSpec(1, 1), Anchor::origin(1)) == Rational(1, 4));
  CHECK(second_moment_vertices(CubeSpec(1, 2), Anchor::origin(1)) == 4);

  SECTION("equals sigma total / 2^d - average^2") {
    StreamRng rng(0xE5A38, 0);
    for (int i = 0; i < 20; ++i) {
      const CubeSpec spec(1 + static_cast<int>(rng.next_below(7)),
                          1 + static_cast<int>(rng.next_below(3)));
      const Anchor a = testing::random_free_anchor(spec, rng);
      const Rational avg = avg_sq_dist_vertices(spec, a);
      const Rational sigma = sigma_vertices(spec, a).total;
      CHECK(second_moment_vertices(spec, a) ==
            sigma / Rational(spec.vertex_count()) - avg * avg);
    }
  }

  SECTION("zero exactly when the anchor is the center") {
    StreamRng rng(0xE5A39, 0);
    for (int i = 0; i < 30; ++i) {
      const CubeSpec spec(1 + static_cast<int>(rng.next_below(8)),
                          1 + static_cast<int>(rng.next_below(4)));
      CHECK(second_moment_vertices(spec, Anchor::center(spec)) == 0);
      const Anchor a = testing::random_interior_anchor(spec, rng);
      const bool is_center = a.coords == Anchor::center(spec).coords;
      CHECK((second_moment_vertices(spec, a) == 0) == is_center);
    }
  }
}

TEST_CASE("lattice average of squared distances") {
  CHECK(avg_sq_dist_lattice(CubeSpec(1, 2), Anchor::origin(1)) == Rational(5, 3));
  CHECK(avg_sq_dist_lattice(CubeSpec(2, 1), Anchor::of_ints({1, 0})) == 1);

  SECTION("center anchor: normalized form is 1/12 + 1/(6N)") {
    for (int d : {1, 3, 7}) {
      for (int n : {1, 2, 5}) {
        const CubeSpec spec(d, n);
        const auto r = moment_report(spec, Anchor::center(spec), Population::lattice);
        CHECK(r.normalized_average == Rational(1, 12) + Rational(1, 6 * Integer(n)));
      }
    }
  }
}

TEST_CASE("lattice sigma terms") {
  CHECK(sigma_lattice(CubeSpec(1, 1), Anchor::origin(1)).total == 1);
  CHECK(sigma_lattice(CubeSpec(1, 2), Anchor::origin(1)).total == 17);
  CHECK(sigma_lattice(CubeSpec(2, 1), Anchor::origin(2)).total == 6);

  SECTION("duplicated terms, signed recombination, expanded polynomial") {
    StreamRng rng(0xE5A40, 0);
    for (int i = 0; i < 20; ++i) {
      const CubeSpec spec(1 + static_cast<int>(rng.next_below(5)),
                          1 + static_cast<int>(rng.next_below(5)));
      const Anchor a = testing::random_free_anchor(spec, rng);
      const SigmaTerms st = sigma_lattice(spec, a);
      CHECK(st.s4 == st.s2);
      CHECK(st.s7 == st.s3);
      CHECK(st.s8 == st.s6);
      CHECK(st.total == st.signed_sum());
      CHECK(st.total == testing::sigma_lattice_polynomial(spec, a));
    }
  }
}

TEST_CASE("lattice second moment") {
  CHECK(second_moment_lattice(CubeSpec(1, 1), Anchor::origin(1)) == Rational(1, 4));
  CHECK(second_moment_lattice(CubeSpec(2, 1), Anchor::of_ints({1, 0})) == Rational(1, 2));
  CHECK(second_moment_lattice(CubeSpec(1, 2), Anchor::of_ints({1})) == Rational(2, 9));

  SECTION("equals sigma total / (N+1)^d - average^2") {
    StreamRng rng(0xE5A41, 0);
    for (int i = 0; i < 20; ++i) {
      const CubeSpec spec(1 + static_cast<int>(rng.next_below(5)),
                          1 + static_cast<int>(rng.next_below(5)));
      const Anchor a = testing::random_free_anchor(spec, rng);
      const Rational avg = avg_sq_dist_lattice(spec, a);
      CHECK(second_moment_lattice(spec, a) ==
            sigma_lattice(spec, a).total / Rational(spec.lattice_count()) - avg * avg);
    }
  }
}

TEST_CASE("center distance") {
  CHECK(center_distance_sq(CubeSpec(5, 3), Anchor::origin(5)) == Rational(1, 4));
  CHECK(center_distance_sq(CubeSpec(4, 2), Anchor::center(CubeSpec(4, 2))) == 0);
  CHECK(center_distance_sq(CubeSpec(2, 2), Anchor::of_ints({1, 0})) == Rational(1, 8));

  SECTION("every vertex is equally far from the center") {
    const CubeSpec spec(4, 3);
    PointEnumerator corners(spec, Population::vertices);
    std::vector<int> v;
    while (corners.next(v))
      CHECK(center_distance_sq(spec, Anchor::of_ints(v)) == Rational(1, 4));
  }
}

TEST_CASE("normalized averages depend on the anchor only through the center distance") {
  StreamRng rng(0xE5A42, 0);
  for (int i = 0; i < 50; ++i) {
    const CubeSpec spec(1 + static_cast<int>(rng.next_below(20)),
                        1 + static_cast<int>(rng.next_below(10)));
    const Anchor a = testing::random_interior_anchor(spec, rng);
    const Rational r2 = center_distance_sq(spec, a);
    const auto rv = moment_report(spec, a, Population::vertices);
    const auto rw = moment_report(spec, a, Population::lattice);
    CHECK(rv.normalized_average == Rational(1, 4) + r2);
    CHECK(rw.normalized_average == Rational(1, 12) + Rational(1, 6 * Integer(spec.n)) + r2);
    CHECK(rv.second_moment >= 0);
    CHECK(rw.second_moment >= 0);
    CHECK(rv.normalized_second_moment >= 0);
    CHECK(rw.normalized_second_moment >= 0);
  }
}

TEST_CASE("normalized vertex average stays in [1/4, 1/2] inside the cube") {
  StreamRng rng(0xE5A43, 0);
  for (int i = 0; i < 50; ++i) {
    const CubeSpec spec(1 + static_cast<int>(rng.next_below(12)),
                        1 + static_cast<int>(rng.next_below(6)));
    const Anchor a = testing::random_interior_anchor(spec, rng);
    REQUIRE(a.inside(spec));
    const Rational b = moment_report(spec, a, Population::vertices).normalized_average;
    CHECK(b >= Rational(1, 4));
    CHECK(b <= Rational(1, 2));
  }
}

TEST_CASE("symmetry: coordinate permutations and reflections leave moments unchanged") {
  StreamRng rng(0xE5A44, 0);
  for (int i = 0; i < 40; ++i) {
    const CubeSpec spec(2 + static_cast<int>(rng.next_below(8)),
                        1 + static_cast<int>(rng.next_below(4)));
    const Anchor a = testing::random_interior_anchor(spec, rng);

    std::vector<Rational> permuted = a.coords;
    for (size_t j = permuted.size() - 1; j > 0; --j)
      std::swap(permuted[j], permuted[rng.next_below(j + 1)]);
    std::vector<Rational> reflected = a.coords;
    for (auto& c : reflected)
      if (rng.next_below(2)) c = Rational(spec.n) - c;

    for (const auto& other : {Anchor(permuted), Anchor(reflected)}) {
      for (Population pop : {Population::vertices, Population::lattice}) {
        const auto lhs = moment_report(spec, a, pop);
        const auto rhs = moment_report(spec, other, pop);
        CHECK(lhs.average == rhs.average);
        CHECK(lhs.second_moment == rhs.second_moment);
        CHECK(lhs.normalized_average == rhs.normalized_average);
        CHECK(lhs.normalized_second_moment == rhs.normalized_second_moment);
      }
    }
  }
}

TEST_CASE("concentration bounds") {
  SECTION("V1 at d=400, eta=1/4 is exactly 19/20") {
    const auto b = concentration_bound(TheoremId::V1, 400, Rational(1, 4));
    REQUIRE(b.exact.has_value());
    CHECK(*b.exact == Rational(19, 20));
    CHECK(b.value == Catch::Approx(0.95).epsilon(1e-12));
    CHECK_FALSE(b.vacuous());
  }

  SECTION("WSimilar at d=100, eta=1/4 is vacuous yet returned") {
    const auto b = concentration_bound(TheoremId::WSimilar, 100, Rational(1, 4));
    REQUIRE(b.exact.has_value());
    CHECK(*b.exact == Rational(-26, 25));
    CHECK(b.vacuous());
  }

  SECTION("non-perfect powers still give a numeric bound") {
    const auto b = concentration_bound(TheoremId::V1, 10, Rational(1, 4));
    CHECK_FALSE(b.exact.has_value());
    CHECK(b.value == Catch::Approx(1.0 - 1.0 / std::sqrt(10.0)).epsilon(1e-12));
    CHECK(b.half_width == Catch::Approx(std::pow(10.0, -0.25)).epsilon(1e-12));
  }

  SECTION("dimension floors") {
    CHECK_THROWS_WITH(concentration_bound(TheoremId::VIsosceles, 7, Rational(1, 4)),
                      Catch::Matchers::ContainsSubstring("d >= 8"));
    CHECK_THROWS_WITH(concentration_bound(TheoremId::VSimilar, 5, Rational(1, 4)),
                      Catch::Matchers::ContainsSubstring("d >= 6"));
    CHECK_THROWS_WITH(concentration_bound(TheoremId::V1, 1, Rational(1, 4)),
                      Catch::Matchers::ContainsSubstring("d >= 2"));
    CHECK_NOTHROW(concentration_bound(TheoremId::VIsosceles, 8, Rational(1, 4)));
  }

  SECTION("eta range") {
    CHECK_THROWS_AS(concentration_bound(TheoremId::V1, 10, Rational(1, 2)), PreconditionError);
    CHECK_THROWS_AS(concentration_bound(TheoremId::V1, 10, Rational(0)), PreconditionError);
    CHECK_THROWS_AS(concentration_bound(TheoremId::V1, 10, Rational(-1, 4)), PreconditionError);
  }

  SECTION("ACV hypotheses") {
    CHECK_THROWS_WITH(concentration_bound(TheoremId::ACV, 4, Rational(45, 100), Rational(1, 10)),
                      Catch::Matchers::ContainsSubstring("d > 2^(1/eta)"));
    CHECK_THROWS_WITH(concentration_bound(TheoremId::ACV, 100, Rational(1, 4), Rational(1, 4)),
                      Catch::Matchers::ContainsSubstring("gamma <= eta - log(2)/log(d)"));
    CHECK_THROWS_AS(concentration_bound(TheoremId::ACV, 100, Rational(1, 4), std::nullopt),
                    PreconditionError);

    const auto b =
        concentration_bound(TheoremId::ACV, 10000, Rational(33, 100), Rational(1, 4));
    CHECK(b.value == Catch::Approx(1.0 - std::pow(10000.0, -0.34)).epsilon(1e-12));
    REQUIRE(b.cos_threshold.has_value());
    CHECK(*b.cos_threshold == Catch::Approx((std::sqrt(2.0) + 1.0) / 10.0).epsilon(1e-12));
  }

  SECTION("exact bound comparison for rational proportions") {
    const auto b = concentration_bound(TheoremId::V1, 10, Rational(1, 4));
    // 1 - 10^(-1/2) = 0.68377...; 1023/1024 clears it, 1/2 does not.
    CHECK(proportion_meets_bound(Rational(1023, 1024), b));
    CHECK(proportion_meets_bound(Rational(1), b));
    CHECK_FALSE(proportion_meets_bound(Rational(1, 2), b));
  }
}

TEST_CASE("exact radical comparisons") {
  SECTION("sqrt difference against a rational q-th root") {
    // |sqrt(2) - sqrt(1/2)| = 0.7071...; threshold 3^(-1/4) = 0.7598...
    CHECK(sqrt_diff_within(Rational(2), Rational(1, 2), Rational(1, 3), 4));
    // threshold 4^(-1/4) = 0.7071... hits the boundary exactly:
    // (sqrt(2) - sqrt(1/2))^2 = 1/2 = 4^(-1/2), inclusive
    CHECK(sqrt_diff_within(Rational(2), Rational(1, 2), Rational(1, 4), 4));
    // threshold 5^(-1/4) = 0.6687... excludes it
    CHECK_FALSE(sqrt_diff_within(Rational(2), Rational(1, 2), Rational(1, 5), 4));

    StreamRng rng(0xE5A45, 0);
    for (int i = 0; i < 200; ++i) {
      const Rational x(Integer(rng.next_below(400)), Integer(1 + rng.next_below(20)));
      const Rational y(Integer(rng.next_below(400)), Integer(1 + rng.next_below(20)));
      const unsigned q = 1 + static_cast<unsigned>(rng.next_below(6));
      const Rational tq(Integer(1 + rng.next_below(50)), Integer(1 + rng.next_below(50)));
      const double t = std::pow(to_double(tq), 1.0 / q);
      const double gap = std::abs(std::sqrt(to_double(x)) - std::sqrt(to_double(y)));
      // stay clear of the boundary where double rounding could disagree
      if (std::abs(gap - t) < 1e-9) continue;
      CHECK(sqrt_diff_within(x, y, tq, q) == (gap <= t));
    }
  }

  SECTION("sqrt against the silver-scaled q-th root") {
    StreamRng rng(0xE5A46, 0);
    for (int i = 0; i < 200; ++i) {
      const Rational x(Integer(rng.next_below(100)), Integer(1 + rng.next_below(100)));
      const unsigned q = 1 + static_cast<unsigned>(rng.next_below(6));
      const Rational sq(Integer(1 + rng.next_below(30)), Integer(1 + rng.next_below(30)));
      const double s = std::pow(to_double(sq), 1.0 / q);
      const double lhs = std::sqrt(to_double(x));
      const double rhs = (std::sqrt(2.0) + 1.0) * s;
      if (std::abs(lhs - rhs) < 1e-9) continue;
      CHECK(sqrt_leq_silver_root(x, sq, q) == (lhs <= rhs));
    }
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("0.33") == Rational(33, 100));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("2.") == 2);
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}
