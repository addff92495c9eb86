#include "doctest.h"

#include <cmath>
#include <limits>

#include "fourlin/grid.hpp"

using namespace fourlin;

TEST_SUITE("grid") {
  TEST_CASE("signed mode convention") {
    const GridSpec spec(1, 8);
    const std::int64_t i0[] = {0}, i7[] = {7}, i4[] = {4}, i3[] = {3};
    CHECK(mode_of_index(i0, spec) == Mode{0});
    CHECK(mode_of_index(i7, spec) == Mode{-1});
    CHECK(mode_of_index(i4, spec) == Mode{-4});
    CHECK(mode_of_index(i3, spec) == Mode{3});
    CHECK(spec.min_mode() == -4);
    CHECK(spec.max_mode() == 3);
    const GridSpec odd(1, 5);
    CHECK(odd.min_mode() == -2);
    CHECK(odd.max_mode() == 2);
    CHECK_FALSE(odd.has_nyquist());
  }

  TEST_CASE("index round trip") {
    for (std::int64_t N : {4, 5, 8}) {
      for (int d : {1, 2}) {
        const GridSpec spec(d, N);
        for (std::size_t f = 0; f < spec.points(); ++f) {
          const auto idx = unflatten(f, spec);
          const Mode m = mode_of_index(idx, spec);
          CHECK(index_of_mode(m, spec) == idx);
          CHECK(flat_of_mode(m, spec) == f);
          CHECK(flat_index(idx, spec) == f);
          for (auto c : m) {
            CHECK(c >= -(N / 2));
            CHECK(c <= (N + 1) / 2 - 1);
          }
        }
      }
    }
  }

  TEST_CASE("row-major with the last axis fastest") {
    const GridSpec spec(2, 4);
    CHECK(unflatten(1, spec) == std::vector<std::int64_t>{0, 1});
    CHECK(unflatten(4, spec) == std::vector<std::int64_t>{1, 0});
  }

  TEST_CASE("aliasing and conjugate indices") {
    const GridSpec spec(2, 6);
    CHECK(aliased_flat_index(Mode{7, -8}, spec) == flat_of_mode(Mode{1, -2}, spec));
    CHECK(is_nyquist(Mode{-3, 0}, spec));
    CHECK_FALSE(is_representable(Mode{3, 0}, spec));
    for (std::size_t f = 0; f < spec.points(); ++f) {
      const Mode m = mode_of_flat(f, spec);
      CHECK(conjugate_flat_index(f, spec) == aliased_flat_index(negate(m), spec));
    }
  }

  TEST_CASE("norms") {
    CHECK(linf_norm(Mode{-3, 2}) == 3);
    CHECK(l2_norm_sq(Mode{-3, 2}) == 13);
    CHECK(to_string(Mode{1, -2}) == "(1,-2)");
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(GridSpec(0, 4), Error);
    CHECK_THROWS_AS(GridSpec(1, 0), Error);
    CHECK_THROWS_AS(GridSpec(8, std::int64_t{1} << 20), Error);
    CHECK_THROWS_AS(GridField(GridSpec(1, 4), std::vector<double>(3)), Error);
    std::vector<double> bad(4, 0.0);
    bad[2] = std::numeric_limits<double>::quiet_NaN();
    try {
      GridField(GridSpec(1, 4), bad);
      FAIL("accepted NaN");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::non_finite);
    }
  }
}
