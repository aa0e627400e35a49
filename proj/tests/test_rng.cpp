#include <doctest.h>

#include <cmath>
#include <set>

#include "fal/rng.hpp"

using fal::Rng;

TEST_CASE("identical seed and tag reproduce the same stream") {
  Rng a(42, "support");
  Rng b(42, "support");
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different tags give different streams") {
  Rng a(42, "support");
  Rng b(42, "rows");
  int same = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("uniform lies in [0,1) and has plausible mean") {
  Rng rng(7, "u");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal has plausible first two moments") {
  Rng rng(7, "g");
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("distinct_indices: sorted, distinct, in range") {
  Rng rng(3, "idx");
  const auto idx = rng.distinct_indices(100, 1000);
  REQUIRE(idx.size() == 100);
  std::set<int> seen;
  int prev = -1;
  for (const int i : idx) {
    CHECK(i > prev);
    CHECK(i >= 0);
    CHECK(i < 1000);
    prev = i;
    seen.insert(i);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("uniform_int covers the full range without bias artifacts") {
  Rng rng(11, "ui");
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
  for (const int c : counts) CHECK(std::abs(c - 10000) < 500);
}
