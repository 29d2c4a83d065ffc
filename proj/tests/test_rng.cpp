#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "exchboot/parallel.hpp"
#include "exchboot/rng.hpp"

using namespace exchboot;

TEST_CASE("philox block matches published known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(Philox4x32::block(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox4x32 a = draw_rng(42, 7), b = draw_rng(42, 7), c = draw_rng(42, 8), d = draw_rng(43, 7);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("bounded draws are uniform and in range") {
  Philox4x32 rng = draw_rng(1, 0);
  const std::uint64_t k = 7;
  const int draws = 70000;
  std::array<int, 7> counts{};
  for (int i = 0; i < draws; ++i) {
    const auto v = bounded(rng, k);
    REQUIRE(v < k);
    ++counts[v];
  }
  // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
  double chi2 = 0.0;
  const double expected = draws / 7.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 22.46);
  CHECK(bounded(rng, 1) == 0);
  CHECK_THROWS(bounded(rng, 0));
}

TEST_CASE("uniform and normal moments") {
  Philox4x32 rng = draw_rng(5, 1);
  const int n = 200000;
  std::vector<double> u(n), z(n);
  for (int i = 0; i < n; ++i) {
    u[i] = uniform01(rng);
    REQUIRE(u[i] >= 0.0);
    REQUIRE(u[i] < 1.0);
    z[i] = standard_normal(rng);
  }
  const MeanEstimate mu = mean_and_se(u), mz = mean_and_se(z);
  CHECK(std::abs(mu.mean - 0.5) < 4 * mu.std_error);
  CHECK(std::abs(mz.mean) < 4 * mz.std_error);
  CHECK(mz.std_error * std::sqrt(double(n)) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("parallel_for covers every index once; pairwise sum is order-fixed") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(pairwise_sum(v) == pairwise_sum(v));
  std::vector<double> small{1, 2, 3, 4, 5};
  CHECK(pairwise_sum(small) == 15.0);
  const MeanEstimate e = mean_and_se(std::vector<double>{1, 2, 3, 4});
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}
