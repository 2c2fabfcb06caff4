#include <doctest.h>

#include <set>

#include "kevt/rng.hpp"

using kevt::CounterStream;
using kevt::philox4x32_10;

// Published known-answer vectors for Philox4x32-10.
TEST_CASE("philox known answers") {
  using B = CounterStream::Block;
  CHECK(philox4x32_10(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
  const CounterStream a(42, 0), a2(42, 0), b(42, 1), c(43, 0);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(a.block(i) == a2.block(i));
  CHECK(a.block(0) != b.block(0));
  CHECK(a.block(0) != c.block(0));
}

TEST_CASE("uniforms lie in [0,1) with mean near one half") {
  const CounterStream s(7, 3);
  double sum = 0.0;
  std::set<double> seen;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto u = s.uniform2(static_cast<std::uint64_t>(i));
    for (double v : u) {
      REQUIRE(v >= 0.0);
      REQUIRE(v < 1.0);
      sum += v;
    }
    if (i < 1000) seen.insert(u[0]);
  }
  CHECK(sum / (2.0 * n) == doctest::Approx(0.5).epsilon(0.005));
  CHECK(seen.size() == 1000);
  CHECK(s.uniform(5, 1) == s.uniform2(5)[1]);
}
