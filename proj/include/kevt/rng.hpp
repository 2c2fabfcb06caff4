#pragma once

#include <array>
#include <cstdint>

namespace kevt {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A block of four 32-bit words is a pure function of (key, counter), so any
/// position of any stream can be produced without touching shared state.
/// Streams are addressed by a 64-bit seed (the key) and a 64-bit stream id;
/// within a stream, positions are addressed by a 64-bit index.
class CounterStream {
 public:
  using Block = std::array<std::uint32_t, 4>;

  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  Block block(std::uint64_t index) const noexcept;

  /// Two independent uniforms in [0, 1) with 53 random bits each.
  std::array<double, 2> uniform2(std::uint64_t index) const noexcept;

  /// Uniform in [0, 1); `lane` selects which half of the block is used.
  double uniform(std::uint64_t index, unsigned lane = 0) const noexcept {
    return uniform2(index)[lane & 1u];
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
};

/// Raw Philox4x32-10 round function, exposed for the known-answer test.
CounterStream::Block philox4x32_10(CounterStream::Block counter,
                                   std::array<std::uint32_t, 2> key) noexcept;

}  // namespace kevt
