#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fdcell {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit seed is the key; the upper half of the 128-bit counter selects
/// an independent substream and the lower half counts blocks inside it, so
/// any realization can be regenerated without replaying the others.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    static Block bijection(Block counter, Key key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open_zero() { return 1.0 - uniform(); }
    /// Unit-mean exponential.
    double exponential();

private:
    void refill();

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
};

}  // namespace fdcell
