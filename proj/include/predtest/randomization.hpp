#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace predtest {

/// Identifies one independent random stream. Children are derived by
/// hashing, so (master, replication, draw) trees never collide in practice.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    SeedSpec child(std::uint64_t index) const noexcept;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Stream-splittable generator: xoshiro256** keyed by SplitMix64 over the
/// seed pair. Variates are produced without <random> distributions so the
/// bit stream is identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(const SeedSpec& seed) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

inline constexpr double kP0Lower = 0.30;
inline constexpr double kP0Upper = 0.70;
inline constexpr double kP0HalfGap = 0.02;

/// True when p0 lies in [0.30, 0.70] and |p0 - 1/2| >= 0.02.
bool is_admissible_p0(double p0) noexcept;
/// Throws InvalidP0 with a message naming the violated bound.
void require_admissible_p0(double p0);

struct WeightSequence {
    std::vector<std::uint8_t> b;
    double p0 = 0.0;
    double b_bar = 0.0;
    Eigen::VectorXd w;
};

/// Split-sample weights w_t = (b_t / b_bar + (1 - b_t) / (1 - b_bar)) / 2.
/// Throws InvalidLength if b is all zeros or all ones.
Eigen::VectorXd split_sample_weights(std::span<const std::uint8_t> b);

/// Draws b_t ~ Bernoulli(p0) i.i.d. from the stream of `seed` and builds
/// the weights. Degenerate draws are redrawn from the same stream.
WeightSequence draw_bernoulli_weights(std::size_t n, double p0, const SeedSpec& seed);

/// Same as above but continues an existing stream.
WeightSequence draw_bernoulli_weights(std::size_t n, double p0, RandomStream& stream);

/// w0_t = (b_t / p0 + (1 - b_t) / (1 - p0)) / 2.
Eigen::VectorXd population_weights(std::span<const std::uint8_t> b, double p0);

} // namespace predtest
