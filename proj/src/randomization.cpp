#include "predtest/randomization.hpp"

#include "predtest/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace predtest {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t state = a ^ 0x6a09e667f3bcc909ULL;
    const std::uint64_t h = splitmix64(state);
    state = h ^ b;
    return splitmix64(state);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

} // namespace

SeedSpec SeedSpec::child(std::uint64_t index) const noexcept {
    return SeedSpec{master_seed, mix(stream_id, index)};
}

RandomStream::RandomStream(const SeedSpec& seed) noexcept {
    std::uint64_t state = mix(seed.master_seed, seed.stream_id);
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

std::uint64_t RandomStream::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

bool is_admissible_p0(double p0) noexcept {
    // Small slack so grid values like 0.30 or 0.48 survive decimal parsing.
    constexpr double eps = 1e-12;
    return std::isfinite(p0) && p0 >= kP0Lower - eps && p0 <= kP0Upper + eps &&
           std::abs(p0 - 0.5) >= kP0HalfGap - eps;
}

void require_admissible_p0(double p0) {
    if (is_admissible_p0(p0)) {
        return;
    }
    std::ostringstream msg;
    msg << "p0=" << p0 << " is not admissible: ";
    if (!std::isfinite(p0) || p0 < kP0Lower || p0 > kP0Upper) {
        msg << "must lie in [" << kP0Lower << ", " << kP0Upper << "]";
    } else {
        msg << "must satisfy |p0 - 0.5| >= " << kP0HalfGap
            << " (the weight variance degenerates at one-half)";
    }
    fail(ErrorCode::InvalidP0, msg.str());
}

Eigen::VectorXd split_sample_weights(std::span<const std::uint8_t> b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    std::size_t ones = 0;
    for (auto bit : b) {
        ones += bit ? 1 : 0;
    }
    if (ones == 0 || ones == b.size()) {
        fail(ErrorCode::InvalidLength, "degenerate Bernoulli draw: all entries equal");
    }
    const double b_bar = static_cast<double>(ones) / static_cast<double>(b.size());
    const double w_one = 0.5 / b_bar;
    const double w_zero = 0.5 / (1.0 - b_bar);
    Eigen::VectorXd w(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        w(t) = b[static_cast<std::size_t>(t)] ? w_one : w_zero;
    }
    return w;
}

WeightSequence draw_bernoulli_weights(std::size_t n, double p0, RandomStream& stream) {
    if (n < 2) {
        fail(ErrorCode::InvalidLength, "Bernoulli sequence needs n >= 2, got " + std::to_string(n));
    }
    require_admissible_p0(p0);

    WeightSequence out;
    out.p0 = p0;
    out.b.resize(n);
    std::size_t ones = 0;
    do {
        ones = 0;
        for (auto& bit : out.b) {
            bit = stream.bernoulli(p0) ? 1 : 0;
            ones += bit;
        }
    } while (ones == 0 || ones == n);

    out.b_bar = static_cast<double>(ones) / static_cast<double>(n);
    out.w = split_sample_weights(out.b);
    return out;
}

WeightSequence draw_bernoulli_weights(std::size_t n, double p0, const SeedSpec& seed) {
    RandomStream stream(seed);
    return draw_bernoulli_weights(n, p0, stream);
}

Eigen::VectorXd population_weights(std::span<const std::uint8_t> b, double p0) {
    require_admissible_p0(p0);
    const double w_one = 0.5 / p0;
    const double w_zero = 0.5 / (1.0 - p0);
    Eigen::VectorXd w(static_cast<Eigen::Index>(b.size()));
    for (std::size_t t = 0; t < b.size(); ++t) {
        w(static_cast<Eigen::Index>(t)) = b[t] ? w_one : w_zero;
    }
    return w;
}

} // namespace predtest
