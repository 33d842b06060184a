#pragma once

#include <cmath>
#include <cstdint>

namespace amlmc {

/// Which consumer a stream belongs to. Streams with different roles are
/// independent even for equal (level, sample).
enum class StreamRole : std::uint64_t { single = 0, coupled = 1 };

struct StreamId {
    std::uint64_t level = 0;
    std::uint64_t sample = 0;
    StreamRole role = StreamRole::single;
};

namespace detail {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// AS241 (Wichura) inverse normal CDF, double precision.
double inverse_normal_cdf(double p);

}  // namespace detail

/// Counter-based splittable Gaussian stream. A stream is a pure function of
/// (seed, stream id, draw index), so parallel runs are reproducible: the
/// n-th draw of a given stream is the same no matter how work is scheduled.
class RngStream {
  public:
    RngStream(std::uint64_t seed, StreamId id) {
        std::uint64_t k = detail::mix64(seed + detail::kGamma);
        k = detail::mix64(k ^ detail::mix64(id.level + detail::kGamma));
        k = detail::mix64(k ^ detail::mix64(id.sample + detail::kGamma));
        k = detail::mix64(k ^ detail::mix64(static_cast<std::uint64_t>(id.role) + detail::kGamma));
        key_ = k;
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform() {
        std::uint64_t bits = detail::mix64(key_ + (++counter_) * detail::kGamma);
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal draw via the inverse CDF (one uniform per normal).
    double normal() { return detail::inverse_normal_cdf(uniform()); }

    /// Normal draw with the given variance.
    double normal_var(double variance) { return std::sqrt(variance) * normal(); }

    std::uint64_t draws() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace amlmc
