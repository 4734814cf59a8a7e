#pragma once
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bvs {

/// Inclusion vector γ over at most 128 candidates; bit i set means candidate i is in the model.
/// Ordering is numeric on the bit pattern read as an unsigned integer with candidate 0 lowest.
class ModelId {
  public:
    static constexpr std::size_t kMaxCandidates = 128;

    constexpr ModelId() = default;
    constexpr explicit ModelId(std::uint64_t low) : lo_(low) {}
    constexpr ModelId(std::uint64_t high, std::uint64_t low) : lo_(low), hi_(high) {}

    static constexpr ModelId full(std::size_t p) {
        if (p == 0) return {};
        if (p <= 64) return ModelId(~std::uint64_t{0} >> (64 - p));
        return ModelId(~std::uint64_t{0} >> (128 - p), ~std::uint64_t{0});
    }

    constexpr std::uint64_t low() const { return lo_; }
    constexpr std::uint64_t high() const { return hi_; }
    constexpr bool test(std::size_t i) const { return i < 64 ? (lo_ >> i) & 1u : (hi_ >> (i - 64)) & 1u; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(lo_) + std::popcount(hi_)); }
    constexpr ModelId with(std::size_t i, bool on) const {
        ModelId m = *this;
        std::uint64_t& w = i < 64 ? m.lo_ : m.hi_;
        const std::uint64_t bit = std::uint64_t{1} << (i % 64);
        w = on ? w | bit : w & ~bit;
        return m;
    }
    /// True when every candidate of this model lies below `p`.
    constexpr bool fits(std::size_t p) const {
        const ModelId f = full(p);
        return (lo_ & ~f.lo_) == 0 && (hi_ & ~f.hi_) == 0;
    }
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(size());
        for (std::uint64_t b = lo_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        for (std::uint64_t b = hi_; b; b &= b - 1) out.push_back(64 + static_cast<std::size_t>(std::countr_zero(b)));
        return out;
    }
    /// "0101..." with candidate 0 first.
    std::string to_bitstring(std::size_t p) const {
        std::string s(p, '0');
        for (std::size_t i = 0; i < p; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    friend constexpr std::strong_ordering operator<=>(ModelId a, ModelId b) {
        if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
        return a.lo_ <=> b.lo_;
    }
    friend constexpr bool operator==(ModelId, ModelId) = default;

  private:
    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
};

}  // namespace bvs

template <>
struct std::hash<bvs::ModelId> {
    std::size_t operator()(bvs::ModelId m) const noexcept {
        return std::hash<std::uint64_t>{}(m.low() ^ (m.high() * 0x9e3779b97f4a7c15ULL));
    }
};
