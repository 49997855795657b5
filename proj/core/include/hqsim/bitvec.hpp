#ifndef HQSIM_BITVEC_HPP
#define HQSIM_BITVEC_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hqsim {

// Fixed-capacity bit vector backed by 64-bit words. The capacity is chosen at
// construction; all pairwise operations require equal capacity.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0u) {}

  std::size_t size() const { return nbits_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void clear() {
    for (auto& x : w_) x = 0;
  }

  void xor_in(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  }

  void and_in(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  }

  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }

  // Parity of the AND with another vector.
  bool parity_and(const BitVec& o) const {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1u;
  }

  std::size_t count_and(const BitVec& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }

  // Lowest set bit index, or size() when empty.
  std::size_t lowest() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return (i << 6) + std::countr_zero(w_[i]);
    return nbits_;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        f((i << 6) + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }

  bool operator==(const BitVec& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace hqsim

#endif
