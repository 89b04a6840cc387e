#pragma once

#include <cstdint>

namespace quatla::ops {

// Real-arithmetic tallies. Compiled to no-ops unless QUATLA_OPCOUNT is defined.
struct Counts {
  std::uint64_t mul = 0;
  std::uint64_t add = 0;
  std::uint64_t div = 0;
  std::uint64_t sqrt = 0;

  // Every operation counted once.
  std::uint64_t flops() const { return mul + add + div + sqrt; }
  // Multiply-add equivalents: an addition paired with a multiplication is free.
  std::uint64_t madds() const { return mul + div + sqrt + (add > mul ? add - mul : 0); }

  Counts operator-(const Counts& o) const {
    return {mul - o.mul, add - o.add, div - o.div, sqrt - o.sqrt};
  }
};

#ifdef QUATLA_OPCOUNT
inline constexpr bool enabled = true;
namespace detail {
inline thread_local Counts tally;
}
inline void count(std::uint64_t mul, std::uint64_t add, std::uint64_t div = 0,
                  std::uint64_t sqrt = 0) {
  detail::tally.mul += mul;
  detail::tally.add += add;
  detail::tally.div += div;
  detail::tally.sqrt += sqrt;
}
inline Counts snapshot() { return detail::tally; }
inline void reset() { detail::tally = Counts{}; }
#else
inline constexpr bool enabled = false;
inline void count(std::uint64_t, std::uint64_t, std::uint64_t = 0, std::uint64_t = 0) {}
inline Counts snapshot() { return {}; }
inline void reset() {}
#endif

// Counts accumulated since construction.
class Scope {
 public:
  Scope() : start_(snapshot()) {}
  Counts elapsed() const { return snapshot() - start_; }

 private:
  Counts start_;
};

// Costs of the quaternion kernels shared by the solvers.
inline void count_qmul(std::uint64_t n = 1) { count(16 * n, 12 * n); }
inline void count_qmul_acc(std::uint64_t n = 1) { count(16 * n, 16 * n); }
inline void count_qabs2(std::uint64_t n = 1) { count(4 * n, 3 * n); }

}  // namespace quatla::ops
