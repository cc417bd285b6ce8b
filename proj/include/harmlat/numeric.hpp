#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "harmlat/errors.hpp"

namespace harmlat {

/// coth(y) for y >= 1e-8. Large arguments use the expm1 form, which decays to
/// exactly 1 instead of overflowing; tiny arguments mean a thermally occupied
/// zero mode upstream and are rejected.
inline double coth_checked(double y) {
  if (!(y >= 1e-8)) {
    fail(errc::zero_mode_divergence,
         "coth argument " + std::to_string(y) + " below 1e-8 (zero mode at finite temperature)");
  }
  if (y > 20.0) return 1.0 + 2.0 / std::expm1(2.0 * y);
  return 1.0 / std::tanh(y);
}

/// Fixed-shape pairwise (cascade) reduction of f(i) over i in [0, count).
/// The tree depends only on count, so results are bit-identical between runs.
/// T must be value-initializable to the additive identity and support +.
template <class T, class F>
T pairwise_sum(std::int64_t begin, std::int64_t end, F&& f) {
  const std::int64_t len = end - begin;
  if (len <= 0) return T{};
  if (len <= 16) {
    T acc = f(begin);
    for (std::int64_t i = begin + 1; i < end; ++i) acc = acc + f(i);
    return acc;
  }
  const std::int64_t mid = begin + len / 2;
  return pairwise_sum<T>(begin, mid, f) + pairwise_sum<T>(mid, end, f);
}

template <class T, class F>
T pairwise_sum(std::int64_t count, F&& f) {
  return pairwise_sum<T>(0, count, std::forward<F>(f));
}

}  // namespace harmlat
