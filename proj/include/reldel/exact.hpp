#pragma once

// Sign-exact evaluation of small polynomial expressions in double inputs.
//
// Expressions are written once as templates over a number type T and
// evaluated first with `filtered` (a double carrying a rigorous bound on its
// accumulated rounding error). Only when the filter cannot certify a sign
// are they re-evaluated with GMP rationals, which represent every double
// exactly.

#include <gmpxx.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace reldel::exact {

inline constexpr double unit_roundoff = 0x1p-53;

struct filtered {
  double value = 0.0;
  double error = 0.0;  // |value - exact| <= error

  filtered() = default;
  explicit filtered(double v) : value(v) {}
  filtered(double v, double e) : value(v), error(e) {}
};

inline filtered operator+(const filtered& a, const filtered& b) {
  const double v = a.value + b.value;
  return {v, a.error + b.error + unit_roundoff * std::abs(v)};
}

inline filtered operator-(const filtered& a, const filtered& b) {
  const double v = a.value - b.value;
  return {v, a.error + b.error + unit_roundoff * std::abs(v)};
}

inline filtered operator-(const filtered& a) { return {-a.value, a.error}; }

inline filtered operator*(const filtered& a, const filtered& b) {
  const double v = a.value * b.value;
  double e = std::abs(a.value) * b.error + std::abs(b.value) * a.error + a.error * b.error;
  if (a.value != 0.0 && b.value != 0.0) e += unit_roundoff * std::abs(v);
  // products of tiny values may underflow; one denormal per operation covers it
  if (e != 0.0 || (a.value != 0.0 && b.value != 0.0)) e += std::numeric_limits<double>::denorm_min();
  return {v, e};
}

inline filtered& operator+=(filtered& a, const filtered& b) { return a = a + b; }
inline filtered& operator-=(filtered& a, const filtered& b) { return a = a - b; }

// Sign of the exact quantity if the filter can certify it.
inline std::optional<int> certain_sign(const filtered& f) {
  if (!std::isfinite(f.value) || !std::isfinite(f.error)) return std::nullopt;
  if (f.error == 0.0) return (f.value > 0) - (f.value < 0);
  // the error bound itself was accumulated in rounded arithmetic
  const double bound = f.error * (1.0 + 1e-10);
  if (f.value > bound) return 1;
  if (f.value < -bound) return -1;
  return std::nullopt;
}

using rational = mpq_class;

inline int sign(const rational& q) { return sgn(q); }

template <class T>
struct type_tag {
  using type = T;
};

// Table of minors for the expansion of an n x n row-major matrix: entry
// [mask] holds the determinant of rows 0..popcount(mask)-1 restricted to the
// columns in mask. Only masks with popcount <= rows are filled.
template <class T>
std::vector<T> minor_table(std::span<const T> a, int n, int rows) {
  const std::uint32_t full = (1u << n);
  std::vector<T> dp(full, T(0.0));
  dp[0] = T(1.0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int p = std::popcount(mask);
    if (p > rows) continue;
    const int r = p - 1;
    T acc(0.0);
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      const T term = a[r * n + j] * dp[mask & ~(1u << j)];
      if ((r + pos) % 2 == 0)
        acc += term;
      else
        acc -= term;
      ++pos;
    }
    dp[mask] = acc;
  }
  return dp;
}

template <class T>
T determinant(std::span<const T> a, int n) {
  if (n == 0) return T(1.0);
  const auto dp = minor_table(a, n, n);
  return dp[(1u << n) - 1];
}

// Sign of the first nonzero entry of a coefficient sequence produced by
// `compute(type_tag<T>{})`. Used for plain signs (one coefficient) and for
// symbolically perturbed signs (leading term first, then the perturbation
// coefficients in priority order).
template <class Compute>
int lexicographic_sign(Compute&& compute) {
  {
    const std::vector<filtered> approx = compute(type_tag<filtered>{});
    bool certain = true;
    for (const auto& c : approx) {
      const auto s = certain_sign(c);
      if (!s) {
        certain = false;
        break;
      }
      if (*s != 0) return *s;
    }
    if (certain) return 0;
  }
  const std::vector<rational> ex = compute(type_tag<rational>{});
  for (const auto& c : ex) {
    const int s = sign(c);
    if (s != 0) return s;
  }
  return 0;
}

}  // namespace reldel::exact
