#pragma once
// Exact integer / rational linear algebra helpers used by the root-datum and
// folding code.  Matrices here are tiny (rank <= 9), so everything runs on
// arbitrary-precision scalars and favours clarity over speed.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace coherence {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline IntMat identity_mat(std::size_t n) {
  IntMat m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
  std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  IntMat c(n, IntVec(p, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (std::size_t l = 0; l < p; ++l) c[i][l] += a[i][j] * b[j][l];
    }
  return c;
}

inline IntVec mat_apply(const IntMat& a, const IntVec& v) {
  IntVec r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline IntMat mat_transpose(const IntMat& a) {
  if (a.empty()) return {};
  IntMat t(a[0].size(), IntVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Smith normal form U*M*V = D with U, V unimodular and D diagonal,
// d_1 | d_2 | ... .  Entries stay small for the permutation-difference
// matrices we feed in, but the algorithm is written for the general case.
struct SmithDecomposition {
  std::vector<std::vector<Int>> U, V;  // square unimodular
  std::vector<Int> diag;               // min(rows, cols) entries, >= 0
};

inline SmithDecomposition smith_normal_form(const IntMat& m_in) {
  std::size_t rows = m_in.size(), cols = rows ? m_in[0].size() : 0;
  std::vector<std::vector<Int>> M(rows, std::vector<Int>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M[i][j] = m_in[i][j];
  std::vector<std::vector<Int>> U(rows, std::vector<Int>(rows, 0)),
      V(cols, std::vector<Int>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) U[i][i] = 1;
  for (std::size_t j = 0; j < cols; ++j) V[j][j] = 1;

  auto row_op = [&](std::size_t i, std::size_t k, const Int& q) {  // row i -= q*row k
    for (std::size_t j = 0; j < cols; ++j) M[i][j] -= q * M[k][j];
    for (std::size_t j = 0; j < rows; ++j) U[i][j] -= q * U[k][j];
  };
  auto col_op = [&](std::size_t j, std::size_t k, const Int& q) {  // col j -= q*col k
    for (std::size_t i = 0; i < rows; ++i) M[i][j] -= q * M[i][k];
    for (std::size_t i = 0; i < cols; ++i) V[i][j] -= q * V[i][k];
  };
  auto row_swap = [&](std::size_t i, std::size_t k) {
    std::swap(M[i], M[k]);
    std::swap(U[i], U[k]);
  };
  auto col_swap = [&](std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(M[i][j], M[i][k]);
    for (std::size_t i = 0; i < cols; ++i) std::swap(V[i][j], V[i][k]);
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // find pivot: smallest nonzero |entry| in the remaining block
    std::size_t pi = t, pj = t;
    bool found = false;
    Int best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (M[i][j] != 0 && (!found || abs(M[i][j]) < best)) {
          best = abs(M[i][j]);
          pi = i;
          pj = j;
          found = true;
        }
    if (!found) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i)
      if (M[i][t] != 0) {
        Int q = M[i][t] / M[t][t];
        row_op(i, t, q);
        if (M[i][t] != 0) clean = false;
      }
    for (std::size_t j = t + 1; j < cols; ++j)
      if (M[t][j] != 0) {
        Int q = M[t][j] / M[t][t];
        col_op(j, t, q);
        if (M[t][j] != 0) clean = false;
      }
    if (!clean) continue;  // remainders left; repeat with smaller pivot
    // enforce divisibility d_t | d_{t+1}: fold any bad entry into column t
    bool redo = false;
    for (std::size_t i = t + 1; i < rows && !redo; ++i)
      for (std::size_t j = t + 1; j < cols && !redo; ++j)
        if (M[i][j] % M[t][t] != 0) {
          col_op(t, j, Int(-1));  // col t += col j
          redo = true;
        }
    if (redo) continue;
    if (M[t][t] < 0) {
      for (std::size_t j = 0; j < cols; ++j) M[t][j] = -M[t][j];
      for (std::size_t j = 0; j < rows; ++j) U[t][j] = -U[t][j];
    }
    ++t;
  }
  SmithDecomposition out;
  out.U = std::move(U);
  out.V = std::move(V);
  for (std::size_t i = 0; i < rows && i < cols; ++i) out.diag.push_back(M[i][i]);
  return out;
}

// Solve A x = b exactly over the rationals; throws if inconsistent.
// A need not be square; returns one solution (free variables set to 0).
inline RatVec rational_solve(RatMat A, RatVec b) {
  std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    Rat inv = A[r][c];
    for (std::size_t j = c; j < cols; ++j) A[r][j] /= inv;
    b[r] /= inv;
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && A[i][c] != 0) {
        Rat f = A[i][c];
        for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
        b[i] -= f * b[r];
      }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) throw std::runtime_error("rational_solve: inconsistent system");
  RatVec x(cols, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

// One-dimensional integer kernel of a square matrix, scaled primitive and
// positive.  Throws if the kernel is not exactly one-dimensional.
inline IntVec primitive_null_vector(const IntMat& a) {
  std::size_t n = a.size();
  RatMat A(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = a[i][j];
  // Row-reduce; kernel dim must be 1.
  std::size_t r = 0;
  std::vector<long long> pivot_of_col(n, -1);
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t p = r;
    while (p < n && A[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(A[p], A[r]);
    Rat inv = A[r][c];
    for (std::size_t j = 0; j < n; ++j) A[r][j] /= inv;
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && A[i][c] != 0) {
        Rat f = A[i][c];
        for (std::size_t j = 0; j < n; ++j) A[i][j] -= f * A[r][j];
      }
    pivot_of_col[c] = static_cast<long long>(r);
    ++r;
  }
  if (r != n - 1) throw std::runtime_error("primitive_null_vector: kernel dimension != 1");
  std::size_t free_col = 0;
  while (free_col < n && pivot_of_col[free_col] != -1) ++free_col;
  RatVec x(n, Rat(0));
  x[free_col] = 1;
  for (std::size_t c = 0; c < n; ++c)
    if (pivot_of_col[c] != -1) x[c] = -A[static_cast<std::size_t>(pivot_of_col[c])][free_col];
  // clear denominators, divide by gcd, fix sign
  Int lcm = 1;
  for (auto& v : x) lcm = boost::multiprecision::lcm(lcm, Int(denominator(v)));
  std::vector<Int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = Int(numerator(x[i])) * (lcm / Int(denominator(x[i])));
  Int g = 0;
  for (auto& v : y) g = boost::multiprecision::gcd(g, v);
  if (g == 0) throw std::runtime_error("primitive_null_vector: zero kernel vector");
  bool neg = false;
  for (auto& v : y)
    if (v != 0) {
      neg = v < 0;
      break;
    }
  IntVec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Int v = y[i] / g * (neg ? -1 : 1);
    out[i] = static_cast<long long>(v);
    if (out[i] < 0) throw std::runtime_error("primitive_null_vector: mixed-sign kernel");
  }
  return out;
}

// Floor/ceil for exact rationals.
inline RatMat rat_mul(const RatMat& a, const RatMat& b) {
  std::size_t n = a.size(), m = b[0].size(), k = b.size();
  RatMat c(n, RatVec(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

inline RatMat rat_inverse(const RatMat& a) {
  std::size_t n = a.size();
  RatMat inv(n, RatVec(n, Rat(0)));
  for (std::size_t col = 0; col < n; ++col) {
    RatVec e(n, Rat(0));
    e[col] = 1;
    RatVec x = rational_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][col] = x[i];
  }
  return inv;
}

inline Int rat_floor(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  Int f = n / d;
  if (f * d > n) --f;
  return f;
}
inline Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

// FNV-1a, used for content-addressed cache keys.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace coherence
