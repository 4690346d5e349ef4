#pragma once
// Finite root data for the simple types A..G at small rank, with exact
// arithmetic throughout.  Weights are stored in fundamental-weight
// coordinates, coweights in fundamental-coweight coordinates; alongside each
// positive root we keep its expansion in simple roots and the expansion of
// its coroot in simple coroots, so all pairings reduce to integer sums.
//
// Convention: cartan[i][j] = <alpha_j, alpha_i^vee>.  Bourbaki numbering for
// the diagrams (B_n has the short root at node n, C_n the long one, G2 starts
// with the short root).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coherence/numeric.hpp"

namespace coherence {

struct Weight {
  IntVec fw;  // coordinates in the fundamental-weight basis
  bool operator==(const Weight& o) const { return fw == o.fw; }
};

struct Coweight {
  IntVec fcw;  // coordinates in the fundamental-coweight basis
  bool operator==(const Coweight& o) const { return fcw == o.fcw; }
  bool operator<(const Coweight& o) const { return fcw < o.fcw; }
};

// A positive root beta together with its coroot beta^vee.
struct PosRoot {
  IntVec root_coords;    // beta in simple roots
  IntVec fw;             // beta in fundamental weights
  IntVec coroot_coords;  // beta^vee in simple coroots
  IntVec fcw;            // beta^vee in fundamental coweights
  long long height = 0;  // sum of root_coords
};

class RootDatum {
 public:
  char series = 'A';
  int rank = 0;
  std::string label;
  IntMat cartan;
  std::vector<PosRoot> positive;  // sorted by (height, root_coords)
  int highest_index = -1;         // the highest root
  Weight two_rho;
  IntVec two_rho_root_coords;
  Coweight two_rho_check;
  long long coxeter_number = 0;
  long long dual_coxeter_number = 0;

  static IntMat cartan_matrix(char series, int rank) {
    auto bad = [&] {
      throw std::invalid_argument(std::string("unsupported type ") + series + std::to_string(rank));
    };
    int n = rank;
    if (n < 1 || n > 8) bad();
    IntMat A(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) A[i][i] = 2;
    auto link = [&](int i, int j) { A[i][j] = A[j][i] = -1; };  // 0-based
    switch (series) {
      case 'A':
        for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
        break;
      case 'B':
        if (n < 2) bad();
        for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
        A[n - 1][n - 2] = -2;  // <alpha_{n-1}, alpha_n^vee>, alpha_n short
        break;
      case 'C':
        if (n < 2) bad();
        for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
        A[n - 2][n - 1] = -2;  // <alpha_n, alpha_{n-1}^vee>, alpha_n long
        break;
      case 'D':
        if (n < 4) bad();
        for (int i = 0; i + 1 < n - 1; ++i) link(i, i + 1);
        link(n - 3, n - 1);
        break;
      case 'E':
        if (n < 6 || n > 8) bad();
        // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 hangs off node 4.
        link(0, 2);
        link(2, 3);
        link(1, 3);
        for (int i = 4; i < n; ++i) link(i - 1, i);
        break;
      case 'F':
        if (n != 4) bad();
        link(0, 1);
        link(2, 3);
        A[1][2] = -1;  // <alpha_3, alpha_2^vee>
        A[2][1] = -2;  // <alpha_2, alpha_3^vee>
        break;
      case 'G':
        if (n != 2) bad();
        A[0][1] = -3;  // <alpha_2, alpha_1^vee>, alpha_1 short
        A[1][0] = -1;
        break;
      default:
        bad();
    }
    return A;
  }

  static RootDatum build(char series, int rank) {
    RootDatum d;
    d.series = series;
    d.rank = rank;
    d.label = std::string(1, series) + std::to_string(rank);
    d.cartan = cartan_matrix(series, rank);
    d.generate_roots();
    d.compute_pairing_matrix();
    d.compute_symmetrizer();
    return d;
  }

  // --- pairing -------------------------------------------------------------

  // <weight, coweight>, exact.  Requires the value to be an integer, which
  // holds whenever one side lies in the root (resp. coroot) lattice; all
  // callers in this library satisfy that.
  long long pair(const Weight& w, const Coweight& c) const {
    check_dim(w.fw.size());
    check_dim(c.fcw.size());
    Int acc = 0;
    for (int i = 0; i < rank; ++i) {
      Int t = 0;
      for (int j = 0; j < rank; ++j) t += adj_cartan_[i][j] * w.fw[j];
      acc += t * c.fcw[i];
    }
    if (acc % det_cartan_ != 0)
      throw std::domain_error("pair: value not integral on these lattices");
    return static_cast<long long>(Int(acc / det_cartan_));
  }

  long long pair_root(int pos_index, const Coweight& c) const {
    const auto& r = positive.at(pos_index).root_coords;
    long long v = 0;
    for (int k = 0; k < rank; ++k) v += r[k] * c.fcw[k];
    return v;
  }

  // --- reflections and orbits ---------------------------------------------

  Coweight reflect_cw(int i, const Coweight& c) const {
    Coweight r = c;
    for (int j = 0; j < rank; ++j) r.fcw[j] -= c.fcw[i] * cartan[i][j];
    return r;
  }

  Weight reflect_w(int i, const Weight& w) const {
    Weight r = w;
    for (int j = 0; j < rank; ++j) r.fw[j] -= w.fw[i] * cartan[j][i];
    return r;
  }

  bool is_dominant(const Coweight& c) const {
    return std::all_of(c.fcw.begin(), c.fcw.end(), [](long long v) { return v >= 0; });
  }
  bool is_dominant(const Weight& w) const {
    return std::all_of(w.fw.begin(), w.fw.end(), [](long long v) { return v >= 0; });
  }

  std::vector<Coweight> weyl_orbit(const Coweight& c) const {
    std::set<Coweight> seen{c};
    std::vector<Coweight> queue{c};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int i = 0; i < rank; ++i) {
        Coweight n = reflect_cw(i, queue[q]);
        if (seen.insert(n).second) queue.push_back(n);
      }
    return {seen.begin(), seen.end()};
  }

  // Dominant representative plus a word moving the input to it
  // (w = s_{i1}...s_{ik} applied left to right).
  std::pair<Coweight, std::vector<int>> dominant_rep(const Coweight& c) const {
    Coweight cur = c;
    std::vector<int> word;
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i < rank; ++i)
        if (cur.fcw[i] < 0) {
          cur = reflect_cw(i, cur);
          word.push_back(i);
          moved = true;
          break;
        }
    }
    return {cur, word};
  }

  // --- representation-theoretic quantities --------------------------------

  // dim of the irreducible with highest weight lambda (dominant), by the
  // Weyl dimension formula, evaluated as an exact product.
  Int weyl_dim(const Weight& lambda) const {
    if (!is_dominant(lambda)) throw std::invalid_argument("weyl_dim: weight not dominant");
    Int num = 1, den = 1;
    for (const auto& beta : positive) {
      Int a = 0, b = 0;
      for (int k = 0; k < rank; ++k) {
        a += Int(beta.coroot_coords[k]) * (lambda.fw[k] + 1);
        b += beta.coroot_coords[k];
      }
      num *= a;
      den *= b;
    }
    if (num % den != 0) throw std::logic_error("weyl_dim: non-integral result");
    return num / den;
  }

  bool is_minuscule(const Coweight& mu) const {
    for (const auto& beta : positive) {
      long long v = 0;
      for (int k = 0; k < rank; ++k) v += beta.root_coords[k] * mu.fcw[k];
      if (v < -1 || v > 1) return false;
    }
    return true;
  }

  std::vector<int> minuscule_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < rank; ++i) {
      Coweight f{IntVec(rank, 0)};
      f.fcw[i] = 1;
      if (is_minuscule(f)) out.push_back(i);
    }
    return out;
  }

  struct MinusculeDecomp {
    bool ok = false;
    std::vector<int> nodes;  // node indices, one per minuscule summand
  };

  // Greedy decomposition of a dominant coweight as a sum of minuscule
  // fundamental coweights; fails when some coordinate sits at a
  // non-minuscule node.
  MinusculeDecomp minuscule_decomposition(const Coweight& mu) const {
    if (!is_dominant(mu)) throw std::invalid_argument("minuscule_decomposition: not dominant");
    MinusculeDecomp out;
    auto minus_nodes = minuscule_nodes();
    IntVec rest = mu.fcw;
    for (int i : minus_nodes)
      while (rest[i] > 0) {
        out.nodes.push_back(i);
        --rest[i];
      }
    out.ok = std::all_of(rest.begin(), rest.end(), [](long long v) { return v == 0; });
    if (!out.ok) out.nodes.clear();
    return out;
  }

  // Image of a coweight under the invariant form normalized so short coroots
  // have square length 2.  For a minuscule fundamental coweight this is the
  // matching fundamental weight; used by the section-count product formula.
  Weight coweight_star(const Coweight& mu) const {
    // mu = sum m_k alpha_k^vee with A^T m = fcw, then
    // (mu, alpha_i^vee) = sum_k m_k c_k A_{ki}.
    RatMat At(rank, RatVec(rank));
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) At[i][j] = cartan[j][i];
    RatVec b(rank);
    for (int i = 0; i < rank; ++i) b[i] = mu.fcw[i];
    RatVec m = rational_solve(At, b);
    Weight out{IntVec(rank, 0)};
    for (int i = 0; i < rank; ++i) {
      Rat v = 0;  // (mu, alpha_i^vee) with (alpha_k^vee, alpha_i^vee) = c_k A_{ik}
      for (int k = 0; k < rank; ++k) v += m[k] * symmetrizer_[k] * cartan[i][k];
      if (denominator(v) != 1)
        throw std::domain_error("coweight_star: image not an integral weight");
      out.fw[i] = static_cast<long long>(Int(numerator(v)));
    }
    return out;
  }

  // --- Weyl group as matrices ---------------------------------------------

  // Matrix of s_i acting on fundamental-coweight coordinates.
  IntMat simple_reflection_fcw(int i) const {
    IntMat m = identity_mat(rank);
    for (int j = 0; j < rank; ++j) m[j][i] -= cartan[i][j];
    return m;
  }
  // Matrix of s_i acting on simple-root coordinates.
  IntMat simple_reflection_root(int i) const {
    IntMat m = identity_mat(rank);
    for (int k = 0; k < rank; ++k) m[i][k] -= cartan[i][k];
    return m;
  }

  // Greedy reduced word for the longest element; its length equals the
  // number of positive roots, which the tests check independently.
  std::vector<int> longest_word() const {
    IntMat W = identity_mat(rank);  // action on root coordinates
    std::vector<int> word;
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i < rank; ++i) {
        // w(alpha_i) = column i; ascent iff it is a positive root
        bool positive_col = true;
        for (int r = 0; r < rank; ++r)
          if (W[r][i] < 0) {
            positive_col = false;
            break;
          }
        if (positive_col) {
          W = mat_mul(W, simple_reflection_root(i));
          word.push_back(i);
          moved = true;
          break;
        }
      }
    }
    return word;
  }

  Weight fundamental_weight(int i) const {
    Weight w{IntVec(rank, 0)};
    w.fw[i] = 1;
    return w;
  }
  Coweight fundamental_coweight(int i) const {
    Coweight c{IntVec(rank, 0)};
    c.fcw[i] = 1;
    return c;
  }
  Weight weight_scale(long long a, const Weight& w) const {
    Weight r = w;
    for (auto& v : r.fw) v *= a;
    return r;
  }

  const RatVec& coroot_symmetrizer() const { return symmetrizer_; }

 private:
  std::vector<std::vector<Int>> adj_cartan_;  // adjugate of the Cartan matrix
  Int det_cartan_ = 1;
  RatVec symmetrizer_;  // c_i with (alpha_i^vee, alpha_j^vee) = c_i A_{ij}, min c_i = 1

  void check_dim(std::size_t s) const {
    if (static_cast<int>(s) != rank) throw std::invalid_argument("dimension mismatch");
  }

  void generate_roots() {
    std::set<IntVec> seen;
    std::vector<std::pair<IntVec, IntVec>> queue;  // (root coords, coroot coords)
    for (int j = 0; j < rank; ++j) {
      IntVec r(rank, 0), c(rank, 0);
      r[j] = c[j] = 1;
      seen.insert(r);
      queue.emplace_back(r, c);
    }
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [r, c] = queue[q];
      for (int i = 0; i < rank; ++i) {
        IntVec nr = r, nc = c;
        long long pr = 0, pc = 0;
        for (int k = 0; k < rank; ++k) pr += cartan[i][k] * r[k];
        for (int k = 0; k < rank; ++k) pc += c[k] * cartan[k][i];
        nr[i] -= pr;
        nc[i] -= pc;
        bool pos = std::all_of(nr.begin(), nr.end(), [](long long v) { return v >= 0; });
        if (pos && seen.insert(nr).second) queue.emplace_back(nr, nc);
      }
    }
    for (auto& [r, c] : queue) {
      PosRoot p;
      p.root_coords = r;
      p.coroot_coords = c;
      p.fw.assign(rank, 0);
      p.fcw.assign(rank, 0);
      for (int i = 0; i < rank; ++i)
        for (int k = 0; k < rank; ++k) {
          p.fw[i] += cartan[i][k] * r[k];
          p.fcw[i] += c[k] * cartan[k][i];
        }
      p.height = 0;
      for (auto v : r) p.height += v;
      positive.push_back(std::move(p));
    }
    std::sort(positive.begin(), positive.end(), [](const PosRoot& a, const PosRoot& b) {
      return std::tie(a.height, a.root_coords) < std::tie(b.height, b.root_coords);
    });
    long long best = -1;
    for (std::size_t i = 0; i < positive.size(); ++i)
      if (positive[i].height > best) {
        best = positive[i].height;
        highest_index = static_cast<int>(i);
      }
    // 2rho and the dual Coxeter number
    two_rho.fw.assign(rank, 0);
    two_rho_root_coords.assign(rank, 0);
    two_rho_check.fcw.assign(rank, 0);
    for (const auto& p : positive)
      for (int k = 0; k < rank; ++k) {
        two_rho.fw[k] += p.fw[k];
        two_rho_root_coords[k] += p.root_coords[k];
        two_rho_check.fcw[k] += p.fcw[k];
      }
    coxeter_number = positive[highest_index].height + 1;
    long long cht = 0;
    for (auto v : positive[highest_index].coroot_coords) cht += v;
    dual_coxeter_number = cht + 1;
  }

  void compute_pairing_matrix() {
    // adjugate and determinant of the Cartan matrix, for pair()
    RatMat A(rank, RatVec(rank));
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) A[i][j] = cartan[i][j];
    // determinant by elimination
    RatMat B = A;
    Rat det = 1;
    for (int c = 0; c < rank; ++c) {
      int p = c;
      while (p < rank && B[p][c] == 0) ++p;
      if (p == rank) throw std::logic_error("Cartan matrix singular");
      if (p != c) {
        std::swap(B[p], B[c]);
        det = -det;
      }
      det *= B[c][c];
      for (int i = c + 1; i < rank; ++i)
        if (B[i][c] != 0) {
          Rat f = B[i][c] / B[c][c];
          for (int j = c; j < rank; ++j) B[i][j] -= f * B[c][j];
        }
    }
    det_cartan_ = Int(numerator(det));
    if (denominator(det) != 1) throw std::logic_error("non-integer determinant");
    // inverse via solves, then adj = det * inverse
    adj_cartan_.assign(rank, std::vector<Int>(rank));
    for (int col = 0; col < rank; ++col) {
      RatVec e(rank, Rat(0));
      e[col] = 1;
      RatVec x = rational_solve(A, e);
      for (int i = 0; i < rank; ++i) {
        Rat v = x[i] * det;
        if (denominator(v) != 1) throw std::logic_error("adjugate not integral");
        adj_cartan_[i][col] = Int(numerator(v));
      }
    }
  }

  void compute_symmetrizer() {
    // (alpha_i^vee, alpha_j^vee) = c_i A_{ji} symmetric forces
    // c_j = c_i A_{ji} / A_{ij}; propagate over the (connected) diagram,
    // then normalize so the shortest coroot has square length 2.
    symmetrizer_.assign(rank, Rat(0));
    symmetrizer_[0] = 1;
    std::vector<int> todo{0};
    for (std::size_t q = 0; q < todo.size(); ++q) {
      int i = todo[q];
      for (int j = 0; j < rank; ++j)
        if (j != i && cartan[i][j] != 0 && symmetrizer_[j] == 0) {
          symmetrizer_[j] = symmetrizer_[i] * cartan[j][i] / cartan[i][j];
          todo.push_back(j);
        }
    }
    Rat mn = symmetrizer_[0];
    for (const auto& v : symmetrizer_) mn = std::min(mn, v);
    for (auto& v : symmetrizer_) v /= mn;
  }
};

// The catalog used by the label identity and the coverage tests.
inline std::vector<std::pair<char, int>> simple_types_up_to_rank(int maxrank) {
  std::vector<std::pair<char, int>> out;
  for (int r = 1; r <= maxrank; ++r) out.push_back({'A', r});
  for (int r = 2; r <= maxrank; ++r) out.push_back({'B', r});
  for (int r = 2; r <= maxrank; ++r) out.push_back({'C', r});
  for (int r = 4; r <= maxrank; ++r) out.push_back({'D', r});
  for (int r = 6; r <= std::min(8, maxrank); ++r) out.push_back({'E', r});
  if (maxrank >= 4) out.push_back({'F', 4});
  if (maxrank >= 2) out.push_back({'G', 2});
  return out;
}

}  // namespace coherence
