#pragma once
// The extended affine Weyl group of a relative datum: semidirect product of
// the translation classes (free part of the chosen coinvariant lattice) with
// the finite relative Weyl group.  An element (z, w) acts on the apartment by
// v -> w(v) - av(z), so lengths are exact wall-crossing counts between the
// base alcove and its image, Bruhat order is the usual descent recursion, and
// the length-zero elements form the stabilizer Omega of the base alcove.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coherence/numeric.hpp"
#include "coherence/twist.hpp"

namespace coherence {

enum class LatticeKind { SimplyConnected, Adjoint };

struct IWElement {
  IntVec z;   // translation class (free coinvariant coordinates)
  int w = 0;  // index into the finite Weyl group enumeration
  friend bool operator==(const IWElement& a, const IWElement& b) {
    return a.w == b.w && a.z == b.z;
  }
  friend bool operator<(const IWElement& a, const IWElement& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.z < b.z;
  }
};

class IwahoriWeylGroup {
 public:
  const RelativeRootDatum* rel;
  LatticeKind kind;
  const CoinvariantLattice* co;
  RatMat T, Tinv;  // class coords <-> apartment u-coords
  int f = 0;

  // finite relative Weyl group, enumerated by class matrices
  std::vector<IntMat> w_class;
  std::vector<RatMat> w_u;
  std::vector<int> w_inv;
  std::vector<std::vector<int>> w_mult;
  std::map<IntMat, int> w_index;
  std::vector<int> generator;  // per node orbit, index of the simple reflection

  std::vector<IWElement> simple;  // one per affine node, 0 = extra

  IwahoriWeylGroup(const RelativeRootDatum& r, LatticeKind k) : rel(&r), kind(k) {
    co = (k == LatticeKind::SimplyConnected) ? &r.co_sc : &r.co_ad;
    if (!co->torsion.empty())
      throw std::runtime_error(
          "coinvariant lattice has torsion; this engine works on the free quotient only");
    T = (k == LatticeKind::SimplyConnected) ? r.T_sc : r.T_ad;
    f = r.f;
    Tinv = rat_inverse(T);
    build_finite_group();
    build_simple_reflections();
  }

  IWElement identity() const { return IWElement{IntVec(f, 0), 0}; }
  IWElement translation(const IntVec& z) const { return IWElement{z, 0}; }

  IWElement mult(const IWElement& a, const IWElement& b) const {
    IntVec z = mat_apply(w_class[a.w], b.z);
    for (int i = 0; i < f; ++i) z[i] += a.z[i];
    return IWElement{z, w_mult[a.w][b.w]};
  }
  IWElement inverse(const IWElement& a) const {
    int wi = w_inv[a.w];
    IntVec z = mat_apply(w_class[wi], a.z);
    for (int i = 0; i < f; ++i) z[i] = -z[i];
    return IWElement{z, wi};
  }

  RatVec class_to_u(const IntVec& z) const {
    RatVec u(f, Rat(0));
    for (int o = 0; o < f; ++o)
      for (int c = 0; c < f; ++c) u[o] += T[o][c] * z[c];
    return u;
  }

  RatVec act_u(const IWElement& g, const RatVec& p) const {
    RatVec q(f, Rat(0));
    for (int o = 0; o < f; ++o)
      for (int c = 0; c < f; ++c) q[o] += w_u[g.w][o][c] * p[c];
    RatVec tz = class_to_u(g.z);
    for (int o = 0; o < f; ++o) q[o] -= tz[o];
    return q;
  }

  long long length(const IWElement& g) const {
    auto it = len_memo_.find(g);
    if (it != len_memo_.end()) return it->second;
    RatVec p = rel->barycenter_u, q = act_u(g, p);
    long long total = 0;
    for (std::size_t dir = 0; dir < rel->directions.size(); ++dir)
      total += rel->crossings(static_cast<int>(dir), rel->eval(static_cast<int>(dir), p),
                              rel->eval(static_cast<int>(dir), q));
    len_memo_.emplace(g, total);
    return total;
  }

  // g = s_{i_1} ... s_{i_k} tau with tau of length zero
  std::pair<std::vector<int>, IWElement> reduced_word(IWElement g) const {
    std::vector<int> word;
    long long len = length(g);
    while (len > 0) {
      bool found = false;
      for (int i = 0; i < static_cast<int>(simple.size()); ++i) {
        IWElement h = mult(simple[i], g);
        if (length(h) < len) {
          word.push_back(i);
          g = h;
          --len;
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("positive-length element with no left descent");
    }
    return {word, g};
  }

  bool bruhat_leq(const IWElement& x, const IWElement& y) const {
    if (x == y) return true;
    long long lx = length(x), ly = length(y);
    if (lx > ly) return false;
    if (ly == 0) return false;  // distinct length-zero elements are incomparable
    auto key = std::make_pair(x, y);
    auto it = bruhat_memo_.find(key);
    if (it != bruhat_memo_.end()) return it->second;
    int desc = -1;
    for (int i = 0; i < static_cast<int>(simple.size()); ++i)
      if (length(mult(simple[i], y)) < ly) {
        desc = i;
        break;
      }
    if (desc < 0) throw std::logic_error("no descent");
    IWElement sy = mult(simple[desc], y);
    IWElement sx = mult(simple[desc], x);
    bool r = (length(sx) < lx) ? bruhat_leq(sx, sy) : bruhat_leq(x, sy);
    bruhat_memo_.emplace(key, r);
    return r;
  }

  // --- translation classes ---

  bool is_dominant_class(const IntVec& z) const {
    RatVec u = class_to_u(z);
    for (int o = 0; o < f; ++o)
      if (rel->eval(rel->finite_simple_dir[o], u) < 0) return false;
    return true;
  }

  IntVec dominant_class(IntVec z) const {
    for (;;) {
      RatVec u = class_to_u(z);
      int bad = -1;
      for (int o = 0; o < f; ++o)
        if (rel->eval(rel->finite_simple_dir[o], u) < 0) {
          bad = o;
          break;
        }
      if (bad < 0) return z;
      z = mat_apply(w_class[generator[bad]], z);
    }
  }

  std::set<IntVec> weyl_orbit_class(const IntVec& z) const {
    std::set<IntVec> out{z};
    std::vector<IntVec> queue{z};
    while (!queue.empty()) {
      IntVec cur = queue.back();
      queue.pop_back();
      for (int o = 0; o < f; ++o) {
        IntVec nz = mat_apply(w_class[generator[o]], cur);
        if (out.insert(nz).second) queue.push_back(nz);
      }
    }
    return out;
  }

  long long pairing_two_rho(const IntVec& z) const {
    IntVec lift = co->lift(z);
    long long v = 0;
    if (kind == LatticeKind::SimplyConnected) {
      for (int k = 0; k < rel->base.rank; ++k) v += lift[k] * rel->base.two_rho.fw[k];
    } else {
      for (int k = 0; k < rel->base.rank; ++k) v += lift[k] * rel->base.two_rho_root_coords[k];
    }
    return v;
  }

  // mu - lam in the monoid generated by the simple coroot classes
  bool dominance_leq(const IntVec& lam, const IntVec& mu) const {
    RatMat G(f, RatVec(f));
    for (int o = 0; o < f; ++o) {
      IntVec cls = simple_coroot_class(o);
      for (int r = 0; r < f; ++r) G[r][o] = cls[r];
    }
    RatVec rhs(f);
    for (int r = 0; r < f; ++r) rhs[r] = Rat(mu[r] - lam[r]);
    RatVec n;
    try {
      n = rational_solve(G, rhs);
    } catch (const std::exception&) {
      return false;
    }
    for (int o = 0; o < f; ++o)
      if (denominator(n[o]) != 1 || n[o] < 0) return false;
    return true;
  }

  IntVec simple_coroot_class(int orbit) const {
    int node = rel->node_orbits[orbit][0];
    IntVec coords(rel->base.rank, 0);
    if (kind == LatticeKind::SimplyConnected) {
      coords[node] = 1;  // coroot coordinates
    } else {
      for (int i = 0; i < rel->base.rank; ++i) coords[i] = rel->base.cartan[node][i];
    }
    return co->project(coords);
  }

  // length-zero component of t_{z}
  IWElement tau_of_translation(const IntVec& z) const { return reduced_word(translation(z)).second; }

  // tau permutes the simple affine roots; return the image node
  int node_permutation(const IWElement& tau, int node) const {
    if (length(tau) != 0) throw std::invalid_argument("not length zero");
    IWElement ti = inverse(tau);
    // affine root of `node`: v -> sign*dir(v) + level; compose with tau^{-1}
    const auto& wall = rel->walls[node];
    // gradient row: sign * F_dir composed with U_{ti}, plus shift from -T z
    RatVec grad(f, Rat(0));
    for (int c = 0; c < f; ++c)
      for (int o = 0; o < f; ++o)
        grad[c] += Rat(wall.sign) * rel->directions[wall.dir].F[o] * w_u[ti.w][o][c];
    RatVec tz = class_to_u(ti.z);
    Rat shift = 0;
    for (int o = 0; o < f; ++o) shift += Rat(wall.sign) * rel->directions[wall.dir].F[o] * tz[o];
    Rat level = wall.level - shift;
    for (int j = 0; j < rel->affine_nodes(); ++j) {
      const auto& wj = rel->walls[j];
      RatVec gj(f, Rat(0));
      for (int c = 0; c < f; ++c) gj[c] = Rat(wj.sign) * rel->directions[wj.dir].F[c];
      if (gj == grad && wj.level == level) return j;
    }
    throw std::logic_error("alcove stabilizer does not permute the simple affine roots");
  }

  // downward closure in Bruhat order of a set of elements (subword dynamic
  // programming over reduced words)
  std::set<IWElement> ideal_below(const std::vector<IWElement>& maxima) const {
    std::set<IWElement> out;
    for (const auto& m : maxima) {
      auto [word, tau] = reduced_word(m);
      std::set<IWElement> S{identity()};
      for (int letter : word) {
        std::set<IWElement> next = S;
        for (const auto& x : S) next.insert(mult(x, simple[letter]));
        S = std::move(next);
      }
      for (const auto& x : S) out.insert(mult(x, tau));
    }
    return out;
  }

  // closure of a generating subset of simple reflections (must be proper)
  std::vector<IWElement> parabolic_elements(const std::vector<int>& gens) const {
    if (gens.size() >= simple.size())
      throw std::invalid_argument("parabolic subset must be proper");
    std::set<IWElement> seen{identity()};
    std::vector<IWElement> queue{identity()}, out{identity()};
    while (!queue.empty()) {
      IWElement cur = queue.back();
      queue.pop_back();
      for (int i : gens) {
        IWElement nx = mult(cur, simple[i]);
        if (seen.insert(nx).second) {
          queue.push_back(nx);
          out.push_back(nx);
        }
      }
    }
    return out;
  }

  // extremal representatives of the double coset W_left g W_right
  IWElement coset_max(IWElement g, const std::vector<int>& left,
                      const std::vector<int>& right) const {
    for (bool moved = true; moved;) {
      moved = false;
      for (int i : left) {
        IWElement h = mult(simple[i], g);
        if (length(h) > length(g)) {
          g = h;
          moved = true;
        }
      }
      for (int j : right) {
        IWElement h = mult(g, simple[j]);
        if (length(h) > length(g)) {
          g = h;
          moved = true;
        }
      }
    }
    return g;
  }
  IWElement coset_min(IWElement g, const std::vector<int>& left,
                      const std::vector<int>& right) const {
    for (bool moved = true; moved;) {
      moved = false;
      for (int i : left) {
        IWElement h = mult(simple[i], g);
        if (length(h) < length(g)) {
          g = h;
          moved = true;
        }
      }
      for (int j : right) {
        IWElement h = mult(g, simple[j]);
        if (length(h) < length(g)) {
          g = h;
          moved = true;
        }
      }
    }
    return g;
  }

  // is g in the affine Weyl group (translation part in the coroot-class image)?
  bool in_affine_weyl(const IWElement& g) const {
    RatMat G(f, RatVec(f));
    for (int o = 0; o < f; ++o) {
      IntVec cls = simple_coroot_class(o);
      for (int r = 0; r < f; ++r) G[r][o] = cls[r];
    }
    RatVec rhs(f);
    for (int r = 0; r < f; ++r) rhs[r] = Rat(g.z[r]);
    try {
      RatVec n = rational_solve(G, rhs);
      for (int o = 0; o < f; ++o)
        if (denominator(n[o]) != 1) return false;
    } catch (const std::exception&) {
      return false;
    }
    return true;
  }

  int finite_order() const { return static_cast<int>(w_class.size()); }

 private:
  mutable std::map<IWElement, long long> len_memo_;
  mutable std::map<std::pair<IWElement, IWElement>, bool> bruhat_memo_;

  void build_finite_group() {
    // generator class matrices
    std::vector<IntMat> gens;
    for (int o = 0; o < f; ++o) {
      const IntMat& abs = (kind == LatticeKind::SimplyConnected) ? rel->relsimple_coroot[o]
                                                                 : rel->relsimple_fcw[o];
      gens.push_back(descend(abs));
    }
    w_class.clear();
    w_class.push_back(identity_mat(f));
    w_index.clear();
    w_index[w_class[0]] = 0;
    std::vector<int> queue{0};
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (const auto& g : gens) {
        IntMat prod = mat_mul(g, w_class[cur]);
        if (!w_index.count(prod)) {
          int idx = static_cast<int>(w_class.size());
          w_index[prod] = idx;
          w_class.push_back(prod);
          queue.push_back(idx);
        }
      }
    }
    int N = static_cast<int>(w_class.size());
    generator.resize(f);
    for (int o = 0; o < f; ++o) generator[o] = w_index.at(gens[o]);
    w_mult.assign(N, std::vector<int>(N));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) w_mult[a][b] = w_index.at(mat_mul(w_class[a], w_class[b]));
    w_inv.assign(N, -1);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (w_mult[a][b] == 0) w_inv[a] = b;
    // apartment matrices U = T C T^{-1}
    w_u.resize(N);
    for (int a = 0; a < N; ++a) {
      RatMat C(f, RatVec(f));
      for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) C[i][j] = w_class[a][i][j];
      w_u[a] = rat_mul(T, rat_mul(C, Tinv));
    }
  }

  // class matrix of an absolute gamma-commuting matrix
  IntMat descend(const IntMat& abs) const {
    int n = rel->base.rank;
    IntMat out(f, IntVec(f, 0));
    for (int c = 0; c < f; ++c) {
      IntVec z(f, 0);
      z[c] = 1;
      IntVec lift = co->lift(z);
      IntVec img(n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) img[i] += abs[i][j] * lift[j];
      IntVec cls = co->project(img);
      for (int r = 0; r < f; ++r) out[r][c] = cls[r];
    }
    return out;
  }

  void build_simple_reflections() {
    simple.clear();
    for (int node = 0; node < rel->affine_nodes(); ++node) {
      const auto& wall = rel->walls[node];
      const auto& dir = rel->directions[wall.dir];
      // finite part: reflection in the direction (independent of sign)
      RatMat U(f, RatVec(f, Rat(0)));
      for (int i = 0; i < f; ++i) {
        U[i][i] = 1;
        for (int j = 0; j < f; ++j) U[i][j] -= dir.coroot_u[i] * dir.F[j];
      }
      RatMat C = rat_mul(Tinv, rat_mul(U, T));
      IntMat Ci(f, IntVec(f));
      for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) {
          if (denominator(C[i][j]) != 1) throw std::logic_error("reflection not integral on classes");
          Ci[i][j] = static_cast<long long>(Int(numerator(C[i][j])));
        }
      auto it = w_index.find(Ci);
      if (it == w_index.end()) throw std::logic_error("wall reflection missing from finite group");
      // translation part: -T z = (sign applied) level * coroot, i.e. the
      // reflection maps v to refl(v) + m * coroot with m = -sign*level... the
      // wall is {sign*a(v) + level = 0} i.e. {a(v) = -sign*level}; reflecting
      // in {a(v) = c} sends v to s_a(v) + c * a_vee.
      Rat c_level = Rat(-wall.sign) * wall.level;
      RatVec shift(f);
      for (int o = 0; o < f; ++o) shift[o] = c_level * dir.coroot_u[o];
      // need z with T z = -shift
      IntVec z(f, 0);
      for (int r = 0; r < f; ++r) {
        Rat v = 0;
        for (int o = 0; o < f; ++o) v += Tinv[r][o] * (-shift[o]);
        if (denominator(v) != 1) throw std::logic_error("wall reflection translation not integral");
        z[r] = static_cast<long long>(Int(numerator(v)));
      }
      simple.push_back(IWElement{z, it->second});
    }
    // sanity: walls of the base alcove really are reflections of length one
    for (const auto& s : simple)
      if (length(s) != 1) throw std::logic_error("simple affine reflection has wrong length");
  }
};

}  // namespace coherence
