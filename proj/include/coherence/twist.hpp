#pragma once
// Folding a split datum along a diagram automorphism.  Produces the relative
// (restricted) root system with its level sets, the coinvariant lattices for
// both the coroot and the coweight lattice, and the affine diagram of the
// resulting group: simple affine roots, generalized Cartan matrix, marks and
// dual marks, special vertices.
//
// Geometry lives on the fixed subspace of the coweight space, parametrized by
// one rational coordinate per node orbit ("u-coordinates").  A relative root
// is recorded by the functional it induces there plus its level set
// {offset + step * Z}: step 1/d for an orbit of d absolute roots, except the
// divisible roots of a non-reduced relative system, whose levels sit at
// half-integers.  Translation classes act on u-space through the coinvariant
// quotient, so every wall-crossing count downstream is exact.

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coherence/numeric.hpp"
#include "coherence/rootdata.hpp"

namespace coherence {

struct DiagramTwist {
  std::vector<int> perm;  // image of each 0-based node
  int order = 1;

  static DiagramTwist identity(int rank) {
    DiagramTwist t;
    t.perm.resize(rank);
    for (int i = 0; i < rank; ++i) t.perm[i] = i;
    t.order = 1;
    return t;
  }

  // The canonical fold of a given order for the types that admit one.
  static DiagramTwist standard(char series, int rank, int e) {
    DiagramTwist t = identity(rank);
    if (e == 1) return t;
    if (series == 'A' && e == 2 && rank >= 2) {
      for (int i = 0; i < rank; ++i) t.perm[i] = rank - 1 - i;
    } else if (series == 'D' && e == 2 && rank >= 4) {
      std::swap(t.perm[rank - 2], t.perm[rank - 1]);
    } else if (series == 'D' && e == 3 && rank == 4) {
      t.perm = {2, 1, 3, 0};
    } else if (series == 'E' && e == 2 && rank == 6) {
      t.perm = {5, 1, 4, 3, 2, 0};
    } else {
      throw std::invalid_argument("no standard fold of this order for this type");
    }
    t.order = e;
    return t;
  }

  void validate(const RootDatum& d) const {
    int n = d.rank;
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("twist: size mismatch");
    std::vector<int> seen(n, 0);
    for (int v : perm) {
      if (v < 0 || v >= n || seen[v]++) throw std::invalid_argument("twist: not a permutation");
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d.cartan[i][j] != d.cartan[perm[i]][perm[j]])
          throw std::invalid_argument("twist: does not preserve the Cartan matrix");
    // order check
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    int ord = 0;
    bool is_id = false;
    while (!is_id && ord <= n + 2) {
      for (int i = 0; i < n; ++i) p[i] = perm[p[i]];
      ++ord;
      is_id = true;
      for (int i = 0; i < n; ++i)
        if (p[i] != i) is_id = false;
    }
    if (!is_id || ord != order) throw std::invalid_argument("twist: declared order is wrong");
  }
};

// A coinvariant quotient  Z^n / im(1 - gamma)  presented by Smith normal
// form: integer projections onto the free part and the torsion coordinates,
// plus an integer section of the free part.
struct CoinvariantLattice {
  int ambient = 0, free_rank = 0;
  IntMat proj_free;                 // free_rank x n
  IntMat section;                   // n x free_rank, proj_free * section = id
  std::vector<long long> torsion;   // moduli > 1
  IntMat proj_torsion;              // torsion.size() x n (values to be reduced mod torsion[k])

  IntVec project(const IntVec& x) const { return mat_apply(proj_free, x); }
  IntVec torsion_part(const IntVec& x) const {
    IntVec t = mat_apply(proj_torsion, x);
    for (std::size_t k = 0; k < t.size(); ++k) {
      t[k] %= torsion[k];
      if (t[k] < 0) t[k] += torsion[k];
    }
    return t;
  }
  IntVec lift(const IntVec& z) const { return mat_apply(section, z); }

  static CoinvariantLattice build(int n, const std::vector<int>& perm) {
    // M = I - P_gamma acting on coordinates, (P x)_{perm(i)} = x_i
    IntMat M(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) {
      M[i][i] += 1;
      M[perm[i]][i] -= 1;
    }
    auto snf = smith_normal_form(M);
    CoinvariantLattice L;
    L.ambient = n;
    std::vector<std::vector<Int>> Uinv;
    {
      // invert U by rational elimination (U unimodular)
      RatMat A(n, RatVec(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = snf.U[i][j];
      Uinv.assign(n, std::vector<Int>(n));
      for (int col = 0; col < n; ++col) {
        RatVec e(n, Rat(0));
        e[col] = 1;
        RatVec x = rational_solve(A, e);
        for (int i = 0; i < n; ++i) {
          if (denominator(x[i]) != 1) throw std::logic_error("U not unimodular");
          Uinv[i][col] = Int(numerator(x[i]));
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      Int d = i < static_cast<int>(snf.diag.size()) ? snf.diag[i] : Int(0);
      if (d == 1) continue;  // coordinate dies in the quotient
      if (d == 0) {
        IntVec row(n);
        for (int j = 0; j < n; ++j) row[j] = static_cast<long long>(snf.U[i][j]);
        L.proj_free.push_back(row);
        ++L.free_rank;
      } else {
        IntVec row(n);
        for (int j = 0; j < n; ++j) row[j] = static_cast<long long>(snf.U[i][j]);
        L.proj_torsion.push_back(row);
        L.torsion.push_back(static_cast<long long>(d));
      }
    }
    // section: columns of U^{-1} at the free indices
    L.section.assign(n, IntVec(L.free_rank, 0));
    int fc = 0;
    for (int i = 0; i < n; ++i) {
      Int d = i < static_cast<int>(snf.diag.size()) ? snf.diag[i] : Int(0);
      if (d != 0) continue;
      for (int r = 0; r < n; ++r) L.section[r][fc] = static_cast<long long>(Uinv[r][i]);
      ++fc;
    }
    return L;
  }
};

class RelativeRootDatum {
 public:
  RootDatum base;
  DiagramTwist twist;
  int e = 1;

  std::vector<std::vector<int>> node_orbits;  // sorted by least element
  std::vector<int> orbit_of_node;
  int f = 0;  // relative rank = number of node orbits

  // One entry per positive relative root, including the divisible ones.
  struct RelDirection {
    IntVec F;                   // functional on u-coordinates
    std::vector<int> abs_orbit; // indices into base.positive
    bool multipliable = false;  // 2a is also a relative root
    bool divisible = false;     // a/2 is also a relative root
    Rat level_offset, level_step;
    RatVec coroot_u;            // geometric coroot in u-coordinates
  };
  std::vector<RelDirection> directions;
  std::vector<int> finite_simple_dir;  // per node orbit, direction index

  // Affine diagram: entry 0 is the extra node, entries 1..f the finite ones.
  struct Wall {
    int dir = 0;   // direction index
    int sign = 1;  // gradient = sign * direction functional
    Rat level;     // wall is {sign*a(v) + level = 0}
  };
  std::vector<Wall> walls;
  IntMat affine_cartan;  // (f+1) x (f+1), convention A[i][j] = <alpha_j, alpha_i^vee>
  IntVec marks, dual_marks;
  std::vector<RatVec> vertex_u;  // vertex opposite wall i (all other walls vanish)
  RatVec barycenter_u;
  std::vector<bool> special_node;

  CoinvariantLattice co_sc;  // coroot lattice coinvariants (coroot coordinates)
  CoinvariantLattice co_ad;  // coweight lattice coinvariants (fcw coordinates)
  RatMat T_sc, T_ad;         // free class coords -> u-coordinates (apartment)
  IntMat sc_to_ad_free;      // induced map on free quotients

  // Absolute matrices of the relative simple reflections, both on
  // fundamental-coweight and on simple-coroot coordinates.
  std::vector<IntMat> relsimple_fcw, relsimple_coroot;

  std::string label() const {
    return base.label + (e == 1 ? "" : "^(" + std::to_string(e) + ")");
  }
  int affine_nodes() const { return f + 1; }

  static RelativeRootDatum fold(const RootDatum& b, const DiagramTwist& t) {
    t.validate(b);
    RelativeRootDatum r;
    r.base = b;
    r.twist = t;
    r.e = t.order;
    r.compute_orbits();
    r.compute_directions();
    r.compute_coinvariants();
    r.compute_affine_diagram();
    r.compute_simple_reflections();
    return r;
  }

  // Functional of a direction evaluated at a u-point.
  Rat eval(int dir, const RatVec& u) const {
    Rat v = 0;
    for (int o = 0; o < f; ++o) v += directions[dir].F[o] * u[o];
    return v;
  }
  // Gradient functional of affine node i.
  Rat eval_wall_gradient(int i, const RatVec& u) const {
    return walls[i].sign * eval(walls[i].dir, u);
  }
  Rat eval_wall(int i, const RatVec& u) const {
    return eval_wall_gradient(i, u) + walls[i].level;
  }

  // Number of level lines of `dir` strictly between the values a(p) and a(q).
  long long crossings(int dir, const Rat& vp, const Rat& vq) const {
    // m with vp + m and vq + m of opposite (strict) signs, m in offset+step*Z
    Rat lo = -std::max(vp, vq), hi = -std::min(vp, vq);
    const auto& d = directions[dir];
    // count m = offset + step*k in the open interval (lo, hi)
    Rat klo = (lo - d.level_offset) / d.level_step;
    Rat khi = (hi - d.level_offset) / d.level_step;
    Int a = rat_floor(khi);
    if (Rat(a) == khi) --a;  // strict
    Int b = rat_ceil(klo);
    if (Rat(b) == klo) ++b;  // strict
    Int cnt = a - b + 1;
    return cnt > 0 ? static_cast<long long>(cnt) : 0;
  }

  // All affine roots a + m with a a positive relative gradient and
  // 0 <= m < value of the pairing (mu, a); mu given as a u-point (the
  // Galois-average of a dominant class).  Returned as (direction, level).
  std::vector<std::pair<int, Rat>> phi_mu_u(const RatVec& u) const {
    std::vector<std::pair<int, Rat>> out;
    for (std::size_t diri = 0; diri < directions.size(); ++diri) {
      Rat top = eval(static_cast<int>(diri), u);
      const auto& d = directions[diri];
      for (Rat m = d.level_offset; m < top; m += d.level_step) out.push_back({static_cast<int>(diri), m});
    }
    return out;
  }

 private:
  void compute_orbits() {
    int n = base.rank;
    orbit_of_node.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (orbit_of_node[i] != -1) continue;
      std::vector<int> orb;
      int j = i;
      do {
        orbit_of_node[j] = static_cast<int>(node_orbits.size());
        orb.push_back(j);
        j = twist.perm[j];
      } while (j != i);
      std::sort(orb.begin(), orb.end());
      node_orbits.push_back(orb);
    }
    f = static_cast<int>(node_orbits.size());
  }

  // sigma acting on a positive root (by permuting simple-root coordinates);
  // returns the index in base.positive.
  int sigma_on_root(int idx) const {
    IntVec r(base.rank, 0);
    const auto& rc = base.positive[idx].root_coords;
    for (int k = 0; k < base.rank; ++k) r[twist.perm[k]] = rc[k];
    for (std::size_t t = 0; t < base.positive.size(); ++t)
      if (base.positive[t].root_coords == r) return static_cast<int>(t);
    throw std::logic_error("twist does not permute the positive roots");
  }

  void compute_directions() {
    int n = base.rank;
    std::vector<int> root_orbit_of(base.positive.size(), -1);
    std::vector<std::vector<int>> root_orbits;
    for (std::size_t i = 0; i < base.positive.size(); ++i) {
      if (root_orbit_of[i] != -1) continue;
      std::vector<int> orb;
      std::size_t j = i;
      do {
        root_orbit_of[j] = static_cast<int>(root_orbits.size());
        orb.push_back(static_cast<int>(j));
        j = static_cast<std::size_t>(sigma_on_root(static_cast<int>(j)));
      } while (j != i);
      root_orbits.push_back(orb);
    }
    // one functional per orbit; group and detect the a / 2a pairs
    std::map<IntVec, int> by_F;
    for (auto& orb : root_orbits) {
      IntVec F(f, 0);
      const auto& rc = base.positive[static_cast<std::size_t>(orb[0])].root_coords;
      for (int k = 0; k < n; ++k) F[orbit_of_node[k]] += rc[k];
      RelDirection d;
      d.F = F;
      d.abs_orbit = orb;
      if (by_F.count(F)) throw std::logic_error("two orbits share a restriction functional");
      by_F[F] = static_cast<int>(directions.size());
      directions.push_back(std::move(d));
    }
    for (auto& d : directions) {
      IntVec twice(f), half(f);
      bool halves = true;
      for (int o = 0; o < f; ++o) {
        twice[o] = 2 * d.F[o];
        if (d.F[o] % 2 != 0) halves = false;
        else half[o] = d.F[o] / 2;
      }
      d.multipliable = by_F.count(twice) > 0;
      d.divisible = halves && by_F.count(half) > 0;
      if (d.divisible) {
        d.level_offset = Rat(1, 2);
        d.level_step = 1;
      } else {
        d.level_offset = 0;
        d.level_step = Rat(1, static_cast<long long>(d.abs_orbit.size()));
      }
      // geometric coroot: orbit sum of absolute coroots, rescaled so a(.)=2.
      // The sum is twist-fixed, so its coordinates are constant on node orbits.
      IntVec full(n, 0);
      for (int idx : d.abs_orbit) {
        const auto& fcw = base.positive[static_cast<std::size_t>(idx)].fcw;
        for (int k = 0; k < n; ++k) full[k] += fcw[k];
      }
      RatVec v(f, Rat(0));
      for (int o = 0; o < f; ++o) {
        for (int k : node_orbits[o])
          if (full[k] != full[node_orbits[o][0]]) throw std::logic_error("orbit sum not twist-fixed");
        v[o] = full[node_orbits[o][0]];
      }
      Rat val = 0;
      for (int o = 0; o < f; ++o) val += d.F[o] * v[o];
      if (val <= 0) throw std::logic_error("coroot positivity violated");
      d.coroot_u.assign(f, Rat(0));
      for (int o = 0; o < f; ++o) d.coroot_u[o] = 2 * v[o] / val;
    }
    // relative simple roots = restrictions of the absolute simple ones;
    // the restriction of alpha_k has functional e_{orbit(k)}
    finite_simple_dir.assign(f, -1);
    for (int o = 0; o < f; ++o) {
      IntVec Fk(f, 0);
      Fk[o] = 1;
      for (std::size_t t = 0; t < directions.size(); ++t)
        if (directions[t].F == Fk) {
          finite_simple_dir[o] = static_cast<int>(t);
          break;
        }
      if (finite_simple_dir[o] < 0) throw std::logic_error("missing simple restriction");
    }
  }

  void compute_coinvariants() {
    co_sc = CoinvariantLattice::build(base.rank, twist.perm);
    co_ad = CoinvariantLattice::build(base.rank, twist.perm);
    if (co_sc.free_rank != f || co_ad.free_rank != f)
      throw std::logic_error("free rank of coinvariants differs from number of orbits");
    T_sc = class_to_u(co_sc, /*coroot_coords=*/true);
    T_ad = class_to_u(co_ad, /*coroot_coords=*/false);
    // induced map on free quotients: coroot class -> coweight class
    sc_to_ad_free.assign(f, IntVec(f, 0));
    for (int c = 0; c < f; ++c) {
      IntVec zc(f, 0);
      zc[c] = 1;
      IntVec lift = co_sc.lift(zc);  // coroot coordinates
      IntVec fcw(base.rank, 0);
      for (int j = 0; j < base.rank; ++j)
        for (int i = 0; i < base.rank; ++i) fcw[i] += lift[j] * base.cartan[j][i];
      IntVec img = co_ad.project(fcw);
      for (int r = 0; r < f; ++r) sc_to_ad_free[r][c] = img[r];
    }
  }

  // Class coordinates -> u-coordinates of the Galois average of a lift.
  RatMat class_to_u(const CoinvariantLattice& co, bool coroot_coords) const {
    int n = base.rank;
    RatMat T(f, RatVec(f, Rat(0)));
    for (int c = 0; c < f; ++c) {
      IntVec z(f, 0);
      z[c] = 1;
      IntVec lift = co.lift(z);
      // to fcw coordinates
      RatVec fcw(n, Rat(0));
      if (coroot_coords) {
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) fcw[i] += Rat(lift[j]) * base.cartan[j][i];
      } else {
        for (int i = 0; i < n; ++i) fcw[i] = lift[i];
      }
      // average over the twist
      RatVec avg(n, Rat(0));
      std::vector<int> p(n);
      for (int i = 0; i < n; ++i) p[i] = i;
      for (int k = 0; k < e; ++k) {
        for (int i = 0; i < n; ++i) avg[p[i]] += fcw[i] / e;
        for (int i = 0; i < n; ++i) p[i] = twist.perm[p[i]];
      }
      // read off per orbit (components agree on orbits)
      for (int o = 0; o < f; ++o) {
        Rat val = avg[node_orbits[o][0]];
        for (int k : node_orbits[o])
          if (avg[k] != val) throw std::logic_error("average not orbit-constant");
        T[o][c] = val;
      }
    }
    return T;
  }

  void compute_affine_diagram() {
    // finite walls
    walls.clear();
    walls.push_back(Wall{});  // placeholder for the extra node
    for (int o = 0; o < f; ++o) walls.push_back(Wall{finite_simple_dir[o], +1, Rat(0)});
    // extra node: first wall hit along a generic interior dominant ray
    int tries = 0;
    for (;; ++tries) {
      if (tries > 50) throw std::logic_error("could not separate candidate walls");
      RatVec dvec(f);
      for (int o = 0; o < f; ++o) dvec[o] = 1 + Rat(o + 1, 1009 + 97 * tries);
      int best = -1;
      Rat best_t = 0;
      bool tie = false;
      for (std::size_t t = 0; t < directions.size(); ++t) {
        Rat denom = eval(static_cast<int>(t), dvec);
        Rat m0 = directions[t].level_offset;
        if (m0 == 0) m0 = directions[t].level_step;
        Rat hit = m0 / denom;
        if (best == -1 || hit < best_t) {
          best = static_cast<int>(t);
          best_t = hit;
          tie = false;
        } else if (hit == best_t) {
          tie = true;
        }
      }
      if (!tie) {
        Rat m0 = directions[best].level_offset;
        if (m0 == 0) m0 = directions[best].level_step;
        walls[0] = Wall{best, -1, m0};
        break;
      }
    }
    int N = affine_nodes();
    // vertices: vertex i solves {wall_j = 0 : j != i}
    vertex_u.assign(N, RatVec());
    for (int i = 0; i < N; ++i) {
      RatMat A;
      RatVec b;
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        RatVec row(f);
        for (int o = 0; o < f; ++o) row[o] = Rat(walls[j].sign) * directions[walls[j].dir].F[o];
        A.push_back(row);
        b.push_back(-walls[j].level);
      }
      vertex_u[i] = rational_solve(A, b);
    }
    barycenter_u.assign(f, Rat(0));
    for (int i = 0; i < N; ++i)
      for (int o = 0; o < f; ++o) barycenter_u[o] += vertex_u[i][o] / N;
    for (int i = 0; i < N; ++i)
      if (eval_wall(i, barycenter_u) <= 0) throw std::logic_error("barycenter not interior");
    // generalized Cartan matrix
    affine_cartan.assign(N, IntVec(N, 0));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        RatVec cor(f);
        for (int o = 0; o < f; ++o) cor[o] = Rat(walls[i].sign) * directions[walls[i].dir].coroot_u[o];
        Rat v = 0;
        for (int o = 0; o < f; ++o) v += Rat(walls[j].sign) * directions[walls[j].dir].F[o] * cor[o];
        if (denominator(v) != 1) throw std::logic_error("non-integral affine Cartan entry");
        affine_cartan[i][j] = static_cast<long long>(Int(numerator(v)));
      }
    marks = primitive_null_vector(affine_cartan);
    dual_marks = primitive_null_vector(mat_transpose(affine_cartan));
    // special vertices: the reduced residue system at the vertex has as many
    // directions as the full relative system
    long long reduced_total = 0;
    for (const auto& d : directions)
      if (!d.divisible) ++reduced_total;
    special_node.assign(N, false);
    for (int i = 0; i < N; ++i) {
      long long cnt = 0;
      for (std::size_t t = 0; t < directions.size(); ++t) {
        if (directions[t].divisible) continue;  // count geometric directions once
        bool through = passes_through(static_cast<int>(t), vertex_u[i]);
        if (!through && directions[t].multipliable) {
          // the doubled root may supply the wall instead
          for (std::size_t s = 0; s < directions.size(); ++s)
            if (directions[s].divisible) {
              IntVec twice(f);
              for (int o = 0; o < f; ++o) twice[o] = 2 * directions[t].F[o];
              if (directions[s].F == twice && passes_through(static_cast<int>(s), vertex_u[i]))
                through = true;
            }
        }
        if (through) ++cnt;
      }
      special_node[i] = (cnt == reduced_total);
    }
  }

  bool passes_through(int dir, const RatVec& u) const {
    Rat v = -eval(dir, u);  // need v in the level set
    const auto& d = directions[dir];
    Rat k = (v - d.level_offset) / d.level_step;
    return denominator(k) == 1;
  }

  void compute_simple_reflections() {
    relsimple_fcw.clear();
    relsimple_coroot.clear();
    for (int o = 0; o < f; ++o) {
      const auto& orb = node_orbits[o];
      bool adjacent_pair = orb.size() == 2 && base.cartan[orb[0]][orb[1]] != 0;
      std::vector<int> word;
      if (adjacent_pair) {
        word = {orb[0], orb[1], orb[0]};
      } else {
        word = orb;
      }
      IntMat mf = identity_mat(base.rank), mc = identity_mat(base.rank);
      for (int i : word) {
        mf = mat_mul(base.simple_reflection_fcw(i), mf);
        mc = mat_mul(coroot_reflection(i), mc);
      }
      relsimple_fcw.push_back(mf);
      relsimple_coroot.push_back(mc);
    }
  }

  IntMat coroot_reflection(int i) const {
    // s_i on simple-coroot coordinates: c -> c - (sum_k c_k A_{ki}) e_i
    IntMat m = identity_mat(base.rank);
    for (int k = 0; k < base.rank; ++k) m[i][k] -= base.cartan[k][i];
    return m;
  }
};

}  // namespace coherence
