#pragma once
// Section-dimension bookkeeping for unions of Schubert varieties inside a
// partial affine flag variety, and the two coherence identities the engine
// verifies: the product formula for minuscule-decomposable coweights and the
// matching of admissible-union dimensions with affine Grassmannian Schubert
// dimensions for the split form.
//
// All unions are presented by their antichain of bi-maximal elements.  The
// dimension of H^0 over a union is computed by inclusion-exclusion,
//     dim(X_1 cup R) = dim X_1 + dim R - dim(X_1 cap R),
// with the intersection again a union of Schubert varieties (the maximal
// common bi-maximal lower bounds).  Additivity holds because these varieties
// are compatibly split, so restriction maps on sections are surjective and
// the Mayer-Vietoris sequence has no H^1 correction.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coherence/admissible.hpp"
#include "coherence/demazure.hpp"

namespace coherence {

inline std::string word_string(const IwahoriWeylGroup& W, const IWElement& g) {
  auto [word, tau] = W.reduced_word(g);
  std::string s;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) s += ".";
    s += "s" + std::to_string(word[k]);
  }
  if (!(tau == W.identity())) {
    if (!s.empty()) s += ".";
    s += "tau[";
    for (std::size_t k = 0; k < tau.z.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(tau.z[k]);
    }
    s += ";" + std::to_string(tau.w) + "]";
  }
  if (s.empty()) s = "e";
  return s;
}

// Re-express an affine Weyl group element in another realization of the same
// Coxeter system (e.g. move from the adjoint to the simply connected lattice).
inline IWElement transport_affine(const IwahoriWeylGroup& from, const IwahoriWeylGroup& to,
                                  const IWElement& g) {
  auto [word, tau] = from.reduced_word(g);
  if (!(tau == from.identity()))
    throw std::invalid_argument("transport_affine: element has a nontrivial length-zero part");
  IWElement out = to.identity();
  for (int i : word) out = to.mult(out, to.simple[i]);
  return out;
}

struct CoherenceOptions {
  long long subproblem_budget = 10000;   // inclusion-exclusion nodes
  long long demazure_budget = 1000000;   // string-operator applications
};

// One union of Schubert varieties: fixed flag variety (left/right parahoric
// generator sets), fixed line bundle, memoized over sub-antichains.
class SchubertUnionContext {
 public:
  const IwahoriWeylGroup* W;
  std::vector<int> gens_left, gens_right;
  LineBundle bundle;
  DemazureEngine engine;
  long long subproblem_budget;
  int split_salt;  // which antichain member leads the inclusion-exclusion
  mutable long long subproblems_used = 0;

  SchubertUnionContext(const IwahoriWeylGroup& w, std::vector<int> gl, std::vector<int> gr,
                       LineBundle L, const CoherenceOptions& opt, int salt = 0)
      : W(&w),
        gens_left(std::move(gl)),
        gens_right(std::move(gr)),
        bundle(std::move(L)),
        engine(w, opt.demazure_budget),
        subproblem_budget(opt.subproblem_budget),
        split_salt(salt) {}

  Int union_section_dim(std::vector<IWElement> maxima) const {
    canonicalize(maxima);
    return union_dim_rec(maxima);
  }

 private:
  mutable std::map<std::vector<IWElement>, Int> memo;
  mutable std::map<IWElement, std::vector<IWElement>> bimax_memo;

  bool is_bimax(const IWElement& g) const {
    return W->coset_max(g, gens_left, gens_right) == g;
  }

  // Sort, dedupe, and drop elements dominated by another member.
  void canonicalize(std::vector<IWElement>& v) const {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<IWElement> keep;
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < v.size() && !dominated; ++j)
        if (i != j && W->bruhat_leq(v[i], v[j]) && !(v[i] == v[j])) dominated = true;
      if (!dominated) keep.push_back(v[i]);
    }
    v.swap(keep);
  }

  Int union_dim_rec(const std::vector<IWElement>& anti) const {
    if (anti.empty()) return 0;
    auto it = memo.find(anti);
    if (it != memo.end()) return it->second;
    if (++subproblems_used > subproblem_budget)
      throw BudgetExceeded("inclusion-exclusion budget exhausted (" +
                           std::to_string(subproblem_budget) + " subproblems)");
    Int val;
    if (anti.size() == 1) {
      val = engine.schubert_section_dim(anti[0], bundle);
    } else {
      std::size_t pick = static_cast<std::size_t>(split_salt) % anti.size();
      const IWElement& x1 = anti[pick];
      std::vector<IWElement> rest;
      for (std::size_t k = 0; k < anti.size(); ++k)
        if (k != pick) rest.push_back(anti[k]);
      val = engine.schubert_section_dim(x1, bundle) + union_dim_rec(rest) -
            union_dim_rec(intersect(x1, rest));
    }
    memo.emplace(anti, val);
    return val;
  }

  const std::vector<IWElement>& bimax_below(const IWElement& u) const {
    auto it = bimax_memo.find(u);
    if (it != bimax_memo.end()) return it->second;
    std::vector<IWElement> out;
    for (const IWElement& z : W->ideal_below({u}))
      if (is_bimax(z)) out.push_back(z);
    std::sort(out.begin(), out.end());
    return bimax_memo.emplace(u, std::move(out)).first->second;
  }

  // Maximal bi-maximal elements below x1 and below some member of rest:
  // the antichain presenting X_1 cap (union of rest).
  std::vector<IWElement> intersect(const IWElement& x1, const std::vector<IWElement>& rest) const {
    std::vector<IWElement> hits;
    for (const IWElement& z : bimax_below(x1))
      for (const IWElement& v : rest)
        if (W->bruhat_leq(z, v)) {
          hits.push_back(z);
          break;
        }
    canonicalize(hits);
    return hits;
  }
};

struct AdmissibleOutcome {
  Int dim = 0;
  std::vector<IWElement> maxima;        // bi-maximal antichain, simply connected group
  std::vector<std::string> antichain;   // the same as reduced words
  std::vector<int> facet_left;          // parahoric the orbits are taken under
  long long subproblems = 0;
};

struct GrassmannianReport {
  bool ok = false;
  Int lhs = 0, rhs = 0;
  long long charge = 0;
  IntVec mu_rel_class, mu_split_class;
  std::vector<int> facet, facet_left;
  std::vector<std::string> lhs_antichain, rhs_antichain;
};

struct ProductReport {
  bool applicable = false;  // mu is a sum of minuscule fundamental coweights
  bool ok = false;
  Int lhs = 0, rhs = 0;
  long long charge = 0;  // central charge of L^a
  std::vector<int> decomposition_nodes;
  std::vector<std::string> lhs_antichain;
};

// Holds one twisted datum together with its split absolute form and the four
// Iwahori-Weyl realizations the identities compare.  Not movable: the group
// objects keep pointers to the datum members.
class CoherenceScene {
 public:
  RelativeRootDatum rel;    // the (possibly) twisted datum
  RelativeRootDatum split;  // identity twist on the same absolute base
  IwahoriWeylGroup rel_ad, rel_sc, split_ad, split_sc;
  CoherenceOptions opt;

  CoherenceScene(const RootDatum& base, const DiagramTwist& tw, CoherenceOptions o = {})
      : rel(RelativeRootDatum::fold(base, tw)),
        split(RelativeRootDatum::fold(base, DiagramTwist::identity(base.rank))),
        rel_ad(rel, LatticeKind::Adjoint),
        rel_sc(rel, LatticeKind::SimplyConnected),
        split_ad(split, LatticeKind::Adjoint),
        split_sc(split, LatticeKind::SimplyConnected),
        opt(o) {}
  CoherenceScene(const CoherenceScene&) = delete;
  CoherenceScene& operator=(const CoherenceScene&) = delete;

  // Sections of the bundle over the twisted admissible union attached to the
  // dominant class mu in the given realization pair.
  AdmissibleOutcome admissible_sections(const IwahoriWeylGroup& ad, const IwahoriWeylGroup& sc,
                                        const IntVec& mu_class, const LineBundle& L,
                                        int salt = 0) const {
    L.validate(*ad.rel);
    IntVec mu = ad.dominant_class(mu_class);
    AdmissibleSet adm = AdmissibleSet::build(ad, mu, L.facet);
    TwistedAdmissible tw = adm.twisted();

    AdmissibleOutcome out;
    out.facet_left = tw.facet_left;
    for (const IWElement& m : tw.maxima) {
      IWElement t = transport_affine(ad, sc, m);
      if (sc.length(t) != ad.length(m))
        throw std::logic_error("transported element changed length");
      if (!(sc.coset_max(t, tw.gens_left, tw.gens_right) == t))
        throw std::logic_error("transported element lost bi-maximality");
      out.maxima.push_back(t);
    }
    std::sort(out.maxima.begin(), out.maxima.end());
    for (const IWElement& m : out.maxima) out.antichain.push_back(word_string(sc, m));

    SchubertUnionContext ctx(sc, tw.gens_left, tw.gens_right, L, opt, salt);
    out.dim = ctx.union_section_dim(out.maxima);
    out.subproblems = ctx.subproblems_used;
    return out;
  }

  // Affine Grassmannian Schubert variety of the split form at charge c:
  // the vertex facet at node 0 (hyperspecial for an untwisted diagram).
  AdmissibleOutcome grassmannian_sections(const IntVec& mu_split_class, long long c,
                                          int salt = 0) const {
    if (!split.special_node[0])
      throw std::logic_error("node 0 of the split diagram should be special");
    LineBundle L{{0}, {c}};
    return admissible_sections(split_ad, split_sc, mu_split_class, L, salt);
  }

  // Product formula value: for mu = sum of minuscule fundamental coweights,
  // h_mu(b) is the product of dim H^0(X(mu_j), O(b)) over the summands.
  Int h_mu_value(const IntVec& mu_abs_fcw, long long b) const {
    auto decomp = rel.base.minuscule_decomposition(Coweight{mu_abs_fcw});
    if (!decomp.ok)
      throw std::invalid_argument("h_mu: coweight is not a sum of minuscule fundamentals");
    Int h = 1;
    for (int node : decomp.nodes) {
      Weight star = rel.base.coweight_star(rel.base.fundamental_coweight(node));
      for (auto& v : star.fw) v *= b;
      h *= rel.base.weyl_dim(star);
    }
    return h;
  }

  ProductReport check_product_identity(const IntVec& mu_abs_fcw, const LineBundle& L, long long a,
                           int salt = 0) const {
    if (a < 0) throw std::invalid_argument("bundle power must be non-negative");
    ProductReport rep;
    auto decomp = rel.base.minuscule_decomposition(Coweight{mu_abs_fcw});
    if (!decomp.ok) return rep;
    rep.applicable = true;
    rep.decomposition_nodes = decomp.nodes;
    rep.charge = a * L.central_charge(rel);

    IntVec mu_rel = rel.co_ad.project(mu_abs_fcw);
    AdmissibleOutcome lhs = admissible_sections(rel_ad, rel_sc, mu_rel, L.power(a), salt);
    rep.lhs = lhs.dim;
    rep.lhs_antichain = lhs.antichain;
    rep.rhs = h_mu_value(mu_abs_fcw, rep.charge);
    rep.ok = rep.lhs == rep.rhs;
    return rep;
  }

  struct FactorizationReport {
    bool ok = false;
    Int whole = 0, part1 = 0, part2 = 0;
  };

  // Sections over the Grassmannian Schubert variety of a sum of minuscule
  // coweights factor into the product over the summands.
  FactorizationReport check_factorization(const IntVec& mu1_abs, const IntVec& mu2_abs,
                                          long long c, int salt = 0) const {
    if (!rel.base.is_minuscule(Coweight{mu1_abs}) || !rel.base.is_minuscule(Coweight{mu2_abs}))
      throw std::invalid_argument("factorization needs minuscule coweights");
    IntVec sum = mu1_abs;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += mu2_abs[k];
    FactorizationReport rep;
    rep.whole = grassmannian_sections(split.co_ad.project(sum), c, salt).dim;
    rep.part1 = grassmannian_sections(split.co_ad.project(mu1_abs), c, salt).dim;
    rep.part2 = grassmannian_sections(split.co_ad.project(mu2_abs), c, salt).dim;
    rep.ok = rep.whole == rep.part1 * rep.part2;
    return rep;
  }

  GrassmannianReport check_grassmannian_identity(const IntVec& mu_abs_fcw, const LineBundle& L, int salt = 0) const {
    GrassmannianReport rep;
    rep.facet = L.facet;
    rep.charge = L.central_charge(rel);

    rep.mu_rel_class = rel_ad.dominant_class(rel.co_ad.project(mu_abs_fcw));
    AdmissibleOutcome lhs = admissible_sections(rel_ad, rel_sc, rep.mu_rel_class, L, salt);
    rep.lhs = lhs.dim;
    rep.lhs_antichain = lhs.antichain;
    rep.facet_left = lhs.facet_left;

    rep.mu_split_class = split_ad.dominant_class(split.co_ad.project(mu_abs_fcw));
    AdmissibleOutcome rhs = grassmannian_sections(rep.mu_split_class, rep.charge, salt);
    rep.rhs = rhs.dim;
    rep.rhs_antichain = rhs.antichain;

    rep.ok = rep.lhs == rep.rhs;
    return rep;
  }
};

}  // namespace coherence
