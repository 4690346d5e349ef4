#pragma once
// Admissible sets.  For a dominant translation class mu, Adm(mu) is the set
// of elements below some translation by a Weyl conjugate of mu.  At a facet Y
// of the base alcove the set is thickened on both sides by the parabolic
// subgroup generated by the simple reflections NOT in Y; the result is both a
// union of double cosets and the downward closure of the double-coset maxima
// of the extreme translations, so it is determined by that antichain.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "coherence/iwahori.hpp"

namespace coherence {

struct TwistedAdmissible;  // forward

class AdmissibleSet {
 public:
  const IwahoriWeylGroup* W = nullptr;
  IntVec mu;               // dominant class
  std::vector<int> facet;  // subset of affine nodes
  std::vector<int> gens;   // complement of the facet: generators of W^Y
  std::vector<IWElement> maxima;  // antichain, sorted

  static AdmissibleSet build(const IwahoriWeylGroup& W, const IntVec& mu_dominant,
                             const std::vector<int>& facet) {
    if (!W.is_dominant_class(mu_dominant)) throw std::invalid_argument("class is not dominant");
    if (facet.empty())
      throw std::invalid_argument("facet must be a non-empty subset of the affine nodes");
    AdmissibleSet a;
    a.W = &W;
    a.mu = mu_dominant;
    a.facet = facet;
    std::vector<bool> in_facet(W.rel->affine_nodes(), false);
    for (int y : facet) {
      if (y < 0 || y >= W.rel->affine_nodes()) throw std::invalid_argument("facet node out of range");
      in_facet[y] = true;
    }
    for (int i = 0; i < W.rel->affine_nodes(); ++i)
      if (!in_facet[i]) a.gens.push_back(i);
    std::set<IWElement> raw;
    for (const auto& lam : W.weyl_orbit_class(mu_dominant))
      raw.insert(W.coset_max(W.translation(lam), a.gens, a.gens));
    // antichain: drop anything dominated by another maximum
    for (const auto& m : raw) {
      bool dominated = false;
      for (const auto& other : raw)
        if (!(other == m) && W.bruhat_leq(m, other)) dominated = true;
      if (!dominated) a.maxima.push_back(m);
    }
    std::sort(a.maxima.begin(), a.maxima.end());
    return a;
  }

  bool contains(const IWElement& g) const {
    for (const auto& m : maxima)
      if (W->bruhat_leq(g, m)) return true;
    return false;
  }

  std::set<IWElement> ideal() const { return W->ideal_below(maxima); }

  long long cardinality() const { return static_cast<long long>(ideal().size()); }

  TwistedAdmissible twisted() const;
};

// The same set translated by tau_mu^{-1} so that it lands in the affine Weyl
// group; the left stabilizer facet moves by the node permutation of tau_mu.
struct TwistedAdmissible {
  IWElement tau;                  // length-zero part of t_mu
  std::vector<int> facet_left;    // preimage of the facet under tau's action
  std::vector<int> facet_right;   // the original facet
  std::vector<int> gens_left, gens_right;
  std::vector<IWElement> maxima;  // tau^{-1} * original maxima
};

inline TwistedAdmissible AdmissibleSet::twisted() const {
  TwistedAdmissible t;
  t.tau = W->tau_of_translation(mu);
  IWElement tinv = W->inverse(t.tau);
  t.facet_right = facet;
  for (int y : facet) t.facet_left.push_back(W->node_permutation(tinv, y));
  std::sort(t.facet_left.begin(), t.facet_left.end());
  std::vector<bool> inl(W->rel->affine_nodes(), false), inr(W->rel->affine_nodes(), false);
  for (int y : t.facet_left) inl[y] = true;
  for (int y : t.facet_right) inr[y] = true;
  for (int i = 0; i < W->rel->affine_nodes(); ++i) {
    if (!inl[i]) t.gens_left.push_back(i);
    if (!inr[i]) t.gens_right.push_back(i);
  }
  for (const auto& m : maxima) {
    IWElement mm = W->mult(tinv, m);
    if (!W->in_affine_weyl(mm))
      throw std::logic_error("translated admissible maximum is outside the affine Weyl group");
    t.maxima.push_back(mm);
  }
  std::sort(t.maxima.begin(), t.maxima.end());
  return t;
}

}  // namespace coherence
