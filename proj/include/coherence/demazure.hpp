#pragma once
// Demazure characters for the affine flag varieties attached to a relative
// datum.  Weights are tracked through their pairings with the simple affine
// coroots only ("c-vectors"); this conflates weights differing by the null
// root, which is harmless for section dimensions because the string operators
// act through the c-vector alone and dimensions are total multiplicities.
//
// For a Schubert variety indexed by an element w of the affine Weyl group
// (given through a reduced word) and a line bundle with levels n_i supported
// on a facet Y, the space of sections has dimension equal to the total
// multiplicity of D_{i_1} ... D_{i_k} e^Lambda, with Lambda the c-vector
// having entry n_i at the nodes of Y.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coherence/iwahori.hpp"

namespace coherence {

struct LineBundle {
  std::vector<int> facet;  // Y, sorted node list
  IntVec levels;           // one level per facet node

  void validate(const RelativeRootDatum& rel) const {
    if (facet.size() != levels.size()) throw std::invalid_argument("facet/levels size mismatch");
    if (facet.empty()) throw std::invalid_argument("line bundle needs a non-empty facet");
    for (std::size_t k = 0; k < facet.size(); ++k) {
      if (facet[k] < 0 || facet[k] >= rel.affine_nodes())
        throw std::invalid_argument("facet node out of range");
      if (k > 0 && facet[k] <= facet[k - 1])
        throw std::invalid_argument("facet nodes must be strictly increasing");
      if (levels[k] < 0) throw std::invalid_argument("levels must be non-negative");
    }
  }

  bool ample() const {
    for (auto n : levels)
      if (n <= 0) return false;
    return true;
  }

  long long central_charge(const RelativeRootDatum& rel) const {
    validate(rel);
    long long c = 0;
    for (std::size_t k = 0; k < facet.size(); ++k) c += levels[k] * rel.dual_marks[facet[k]];
    return c;
  }

  IntVec highest_weight_c(const RelativeRootDatum& rel) const {
    validate(rel);
    IntVec c(rel.affine_nodes(), 0);
    for (std::size_t k = 0; k < facet.size(); ++k) c[facet[k]] = levels[k];
    return c;
  }

  LineBundle power(long long a) const {
    LineBundle out = *this;
    for (auto& n : out.levels) n *= a;
    return out;
  }
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Signed characters keyed by c-vectors; coefficients are exact integers.
class DemazureEngine {
 public:
  const IwahoriWeylGroup* W;
  long long op_budget;       // max string-operator applications
  mutable long long ops_used = 0;

  explicit DemazureEngine(const IwahoriWeylGroup& w, long long budget = 100000)
      : W(&w), op_budget(budget) {}

  using Character = std::map<IntVec, Int>;

  Character demazure_apply(const Character& ch, int node) const {
    if (++ops_used > op_budget)
      throw BudgetExceeded("Demazure operator budget exhausted (" + std::to_string(op_budget) +
                           " applications)");
    const IntMat& A = W->rel->affine_cartan;
    int N = W->rel->affine_nodes();
    Character out;
    for (const auto& [c, m] : ch) {
      long long k = c[node];
      if (k >= 0) {
        IntVec cur = c;
        for (long long j = 0; j <= k; ++j) {
          out[cur] += m;
          if (j < k)
            for (int i = 0; i < N; ++i) cur[i] -= A[i][node];
        }
      } else if (k <= -2) {
        IntVec cur = c;
        for (long long j = 1; j <= -k - 1; ++j) {
          for (int i = 0; i < N; ++i) cur[i] += A[i][node];
          out[cur] -= m;
        }
      }
      // k == -1: the term dies
    }
    for (auto it = out.begin(); it != out.end();) {
      if (it->second == 0)
        it = out.erase(it);
      else
        ++it;
    }
    return out;
  }

  // D_{i_1} ... D_{i_k} e^Lambda for w = s_{i_1} ... s_{i_k}; the word is
  // consumed from the right.
  Character demazure_character(const std::vector<int>& word, const IntVec& lambda_c) const {
    for (auto v : lambda_c)
      if (v < 0) throw std::invalid_argument("highest weight must be dominant");
    Character ch;
    ch[lambda_c] = 1;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      ch = demazure_apply(ch, *it);
      for (const auto& [c, m] : ch)
        if (m < 0) throw std::logic_error("negative multiplicity in a Demazure character");
    }
    return ch;
  }

  Int section_dim_word(const std::vector<int>& word, const IntVec& lambda_c) const {
    Int total = 0;
    for (const auto& [c, m] : demazure_character(word, lambda_c)) total += m;
    return total;
  }

  // Sections of the bundle over the Schubert variety of w (any reduced word).
  Int schubert_section_dim(const IWElement& w, const LineBundle& L) const {
    auto [word, tau] = W->reduced_word(w);
    if (!(tau == W->identity()))
      throw std::invalid_argument("Schubert index must lie in the affine Weyl group");
    return section_dim_word(word, L.highest_weight_c(*W->rel));
  }
};

}  // namespace coherence
