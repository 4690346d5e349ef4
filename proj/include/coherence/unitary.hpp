#pragma once
// Index combinatorics for ramified unitary local models: signatures (r, s)
// with r + s = n, lattice-chain index sets I inside {0, ..., m}, m = n/2
// rounded down, and their translation into facets of the folded affine
// diagram of the special unitary group (the order-two fold of A_{n-1}).
//
// Vertices are named as in the lattice-chain picture: 0, ..., m when n is
// odd, and 0, ..., m-2, m, m' when n is even, where m' is the extra vertex
// that replaces m-1 once both members of the pair {m-1, m} appear in the
// chain.  The dictionary between these names and the folded-diagram node
// numbers is reconstructed from the computed diagram (dual labels, special
// vertices, adjacency), not hardwired, and is validated on construction.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coherence/twist.hpp"

namespace coherence {

class UnitaryModel {
 public:
  int n = 0, r = 0, s = 0, m = 0;
  bool even = false;
  std::vector<int> I;  // sorted lattice-chain indices
  RelativeRootDatum datum;

  // Vertex names are ints 0..m, with m+1 standing for m' in the even case.
  static constexpr int kPrimeOffset = 1;
  int prime_label() const { return m + kPrimeOffset; }
  std::string label_name(int label) const {
    return label == prime_label() ? std::to_string(m) + "'" : std::to_string(label);
  }

  std::vector<int> label_to_node;  // indexed by vertex name, -1 where absent
  std::vector<int> facet;          // Y as sorted folded-diagram nodes
  std::vector<int> facet_labels;   // matching vertex names, same order as facet

  static UnitaryModel build(int n, int r, int s, std::vector<int> I) {
    if (n < 4) throw std::invalid_argument("need n >= 4");
    if (r < 0 || r > s || r + s != n) throw std::invalid_argument("bad signature");
    UnitaryModel u;
    u.n = n;
    u.r = r;
    u.s = s;
    u.m = n / 2;
    u.even = n % 2 == 0;
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    if (I.empty()) throw std::invalid_argument("index set must be non-empty");
    for (int i : I)
      if (i < 0 || i > u.m) throw std::invalid_argument("index outside 0..m");
    if (u.even && std::count(I.begin(), I.end(), u.m - 1) &&
        !std::count(I.begin(), I.end(), u.m))
      throw std::invalid_argument("for even n, m-1 in I requires m in I");
    u.I = I;
    u.datum = RelativeRootDatum::fold(RootDatum::build('A', n - 1),
                                      DiagramTwist::standard('A', n - 1, 2));
    u.build_dictionary();
    u.build_facet();
    return u;
  }

  // kappa multiplicities: 1 away from the m-end, 2 at the special vertices
  // m (odd) resp. m and m' (even).
  int kappa(int label) const {
    if (label == m || (even && label == prime_label())) return 2;
    if (label >= 0 && label <= (even ? m - 2 : m - 1)) return 1;
    throw std::invalid_argument("kappa: vertex " + label_name(label) + " carries no multiplicity");
  }

  // Vertex names of the special parahorics: {0} and {m} for odd n, {m} and
  // {m'} for even n.
  std::vector<int> special_parahoric_labels() const {
    return even ? std::vector<int>{m, prime_label()} : std::vector<int>{0, m};
  }

  // Node-wise identity (dual label) * kappa = 2 over all named vertices.
  bool kappa_identity_holds() const {
    for (int label = 0; label <= (even ? prime_label() : m); ++label) {
      if (even && label == m - 1) continue;  // no vertex carries this name
      int node = label_to_node[label];
      if (node < 0) return false;
      if (datum.dual_marks[node] * kappa(label) != 2) return false;
    }
    return true;
  }

  // Central charge of the model line bundle for the power-a determinant:
  // sum over Y of a * kappa * dual label, which collapses to 2a|I|.
  long long central_charge(long long a) const {
    if (a < 1) throw std::invalid_argument("power must be positive");
    long long c = 0;
    for (std::size_t k = 0; k < facet.size(); ++k)
      c += a * datum.dual_marks[facet[k]] * kappa(facet_labels[k]);
    if (c != 2 * a * static_cast<long long>(I.size()))
      throw std::logic_error("central charge deviates from 2a|I|");
    return c;
  }

  // Levels of the model bundle on the facet, in facet order: a * kappa.
  IntVec bundle_levels(long long a) const {
    IntVec out;
    for (int label : facet_labels) out.push_back(a * kappa(label));
    return out;
  }

  // The signature coweight on the linear part: s ones then r zeros in the
  // GL_n torus becomes the fundamental coweight at node s-1 of A_{n-1}
  // (zero when s = n, which is central).
  static IntVec mu_signature(int n, int r, int s) {
    if (r < 0 || r > s || r + s != n) throw std::invalid_argument("bad signature");
    IntVec mu(n - 1, 0);
    if (s < n) mu[s - 1] = 1;
    return mu;
  }

 private:
  std::vector<std::vector<int>> adjacency() const {
    int N = datum.affine_nodes();
    std::vector<std::vector<int>> adj(N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j && datum.affine_cartan[i][j] != 0) adj[i].push_back(j);
    return adj;
  }

  // Walk a path graph from `start` away from `avoid`, returning the visit order.
  static std::vector<int> walk(const std::vector<std::vector<int>>& adj, int start,
                               std::vector<int> avoid) {
    std::vector<int> path{start};
    avoid.push_back(start);
    for (;;) {
      int next = -1;
      for (int cand : adj[path.back()])
        if (!std::count(avoid.begin(), avoid.end(), cand)) {
          if (next != -1) throw std::logic_error("diagram is not a chain where expected");
          next = cand;
        }
      if (next == -1) return path;
      path.push_back(next);
      avoid.push_back(next);
    }
  }

  void build_dictionary() {
    int N = datum.affine_nodes();
    std::vector<int> low;  // nodes with dual label one
    for (int i = 0; i < N; ++i)
      if (datum.dual_marks[i] == 1) low.push_back(i);
    auto adj = adjacency();
    label_to_node.assign(prime_label() + 1, -1);

    if (!even) {
      // Chain with the dual-label-one special vertex at the far end and the
      // origin vertex (node 0) at the other.
      if (low.size() != 1 || !datum.special_node[low[0]] || !datum.special_node[0])
        throw std::logic_error("unexpected odd-case diagram shape");
      auto path = walk(adj, 0, {});
      if (static_cast<int>(path.size()) != N || path.back() != low[0])
        throw std::logic_error("odd-case chain does not end at the dual-one vertex");
      for (int j = 0; j <= m; ++j) label_to_node[j] = path[j];
    } else {
      // Fork of two dual-label-one special vertices; the origin vertex is one
      // of them and is named m, the other m'.  The remaining chain runs from
      // the fork (name m-2) to the far end (name 0).
      if (low.size() != 2 || !datum.special_node[low[0]] || !datum.special_node[low[1]])
        throw std::logic_error("unexpected even-case diagram shape");
      if (low[0] != 0 && low[1] != 0)
        throw std::logic_error("origin vertex is not among the special fork");
      int m_node = 0, mp_node = low[0] == 0 ? low[1] : low[0];
      label_to_node[m] = m_node;
      label_to_node[prime_label()] = mp_node;
      if (adj[m_node].size() != 1 || adj[mp_node].size() != 1 ||
          adj[m_node][0] != adj[mp_node][0])
        throw std::logic_error("special fork does not attach at a single node");
      auto path = walk(adj, adj[m_node][0], {m_node, mp_node});
      if (static_cast<int>(path.size()) != m - 1)
        throw std::logic_error("even-case chain has the wrong length");
      for (int j = 0; j <= m - 2; ++j) label_to_node[j] = path[m - 2 - j];
    }
    if (!kappa_identity_holds()) throw std::logic_error("kappa identity fails on the diagram");
  }

  void build_facet() {
    std::vector<int> labels = I;
    if (even && std::count(I.begin(), I.end(), m - 1) && std::count(I.begin(), I.end(), m)) {
      labels.erase(std::remove(labels.begin(), labels.end(), m - 1), labels.end());
      labels.push_back(prime_label());
    }
    std::vector<std::pair<int, int>> pairs;  // (node, label)
    for (int label : labels) pairs.emplace_back(label_to_node[label], label);
    std::sort(pairs.begin(), pairs.end());
    for (auto& [node, label] : pairs) {
      facet.push_back(node);
      facet_labels.push_back(label);
    }
  }
};

}  // namespace coherence
