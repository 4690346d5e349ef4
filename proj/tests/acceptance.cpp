// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures.  The whole grid runs twice and the two JSON transcripts must be
// byte-identical; optionally (argv[1] = path to the CLI binary) the CLI is
// invoked twice on a fixed job and its bytes compared as well.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "coherence/coherence.hpp"
#include "coherence/unitary.hpp"

using json = nlohmann::ordered_json;
using namespace coherence;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GroupId {
  char series;
  int rank;
  int order;
};

std::vector<GroupId> all_data() {
  std::vector<GroupId> out;
  for (int n = 1; n <= 8; ++n) out.push_back({'A', n, 1});
  for (int n = 2; n <= 8; ++n) out.push_back({'B', n, 1});
  for (int n = 2; n <= 8; ++n) out.push_back({'C', n, 1});
  for (int n = 4; n <= 8; ++n) out.push_back({'D', n, 1});
  for (int n = 6; n <= 8; ++n) out.push_back({'E', n, 1});
  out.push_back({'F', 4, 1});
  out.push_back({'G', 2, 1});
  for (int n = 2; n <= 8; n += 2) out.push_back({'A', n, 2});  // even folds
  for (int n = 3; n <= 8; n += 2) out.push_back({'A', n, 2});  // odd folds
  for (int n = 4; n <= 8; ++n) out.push_back({'D', n, 2});
  out.push_back({'E', 6, 2});
  out.push_back({'D', 4, 3});
  return out;
}

RelativeRootDatum make_datum(const GroupId& g) {
  RootDatum base = RootDatum::build(g.series, g.rank);
  DiagramTwist tw = g.order == 1 ? DiagramTwist::identity(g.rank)
                                 : DiagramTwist::standard(g.series, g.rank, g.order);
  return RelativeRootDatum::fold(base, tw);
}

// The five small groups used for the word-level checks.
std::vector<GroupId> word_check_data() {
  return {{'A', 1, 1}, {'A', 2, 1}, {'C', 2, 1}, {'G', 2, 1}, {'A', 2, 2}};
}

// Breadth-first ball of the Cayley graph (right multiplication by simple
// reflections); the depth of an element is its true word length.
std::map<IWElement, int> cayley_ball(const IwahoriWeylGroup& W, int radius) {
  std::map<IWElement, int> depth{{W.identity(), 0}};
  std::vector<IWElement> frontier{W.identity()};
  for (int d = 1; d <= radius; ++d) {
    std::vector<IWElement> next;
    for (const IWElement& g : frontier)
      for (std::size_t i = 0; i < W.simple.size(); ++i) {
        IWElement h = W.mult(g, W.simple[i]);
        if (depth.emplace(h, d).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return depth;
}

// All lattice classes in the box [-b, b]^f of free coordinates.
std::vector<IntVec> box_classes(int f, int b) {
  std::vector<IntVec> out;
  IntVec z(f, -b);
  for (;;) {
    out.push_back(z);
    int k = 0;
    while (k < f && z[k] == b) z[k++] = -b;
    if (k == f) break;
    ++z[k];
  }
  return out;
}

bool on_box_boundary(const IntVec& z, int b) {
  for (long long v : z)
    if (v == b || v == -b) return true;
  return false;
}

// Dominant classes with (2rho, mu) <= bound found by scanning a coordinate
// box; complete as long as nothing on the box boundary still qualifies.
std::set<IntVec> dominant_classes_boxed(const IwahoriWeylGroup& W, long long bound, int box,
                                        bool& box_ok) {
  std::set<IntVec> out;
  for (const IntVec& z : box_classes(W.f, box)) {
    IntVec dom = W.dominant_class(z);
    long long rho = W.pairing_two_rho(dom);
    if (on_box_boundary(z, box)) {
      if (rho <= bound) box_ok = false;
      continue;
    }
    if (rho <= bound) out.insert(dom);
  }
  return out;
}

struct CritResult {
  bool pass = true;
  std::string summary;
  std::vector<std::string> detail;  // printed only on failure
};

void fail(CritResult& r, const std::string& line) {
  r.pass = false;
  r.detail.push_back(line);
}

// --- criterion 1: dual label sums -----------------------------------------

CritResult crit_labels(json& doc) {
  CritResult r;
  auto t0 = std::chrono::steady_clock::now();
  json rows = json::array();
  for (const GroupId& g : all_data()) {
    RelativeRootDatum rel = make_datum(g);
    long long sum = 0;
    for (long long v : rel.dual_marks) sum += v;
    rows.push_back({{"group", rel.label()}, {"dual_sum", sum},
                    {"h_dual", rel.base.dual_coxeter_number}});
    if (sum != rel.base.dual_coxeter_number)
      fail(r, rel.label() + ": dual labels sum to " + std::to_string(sum) + ", expected " +
                  std::to_string(rel.base.dual_coxeter_number));
  }
  double dt = seconds_since(t0);
  if (dt >= 1.0) fail(r, "label sweep took " + std::to_string(dt) + " s (limit 1 s)");
  doc["labels"] = rows;
  r.summary = std::to_string(rows.size()) + " diagrams, dual labels sum to the dual Coxeter number";
  return r;
}

// --- criteria 2 and 3: translation lengths and Bruhat order ---------------

CritResult crit_lengths(json& doc) {
  CritResult r;
  json rows = json::array();
  const int bound = 10, box = 15;
  for (const GroupId& g : word_check_data()) {
    RelativeRootDatum rel = make_datum(g);
    IwahoriWeylGroup sc(rel, LatticeKind::SimplyConnected);
    IwahoriWeylGroup ad(rel, LatticeKind::Adjoint);
    auto ball = cayley_ball(sc, bound);

    long long translations = 0;
    for (const auto& [elem, depth] : ball) {
      if (elem.w != 0) continue;  // not a translation
      long long lib = sc.length(elem);
      long long rho = sc.pairing_two_rho(sc.dominant_class(elem.z));
      ++translations;
      if (lib != depth || lib != rho)
        fail(r, rel.label() + " t_" + word_string(sc, elem) + ": length " + std::to_string(lib) +
                    ", BFS " + std::to_string(depth) + ", (2rho,mu+) " + std::to_string(rho));
    }

    // Completeness: every class with (2rho, mu+) <= bound must be in the ball.
    for (auto* W : {&sc, &ad}) {
      long long formula_checked = 0;
      for (const IntVec& z : box_classes(W->f, box)) {
        long long rho = W->pairing_two_rho(W->dominant_class(z));
        if (on_box_boundary(z, box)) {
          if (rho <= bound) fail(r, rel.label() + ": enumeration box too small");
          continue;
        }
        if (rho > bound) continue;
        ++formula_checked;
        if (W->length(W->translation(z)) != rho)
          fail(r, rel.label() + ": length formula off at a class with (2rho,mu+)=" +
                      std::to_string(rho));
        if (W == &sc) {
          auto it = ball.find(W->translation(z));
          if (it == ball.end() || it->second != rho)
            fail(r, rel.label() + ": translation missing from the BFS ball");
        }
      }
      json row = {{"group", rel.label()},
                  {"lattice", W == &sc ? "sc" : "ad"},
                  {"classes", formula_checked}};
      if (W == &sc) row["bfs_translations"] = translations;
      rows.push_back(row);
    }
  }
  doc["lengths"] = rows;
  r.summary = "translation lengths match BFS and the (2rho, mu+) pairing in 5 groups";
  return r;
}

CritResult crit_bruhat(json& doc) {
  CritResult r;
  json rows = json::array();
  const long long bound = 10;
  for (const GroupId& g : word_check_data()) {
    RelativeRootDatum rel = make_datum(g);
    for (LatticeKind kind : {LatticeKind::SimplyConnected, LatticeKind::Adjoint}) {
      IwahoriWeylGroup W(rel, kind);
      bool box_ok = true;
      auto doms = dominant_classes_boxed(W, bound, 15, box_ok);
      if (!box_ok) fail(r, rel.label() + ": enumeration box too small");
      long long pairs = 0;
      for (const IntVec& lam : doms)
        for (const IntVec& mu : doms) {
          bool bruhat = W.bruhat_leq(W.translation(lam), W.translation(mu));
          bool dom = W.dominance_leq(lam, mu);
          ++pairs;
          if (bruhat != dom)
            fail(r, rel.label() + ": Bruhat and dominance disagree on a dominant pair");
        }
      rows.push_back({{"group", rel.label()},
                      {"lattice", kind == LatticeKind::SimplyConnected ? "sc" : "ad"},
                      {"classes", doms.size()},
                      {"pairs", pairs}});
    }
  }
  doc["bruhat"] = rows;
  r.summary = "t_lambda <= t_mu agrees with dominance order in 5 groups, both lattices";
  return r;
}

// --- criterion 4: coherence identity against the Grassmannian -------------

struct ScenePool {
  std::map<std::string, std::unique_ptr<CoherenceScene>> pool;
  CoherenceScene& get(char series, int rank, int order) {
    std::string key = std::string(1, series) + std::to_string(rank) + ":" + std::to_string(order);
    auto it = pool.find(key);
    if (it == pool.end()) {
      RootDatum base = RootDatum::build(series, rank);
      DiagramTwist tw = order == 1 ? DiagramTwist::identity(rank)
                                   : DiagramTwist::standard(series, rank, order);
      CoherenceOptions opt;
      opt.subproblem_budget = 2000000;
      opt.demazure_budget = 400000000;
      it = pool.emplace(key, std::make_unique<CoherenceScene>(base, tw, opt)).first;
    }
    return *it->second;
  }
};

CritResult crit_grassmannian(json& doc, ScenePool& scenes) {
  CritResult r;
  json rows = json::array();

  auto cell = [&](const std::string& name, CoherenceScene& scene, const IntVec& mu,
                  const LineBundle& L) -> GrassmannianReport {
    auto t0 = std::chrono::steady_clock::now();
    GrassmannianReport rep = scene.check_grassmannian_identity(mu, L);
    double dt = seconds_since(t0);
    rows.push_back({{"cell", name},
                    {"mu", mu},
                    {"facet", L.facet},
                    {"levels", L.levels},
                    {"charge", rep.charge},
                    {"lhs", rep.lhs.str()},
                    {"rhs", rep.rhs.str()}});
    if (!rep.ok) {
      fail(r, name + ": lhs " + rep.lhs.str() + " != rhs " + rep.rhs.str());
      std::string lw = "  flag antichain:";
      for (const auto& w : rep.lhs_antichain) lw += " " + w;
      r.detail.push_back(lw);
      std::string rw = "  Grassmannian antichain:";
      for (const auto& w : rep.rhs_antichain) rw += " " + w;
      r.detail.push_back(rw);
    }
    if (dt >= 300.0) fail(r, name + " exceeded the five-minute cell budget");
    return rep;
  };

  CoherenceScene& a1 = scenes.get('A', 1, 1);
  for (long long n0 = 1; n0 <= 2; ++n0)
    for (long long n1 = 1; n1 <= 2; ++n1) {
      GrassmannianReport rep =
          cell("A1 alpha-check (" + std::to_string(n0) + "," + std::to_string(n1) + ")", a1, {2},
               LineBundle{{0, 1}, {n0, n1}});
      if (n0 == 1 && n1 == 1 && (rep.lhs != 9 || rep.rhs != 9))
        fail(r, "A1 unit cell expected 9 on both sides, got " + rep.lhs.str() + " / " +
                    rep.rhs.str());
    }
  cell("A1 2alpha unit", a1, {4}, LineBundle{{0, 1}, {1, 1}});

  CoherenceScene& a2 = scenes.get('A', 2, 1);
  const std::vector<std::vector<int>> a2_facets = {{0, 1, 2}, {0}, {1}, {2}};
  for (const IntVec& mu : {IntVec{1, 0}, IntVec{1, 1}})
    for (const auto& facet : a2_facets) {
      LineBundle L{facet, IntVec(facet.size(), 1)};
      std::string name = "A2 mu=" + std::to_string(mu[0]) + std::to_string(mu[1]) + " Y=";
      for (int nd : facet) name += std::to_string(nd);
      cell(name, a2, mu, L);
    }

  CoherenceScene& c2 = scenes.get('C', 2, 1);
  for (int node : RootDatum::build('C', 2).minuscule_nodes()) {
    IntVec mu(2, 0);
    mu[node] = 1;
    cell("C2 minuscule node " + std::to_string(node), c2, mu, LineBundle{{0, 1, 2}, {1, 1, 1}});
  }

  CoherenceScene& su3 = scenes.get('A', 2, 2);
  for (int node = 0; node < su3.rel.affine_nodes(); ++node) {
    if (!su3.rel.special_node[node]) continue;
    cell("A2 fold special node " + std::to_string(node), su3, {1, 0}, LineBundle{{node}, {1}});
  }

  doc["grassmannian_cells"] = rows;
  r.summary = std::to_string(rows.size()) + " cells, union dimension equals Grassmannian dimension";
  return r;
}

// --- criterion 5: product formula for the union dimension -----------------

CritResult crit_product(json& doc, ScenePool& scenes) {
  CritResult r;
  json rows = json::array();
  CoherenceScene& a3 = scenes.get('A', 3, 1);
  LineBundle L{{0, 1, 2, 3}, {1, 1, 1, 1}};
  for (long long a = 1; a <= 2; ++a) {
    auto rep = a3.check_product_identity({1, 1, 0}, L, a);
    rows.push_back({{"a", a},
                    {"charge", rep.charge},
                    {"lhs", rep.lhs.str()},
                    {"rhs", rep.rhs.str()}});
    if (!rep.applicable) fail(r, "A3 omega1+omega2 unexpectedly not minuscule-decomposable");
    else if (!rep.ok) {
      fail(r, "A3 a=" + std::to_string(a) + ": union " + rep.lhs.str() +
                  " != product value " + rep.rhs.str());
      std::string lw = "  flag antichain:";
      for (const auto& w : rep.lhs_antichain) lw += " " + w;
      r.detail.push_back(lw);
    }
  }
  doc["product_cells"] = rows;
  r.summary = "A3 omega1+omega2, a in {1,2}: union dimension equals the Weyl product value";
  return r;
}

// --- criterion 6: Grassmannian factorization ------------------------------

CritResult crit_factorization(json& doc, ScenePool& scenes) {
  CritResult r;
  json rows = json::array();
  for (int rank : {2, 3}) {
    CoherenceScene& scene = scenes.get('A', rank, 1);
    auto nodes = RootDatum::build('A', rank).minuscule_nodes();
    for (int i : nodes)
      for (int j : nodes)
        for (long long c = 1; c <= 2; ++c) {
          IntVec m1(rank, 0), m2(rank, 0);
          m1[i] = 1;
          m2[j] = 1;
          auto rep = scene.check_factorization(m1, m2, c);
          rows.push_back({{"rank", rank}, {"i", i}, {"j", j}, {"c", c},
                          {"whole", rep.whole.str()},
                          {"parts", rep.part1.str() + "*" + rep.part2.str()}});
          if (!rep.ok)
            fail(r, "A" + std::to_string(rank) + " nodes " + std::to_string(i) + "," +
                        std::to_string(j) + " c=" + std::to_string(c) + ": " + rep.whole.str() +
                        " != " + rep.part1.str() + "*" + rep.part2.str());
        }
  }
  doc["factorization"] = rows;
  r.summary = "minuscule pairs in A2, A3, c in {1,2}: sum dimension factors over summands";
  return r;
}

// --- criterion 7: reduced-word independence -------------------------------

// Every reduced word of w is (i, word of s_i w) for a left descent i, so if
// shorter elements are word-independent it is enough to compare the operators
// D_i applied to the stored characters across all descents.
CritResult crit_word_independence(json& doc) {
  CritResult r;
  json rows = json::array();
  const int radius = 8;
  for (const GroupId& g : std::vector<GroupId>{{'A', 1, 1}, {'A', 2, 1}}) {
    RelativeRootDatum rel = make_datum(g);
    IwahoriWeylGroup W(rel, LatticeKind::SimplyConnected);
    DemazureEngine engine(W, 200000000);
    std::vector<int> full(rel.affine_nodes());
    for (int i = 0; i < rel.affine_nodes(); ++i) full[i] = i;
    IntVec lambda = LineBundle{full, IntVec(full.size(), 1)}.highest_weight_c(rel);

    auto ball = cayley_ball(W, radius);
    std::vector<std::pair<IWElement, int>> order(ball.begin(), ball.end());
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::map<IWElement, DemazureEngine::Character> chars;
    chars[W.identity()] = {{lambda, 1}};
    long long compared = 0;
    for (const auto& [elem, depth] : order) {
      if (depth == 0) continue;
      bool have = false;
      DemazureEngine::Character expect;
      for (int i = 0; i < static_cast<int>(W.simple.size()); ++i) {
        IWElement shorter = W.mult(W.simple[i], elem);
        if (W.length(shorter) >= depth) continue;  // not a left descent
        DemazureEngine::Character got = engine.demazure_apply(chars.at(shorter), i);
        if (!have) {
          expect = std::move(got);
          have = true;
        } else {
          ++compared;
          if (got != expect)
            fail(r, rel.label() + ": characters differ between reduced words of " +
                        word_string(W, elem));
        }
      }
      chars[elem] = std::move(expect);
    }
    rows.push_back({{"group", rel.label()},
                    {"elements", ball.size()},
                    {"descent_pairs_compared", compared}});
  }
  doc["word_independence"] = rows;
  r.summary = "Demazure characters agree across all reduced words, length <= 8, affine A1 and A2";
  return r;
}

// --- criterion 8: wall-crossing count -------------------------------------

// Datum-level only: the big data (E7, E8, D8, ...) appear here, and
// enumerating their finite Weyl groups is out of the question.  Dominant
// classes of the coweight lattice are sums of projected fundamental
// coweights; the (2rho, mu) pairing comes from a lift, legitimate because
// 2rho is fixed by the diagram automorphism.
CritResult crit_wall_count(json& doc) {
  CritResult r;
  json rows = json::array();
  const long long bound = 12;
  for (const GroupId& g : all_data()) {
    RelativeRootDatum rel = make_datum(g);
    auto class_u = [&](const IntVec& z) {
      RatVec u(rel.f, Rat(0));
      for (int o = 0; o < rel.f; ++o)
        for (int c = 0; c < rel.f; ++c) u[o] += rel.T_ad[o][c] * z[c];
      return u;
    };
    auto pairing = [&](const IntVec& z) {
      IntVec lift = rel.co_ad.lift(z);
      long long v = 0;
      for (int k = 0; k < rel.base.rank; ++k) v += lift[k] * rel.base.two_rho_root_coords[k];
      return v;
    };
    auto dominant = [&](const IntVec& z) {
      RatVec u = class_u(z);
      for (int o = 0; o < rel.f; ++o)
        if (rel.eval(rel.finite_simple_dir[o], u) < 0) return false;
      return true;
    };

    std::vector<IntVec> gens;
    std::vector<long long> costs;
    for (int i = 0; i < rel.base.rank; ++i) {
      IntVec fcw(rel.base.rank, 0);
      fcw[i] = 1;
      IntVec cls = rel.co_ad.project(fcw);
      if (!dominant(cls)) fail(r, rel.label() + ": projected coweight not dominant");
      long long p = pairing(cls);
      if (p < 1) fail(r, rel.label() + ": nonzero dominant class with pairing < 1");
      gens.push_back(cls);
      costs.push_back(p);
    }

    std::set<IntVec> classes;
    std::function<void(std::size_t, IntVec, long long)> rec = [&](std::size_t k, IntVec acc,
                                                                  long long left) {
      classes.insert(acc);
      for (std::size_t i = k; i < gens.size(); ++i) {
        if (costs[i] > left) continue;
        IntVec nxt = acc;
        for (std::size_t c = 0; c < nxt.size(); ++c) nxt[c] += gens[i][c];
        rec(i, std::move(nxt), left - costs[i]);
      }
    };
    rec(0, IntVec(rel.f, 0), bound);

    long long checked = 0;
    for (const IntVec& mu : classes) {
      long long rho = pairing(mu);
      auto walls = rel.phi_mu_u(class_u(mu));
      ++checked;
      if (static_cast<long long>(walls.size()) != rho)
        fail(r, rel.label() + ": wall count " + std::to_string(walls.size()) + " != pairing " +
                    std::to_string(rho));
    }
    rows.push_back({{"group", rel.label()}, {"classes", checked}});
  }
  doc["wall_counts"] = rows;
  r.summary = "separating-wall count equals (2rho, mu) on all data, (2rho, mu) <= 12";
  return r;
}

// --- criterion 9: unitary index combinatorics ------------------------------

CritResult crit_unitary(json& doc) {
  CritResult r;
  json rows = json::array();
  for (int n = 4; n <= 8; ++n) {
    int m = n / 2;
    long long models = 0;
    for (int mask = 1; mask < (1 << (m + 1)); ++mask) {
      std::vector<int> I;
      for (int i = 0; i <= m; ++i)
        if (mask & (1 << i)) I.push_back(i);
      if (n % 2 == 0 && std::count(I.begin(), I.end(), m - 1) &&
          !std::count(I.begin(), I.end(), m))
        continue;  // not a valid chain
      UnitaryModel u = UnitaryModel::build(n, 1, n - 1, I);
      ++models;
      if (!u.kappa_identity_holds()) fail(r, "n=" + std::to_string(n) + ": kappa identity fails");
      for (long long a = 1; a <= 3; ++a)
        if (u.central_charge(a) != 2 * a * static_cast<long long>(I.size()))
          fail(r, "n=" + std::to_string(n) + ": charge != 2a|I|");
    }
    rows.push_back({{"n", n}, {"models", models}});
  }
  doc["unitary"] = rows;
  r.summary = "kappa-weighted labels are 2 node-wise and charges equal 2a|I|, n = 4..8";
  return r;
}

}  // namespace

static json run_grid(std::vector<CritResult>& results) {
  json doc;
  ScenePool scenes;
  auto step = [](const char* what) { std::fprintf(stderr, "[acceptance] %s\n", what); };
  step("labels");
  results.push_back(crit_labels(doc));
  step("lengths");
  results.push_back(crit_lengths(doc));
  step("bruhat");
  results.push_back(crit_bruhat(doc));
  step("grassmannian");
  results.push_back(crit_grassmannian(doc, scenes));
  step("product");
  results.push_back(crit_product(doc, scenes));
  step("factorization");
  results.push_back(crit_factorization(doc, scenes));
  step("word independence");
  results.push_back(crit_word_independence(doc));
  step("wall counts");
  results.push_back(crit_wall_count(doc));
  step("unitary");
  results.push_back(crit_unitary(doc));
  return doc;
}

static std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  pclose(p);
  return out;
}

int main(int argc, char** argv) {
  std::vector<CritResult> results;
  json first = run_grid(results);

  // Criterion 10: the grid rerun and a CLI double-invocation must serialize
  // to identical bytes.
  CritResult det;
  {
    std::vector<CritResult> ignore;
    json second = run_grid(ignore);
    if (first.dump(2) != second.dump(2)) fail(det, "grid transcripts differ between runs");
    if (argc > 1) {
      std::string cmd = std::string(argv[1]) +
                        " check-coherence --series A --rank 2 --twist-order 2"
                        " --mu 1 0 --facet 0 --levels 1 --mode grassmannian --json";
      std::string one = capture(cmd), two = capture(cmd);
      if (one.empty() || one != two) fail(det, "CLI output not byte-stable");
    }
    det.summary = argc > 1 ? "grid transcript and CLI output byte-identical across runs"
                           : "grid transcript byte-identical across runs (CLI path not given)";
  }
  results.push_back(det);

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CritResult& r = results[i];
    std::printf("criterion %2zu  %s  %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.summary.c_str());
    if (!r.pass) {
      ++failures;
      for (const auto& line : r.detail) std::printf("    %s\n", line.c_str());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures;
}
