// Command-line front end: group descriptions, admissible sets, Demazure
// dimensions, coherence checks, diagram label checks, and unitary model
// combinatorics.  Machine output is JSON with a stable field order; results
// can be cached on disk keyed by a content hash of the resolved job.
//
// Exit codes: 0 success, 1 budget exhausted, 2 configuration error,
// 3 identity mismatch in a check mode.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coherence/coherence.hpp"
#include "coherence/unitary.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace coherence;

static const char* kEngineVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Job description: config file merged with command-line flags (flags win).

struct Job {
  std::string series = "A";
  int rank = 1;
  int twist_order = 1;
  std::vector<int> twist_perm;  // explicit permutation; empty = derive from order

  IntVec mu;                            // absolute coweight, fcw coordinates
  std::vector<int> facet;               // affine nodes
  std::vector<std::pair<int, long long>> levels;  // node -> coefficient
  long long power = 1;
  std::string mode = "grassmannian";  // or "product"
  long long budget = 10000;
  std::string cache_dir;

  std::vector<int> word;  // demazure-dim

  int un_n = 0, un_r = -1, un_s = -1;  // unitary-model
  std::vector<int> un_I;
};

template <typename T>
static T get_typed(const json& j, const std::string& key, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' is not " + what);
  }
}

static void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
}

static void load_config(const std::string& path, Job& job) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(cfg,
                 {"group", "mu", "facet", "line_bundle", "power", "mode", "budget", "cache_dir",
                  "word", "unitary"},
                 "the config root");

  if (cfg.contains("group")) {
    const json& g = cfg["group"];
    if (!g.is_object()) throw ConfigError("'group' must be an object");
    reject_unknown(g, {"series", "rank", "twist_order", "twist_permutation"}, "'group'");
    if (g.contains("series")) job.series = get_typed<std::string>(g["series"], "series", "a string");
    if (g.contains("rank")) job.rank = get_typed<int>(g["rank"], "rank", "an integer");
    if (g.contains("twist_order"))
      job.twist_order = get_typed<int>(g["twist_order"], "twist_order", "an integer");
    if (g.contains("twist_permutation"))
      job.twist_perm =
          get_typed<std::vector<int>>(g["twist_permutation"], "twist_permutation", "an int array");
  }
  if (cfg.contains("mu")) job.mu = get_typed<IntVec>(cfg["mu"], "mu", "an int array");
  if (cfg.contains("facet"))
    job.facet = get_typed<std::vector<int>>(cfg["facet"], "facet", "an int array");
  if (cfg.contains("line_bundle")) {
    const json& lb = cfg["line_bundle"];
    if (!lb.is_object()) throw ConfigError("'line_bundle' must map nodes to coefficients");
    for (auto it = lb.begin(); it != lb.end(); ++it) {
      int node;
      try {
        size_t used = 0;
        node = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError("line_bundle key '" + it.key() + "' is not a node index");
      }
      job.levels.emplace_back(node, get_typed<long long>(it.value(), it.key(), "an integer"));
    }
  }
  if (cfg.contains("power")) job.power = get_typed<long long>(cfg["power"], "power", "an integer");
  if (cfg.contains("mode")) job.mode = get_typed<std::string>(cfg["mode"], "mode", "a string");
  if (cfg.contains("budget"))
    job.budget = get_typed<long long>(cfg["budget"], "budget", "an integer");
  if (cfg.contains("cache_dir"))
    job.cache_dir = get_typed<std::string>(cfg["cache_dir"], "cache_dir", "a string");
  if (cfg.contains("word"))
    job.word = get_typed<std::vector<int>>(cfg["word"], "word", "an int array");
  if (cfg.contains("unitary")) {
    const json& u = cfg["unitary"];
    if (!u.is_object()) throw ConfigError("'unitary' must be an object");
    reject_unknown(u, {"n", "r", "s", "I"}, "'unitary'");
    if (u.contains("n")) job.un_n = get_typed<int>(u["n"], "n", "an integer");
    if (u.contains("r")) job.un_r = get_typed<int>(u["r"], "r", "an integer");
    if (u.contains("s")) job.un_s = get_typed<int>(u["s"], "s", "an integer");
    if (u.contains("I")) job.un_I = get_typed<std::vector<int>>(u["I"], "I", "an int array");
  }
}

// Canonical JSON form of the resolved job, used for the cache key.
static json job_fingerprint(const std::string& command, const Job& job) {
  json fp;
  fp["engine_version"] = kEngineVersion;
  fp["command"] = command;
  fp["group"] = {{"series", job.series}, {"rank", job.rank}, {"twist_order", job.twist_order}};
  fp["group"]["twist_permutation"] = job.twist_perm;
  fp["mu"] = job.mu;
  fp["facet"] = job.facet;
  json lb = json::object();
  for (auto& [node, coeff] : job.levels) lb[std::to_string(node)] = coeff;
  fp["line_bundle"] = lb;
  fp["power"] = job.power;
  fp["mode"] = job.mode;
  fp["word"] = job.word;
  fp["unitary"] = {{"n", job.un_n}, {"r", job.un_r}, {"s", job.un_s}, {"I", job.un_I}};
  return fp;
}

// ---------------------------------------------------------------------------
// Result cache: content-addressed files with a payload checksum.

static std::string hash_hex(const std::string& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

static std::optional<std::string> cache_load(const fs::path& dir, const std::string& key) {
  std::ifstream in(dir / (key + ".json"));
  if (!in) return std::nullopt;
  json wrapper;
  try {
    in >> wrapper;
    if (!wrapper.is_object() || !wrapper.contains("checksum") || !wrapper.contains("payload"))
      return std::nullopt;
    std::string payload = wrapper["payload"].dump(2);
    if (wrapper["checksum"].get<std::string>() != hash_hex(payload)) return std::nullopt;
    return payload;
  } catch (const json::exception&) {
    return std::nullopt;  // corrupted cache entry: recompute
  }
}

static void cache_store(const fs::path& dir, const std::string& key, const std::string& payload) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;  // caching is best-effort
  json wrapper;
  wrapper["checksum"] = hash_hex(payload);
  wrapper["payload"] = json::parse(payload);
  fs::path tmp = dir / (key + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << wrapper.dump(2) << "\n";
  }
  fs::rename(tmp, dir / (key + ".json"), ec);
  if (ec) fs::remove(tmp, ec);
}

// ---------------------------------------------------------------------------
// Shared builders.

static RootDatum base_of(const Job& job) {
  try {
    if (job.series.size() != 1) throw std::invalid_argument("series must be one letter");
    return RootDatum::build(job.series[0], job.rank);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad group: ") + e.what());
  }
}

static DiagramTwist twist_of(const Job& job, const RootDatum& base) {
  try {
    if (!job.twist_perm.empty()) {
      // The order is implied by the permutation; an explicit order, if any,
      // must agree.
      if (static_cast<int>(job.twist_perm.size()) != base.rank)
        throw std::invalid_argument("twist permutation has the wrong length");
      for (int v : job.twist_perm)
        if (v < 0 || v >= base.rank)
          throw std::invalid_argument("twist permutation out of range");
      auto is_id = [&](const std::vector<int>& q) {
        for (int i = 0; i < base.rank; ++i)
          if (q[i] != i) return false;
        return true;
      };
      std::vector<int> cur = job.twist_perm;
      int ord = 1;
      while (!is_id(cur)) {
        std::vector<int> nxt(base.rank);
        for (int i = 0; i < base.rank; ++i) nxt[i] = job.twist_perm[cur[i]];
        cur = nxt;
        if (++ord > base.rank + 2) throw std::invalid_argument("twist permutation order too large");
      }
      if (job.twist_order != 1 && job.twist_order != ord)
        throw std::invalid_argument("twist_order disagrees with the permutation");
      DiagramTwist t{job.twist_perm, ord};
      t.validate(base);
      return t;
    }
    if (job.twist_order == 1) return DiagramTwist::identity(base.rank);
    return DiagramTwist::standard(job.series[0], base.rank, job.twist_order);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad twist: ") + e.what());
  }
}

static LineBundle bundle_of(const Job& job, const RelativeRootDatum& rel) {
  LineBundle L;
  if (!job.levels.empty()) {
    auto sorted = job.levels;
    std::sort(sorted.begin(), sorted.end());
    for (auto& [node, coeff] : sorted) {
      L.facet.push_back(node);
      L.levels.push_back(coeff);
    }
  } else {
    // Facet without explicit levels: the unit ample bundle on it.
    std::vector<int> facet = job.facet;
    std::sort(facet.begin(), facet.end());
    for (int node : facet) {
      L.facet.push_back(node);
      L.levels.push_back(1);
    }
  }
  try {
    L.validate(rel);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad line bundle: ") + e.what());
  }
  return L;
}

static std::vector<int> facet_of(const Job& job, const RelativeRootDatum& rel) {
  std::vector<int> facet = job.facet;
  if (facet.empty() && !job.levels.empty())
    for (auto& [node, coeff] : job.levels) facet.push_back(node);
  if (facet.empty())  // default: the full Iwahori facet
    for (int i = 0; i < rel.affine_nodes(); ++i) facet.push_back(i);
  std::sort(facet.begin(), facet.end());
  facet.erase(std::unique(facet.begin(), facet.end()), facet.end());
  for (int node : facet)
    if (node < 0 || node >= rel.affine_nodes()) throw ConfigError("facet node out of range");
  return facet;
}

static json tau_json(const IwahoriWeylGroup& W, const IWElement& tau) {
  json t;
  t["translation_class"] = tau.z;
  t["finite_index"] = tau.w;
  t["trivial"] = tau == W.identity();
  return t;
}

// ---------------------------------------------------------------------------
// Commands.

static json run_describe(const Job& job) {
  RootDatum base = base_of(job);
  RelativeRootDatum rel = RelativeRootDatum::fold(base, twist_of(job, base));
  json out;
  out["group"] = rel.label();
  out["series"] = job.series;
  out["rank"] = job.rank;
  out["twist_order"] = job.twist_order;
  out["affine_nodes"] = rel.affine_nodes();
  out["affine_cartan"] = rel.affine_cartan;
  out["marks"] = rel.marks;
  out["dual_marks"] = rel.dual_marks;
  long long sum = 0, dsum = 0;
  for (auto v : rel.marks) sum += v;
  for (auto v : rel.dual_marks) dsum += v;
  out["mark_sum"] = sum;
  out["dual_mark_sum"] = dsum;
  out["base_dual_coxeter"] = base.dual_coxeter_number;
  std::vector<int> specials;
  for (int i = 0; i < rel.affine_nodes(); ++i)
    if (rel.special_node[i]) specials.push_back(i);
  out["special_nodes"] = specials;
  auto snf = smith_normal_form(rel.sc_to_ad_free);
  Int det = 1;
  for (const auto& d : snf.diag) det *= d;
  out["component_group_order"] = det.convert_to<long long>();
  return out;
}

static json run_check_labels(const Job& job) {
  json out = run_describe(job);
  out["match"] = (out["dual_mark_sum"] == out["base_dual_coxeter"]);
  return out;
}

static json run_adm(const Job& job) {
  RootDatum base = base_of(job);
  RelativeRootDatum rel = RelativeRootDatum::fold(base, twist_of(job, base));
  IwahoriWeylGroup W(rel, LatticeKind::Adjoint);
  if (job.mu.empty()) throw ConfigError("adm requires mu");
  if (static_cast<int>(job.mu.size()) != base.rank)
    throw ConfigError("mu must have one coordinate per base node");
  IntVec cls = W.dominant_class(rel.co_ad.project(job.mu));
  std::vector<int> facet = facet_of(job, rel);
  AdmissibleSet adm = AdmissibleSet::build(W, cls, facet);
  json out;
  out["group"] = rel.label();
  out["mu"] = job.mu;
  out["mu_class"] = cls;
  out["facet"] = facet;
  out["tau"] = tau_json(W, W.tau_of_translation(cls));
  json words = json::array();
  for (const auto& m : adm.maxima) words.push_back(word_string(W, m));
  out["maxima"] = words;
  out["maxima_count"] = adm.maxima.size();
  out["cardinality"] = static_cast<long long>(adm.cardinality());
  return out;
}

static json run_demazure_dim(const Job& job) {
  RootDatum base = base_of(job);
  RelativeRootDatum rel_owned = RelativeRootDatum::fold(base, twist_of(job, base));
  IwahoriWeylGroup W(rel_owned, LatticeKind::SimplyConnected);
  for (int i : job.word)
    if (i < 0 || i >= rel_owned.affine_nodes()) throw ConfigError("word letter out of range");
  IWElement g = W.identity();
  for (int i : job.word) g = W.mult(g, W.simple[i]);
  if (W.length(g) != static_cast<long long>(job.word.size()))
    throw ConfigError("word is not reduced");
  LineBundle L = bundle_of(job, rel_owned);
  DemazureEngine engine(W, std::max<long long>(job.budget * 100, 1));
  Int dim = engine.section_dim_word(job.word, L.highest_weight_c(rel_owned));
  json out;
  out["group"] = rel_owned.label();
  out["word"] = job.word;
  out["element"] = word_string(W, g);
  out["facet"] = L.facet;
  out["levels"] = L.levels;
  out["lambda"] = L.highest_weight_c(rel_owned);
  out["dim"] = dim.str();
  return out;
}

static json run_check_coherence(const Job& job) {
  RootDatum base = base_of(job);
  CoherenceOptions opt;
  opt.subproblem_budget = job.budget;
  opt.demazure_budget = std::max<long long>(job.budget * 100, 1);
  CoherenceScene scene(base, twist_of(job, base), opt);
  if (job.mu.empty()) throw ConfigError("check-coherence requires mu");
  if (static_cast<int>(job.mu.size()) != base.rank)
    throw ConfigError("mu must have one coordinate per base node");
  LineBundle L = bundle_of(job, scene.rel);
  if (job.power < 1) throw ConfigError("power must be positive");

  json out;
  out["group"] = scene.rel.label();
  out["mode"] = job.mode;
  out["mu"] = job.mu;
  out["facet"] = L.facet;
  out["levels"] = L.levels;
  out["power"] = job.power;
  if (job.mode == "product") {
    auto rep = scene.check_product_identity(job.mu, L, job.power);
    if (!rep.applicable)
      throw ConfigError("mu is not a sum of minuscule fundamental coweights");
    out["central_charge"] = rep.charge;
    out["decomposition_nodes"] = rep.decomposition_nodes;
    out["lhs"] = rep.lhs.str();
    out["rhs"] = rep.rhs.str();
    out["lhs_antichain"] = rep.lhs_antichain;
    out["match"] = rep.ok;
  } else if (job.mode == "grassmannian") {
    auto rep = scene.check_grassmannian_identity(job.mu, L.power(job.power));
    out["central_charge"] = rep.charge;
    out["mu_class"] = rep.mu_rel_class;
    out["facet_left"] = rep.facet_left;
    out["lhs"] = rep.lhs.str();
    out["rhs"] = rep.rhs.str();
    out["lhs_antichain"] = rep.lhs_antichain;
    out["rhs_antichain"] = rep.rhs_antichain;
    out["match"] = rep.ok;
  } else {
    throw ConfigError("mode must be 'product' or 'grassmannian'");
  }
  return out;
}

static json run_unitary_model(const Job& job) {
  if (job.un_n == 0) throw ConfigError("unitary-model requires n, r, s, I");
  UnitaryModel u;
  try {
    u = UnitaryModel::build(job.un_n, job.un_r, job.un_s, job.un_I);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad unitary model: ") + e.what());
  }
  if (job.power < 1) throw ConfigError("power must be positive");
  json out;
  out["n"] = u.n;
  out["r"] = u.r;
  out["s"] = u.s;
  out["m"] = u.m;
  out["I"] = u.I;
  out["group"] = u.datum.label();
  json yj = json::array();
  for (std::size_t k = 0; k < u.facet.size(); ++k)
    yj.push_back({{"vertex", u.label_name(u.facet_labels[k])}, {"node", u.facet[k]}});
  out["Y"] = yj;
  json kj = json::object();
  for (std::size_t k = 0; k < u.facet.size(); ++k)
    kj[u.label_name(u.facet_labels[k])] = u.kappa(u.facet_labels[k]);
  out["kappa"] = kj;
  out["power"] = job.power;
  out["central_charge"] = u.central_charge(job.power);
  out["bundle_levels"] = u.bundle_levels(job.power);
  out["kappa_identity"] = u.kappa_identity_holds();
  json relab = json::array();
  for (int label = 0; label <= (u.even ? u.prime_label() : u.m); ++label) {
    if (u.even && label == u.m - 1) continue;
    int kac = u.even ? (label == u.m ? 0 : label == u.prime_label() ? 1 : u.m - label)
                     : u.m - label;
    relab.push_back({{"vertex", u.label_name(label)},
                     {"node", u.label_to_node[label]},
                     {"kac_label", kac}});
  }
  out["relabeling"] = relab;
  json sp = json::array();
  for (int label : u.special_parahoric_labels()) sp.push_back(u.label_name(label));
  out["special_parahorics"] = sp;
  out["mu_signature"] = UnitaryModel::mu_signature(u.n, u.r, u.s);
  return out;
}

// ---------------------------------------------------------------------------
// Human-readable rendering: flat key/value lines, nested values as JSON.

static void render_text(const json& payload) {
  std::size_t width = 0;
  for (auto it = payload.begin(); it != payload.end(); ++it)
    width = std::max(width, it.key().size());
  for (auto it = payload.begin(); it != payload.end(); ++it) {
    std::string val =
        it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    std::printf("%-*s  %s\n", static_cast<int>(width), it.key().c_str(), val.c_str());
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Exact combinatorics of affine flag varieties: admissible sets, "
               "Demazure dimensions, and coherence checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand name

  std::string config_path, cache_flag, mode_flag;
  bool json_out = false;
  long long budget_flag = -1;
  int threads = 1;
  app.add_option("--config", config_path, "JSON job description");
  app.add_flag("--json", json_out, "machine-readable JSON output");
  app.add_option("--budget", budget_flag, "subproblem budget for checks");
  app.add_option("--cache", cache_flag, "result cache directory");
  app.add_option("--threads", threads, "reserved; engines are single-threaded")
      ->check(CLI::PositiveNumber);

  Job flags;
  std::vector<long long> level_flags;
  bool have_series = false, have_rank = false, have_order = false, have_power = false;
  auto add_group_opts = [&](CLI::App* cmd) {
    cmd->add_option("--series", flags.series, "base series letter (A..G)")
        ->each([&](const std::string&) { have_series = true; });
    cmd->add_option("--rank", flags.rank, "base rank")
        ->each([&](const std::string&) { have_rank = true; });
    cmd->add_option("--twist-order", flags.twist_order, "diagram twist order (1 = split)")
        ->each([&](const std::string&) { have_order = true; });
    cmd->add_option("--twist-perm", flags.twist_perm, "explicit node permutation");
  };

  auto* c_desc = app.add_subcommand("describe-group", "diagram, labels, special vertices");
  add_group_opts(c_desc);
  auto* c_labels = app.add_subcommand("check-labels", "verify dual labels sum to h-dual");
  add_group_opts(c_labels);
  auto* c_adm = app.add_subcommand("adm", "admissible set: maxima, cardinality, tau");
  add_group_opts(c_adm);
  c_adm->add_option("--mu", flags.mu, "absolute coweight (fundamental coordinates)");
  c_adm->add_option("--facet", flags.facet, "facet nodes (default: all)");
  auto* c_dem = app.add_subcommand("demazure-dim", "section dimension from a reduced word");
  add_group_opts(c_dem);
  c_dem->add_option("--word", flags.word, "reduced word (affine node indices)");
  c_dem->add_option("--facet", flags.facet, "facet nodes");
  c_dem->add_option("--levels", level_flags, "bundle levels along --facet");
  auto* c_coh = app.add_subcommand("check-coherence", "compare union and reference dimensions");
  add_group_opts(c_coh);
  c_coh->add_option("--mu", flags.mu, "absolute coweight (fundamental coordinates)");
  c_coh->add_option("--facet", flags.facet, "facet nodes");
  c_coh->add_option("--levels", level_flags, "bundle levels along --facet");
  c_coh->add_option("--mode", mode_flag, "product | grassmannian");
  c_coh->add_option("--power", flags.power, "bundle power")
      ->each([&](const std::string&) { have_power = true; });
  auto* c_uni = app.add_subcommand("unitary-model", "index combinatorics of a unitary model");
  c_uni->add_option("--n", flags.un_n, "hermitian space dimension");
  c_uni->add_option("--r", flags.un_r, "signature r");
  c_uni->add_option("--s", flags.un_s, "signature s");
  c_uni->add_option("--I", flags.un_I, "lattice-chain index set");
  c_uni->add_option("--power", flags.power, "determinant power a")
      ->each([&](const std::string&) { have_power = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    Job job;
    if (!config_path.empty()) load_config(config_path, job);

    // Flags override the config file.
    if (have_series) job.series = flags.series;
    if (have_rank) job.rank = flags.rank;
    if (have_order) job.twist_order = flags.twist_order;
    if (!flags.twist_perm.empty()) job.twist_perm = flags.twist_perm;
    if (!flags.mu.empty()) job.mu = flags.mu;
    if (!flags.facet.empty()) job.facet = flags.facet;
    if (!level_flags.empty()) {
      if (flags.facet.empty() && job.facet.empty())
        throw ConfigError("--levels needs --facet (or a config facet)");
      std::vector<int> nodes = flags.facet.empty() ? job.facet : flags.facet;
      if (nodes.size() != level_flags.size())
        throw ConfigError("--levels must match --facet in length");
      job.levels.clear();
      for (std::size_t k = 0; k < nodes.size(); ++k)
        job.levels.emplace_back(nodes[k], level_flags[k]);
    }
    if (have_power) job.power = flags.power;
    if (!mode_flag.empty()) job.mode = mode_flag;
    if (budget_flag >= 0) job.budget = budget_flag;
    if (!flags.word.empty()) job.word = flags.word;
    if (flags.un_n) job.un_n = flags.un_n;
    if (flags.un_r >= 0) job.un_r = flags.un_r;
    if (flags.un_s >= 0) job.un_s = flags.un_s;
    if (!flags.un_I.empty()) job.un_I = flags.un_I;
    if (job.budget < 1) throw ConfigError("budget must be positive");

    std::string command = app.get_subcommands().front()->get_name();

    // Cache directory: the flag wins, then the environment override, then
    // the config file.
    std::string cache_dir = cache_flag;
    if (cache_dir.empty())
      if (const char* env = std::getenv("COHERENCE_CACHE")) cache_dir = env;
    if (cache_dir.empty()) cache_dir = job.cache_dir;

    std::string key = hash_hex(job_fingerprint(command, job).dump());
    std::optional<std::string> payload_str;
    if (!cache_dir.empty()) payload_str = cache_load(cache_dir, key);

    if (!payload_str) {
      json payload;
      if (command == "describe-group") payload = run_describe(job);
      else if (command == "check-labels") payload = run_check_labels(job);
      else if (command == "adm") payload = run_adm(job);
      else if (command == "demazure-dim") payload = run_demazure_dim(job);
      else if (command == "check-coherence") payload = run_check_coherence(job);
      else payload = run_unitary_model(job);
      payload_str = payload.dump(2);
      if (!cache_dir.empty()) cache_store(cache_dir, key, *payload_str);
    }

    json payload = json::parse(*payload_str);
    bool mismatch = payload.contains("match") && payload["match"].is_boolean() &&
                    !payload["match"].get<bool>();

    if (json_out)
      std::printf("%s\n", payload_str->c_str());
    else
      render_text(payload);
    return mismatch ? 3 : 0;
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}
