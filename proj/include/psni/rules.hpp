#pragma once

#include "psni/dyadic.hpp"

#include <algorithm>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// The catalog of nonimmersion theorems as deterministic fact generators,
// plus the D(n)/K(n) closure functions and first-source attribution.
//
// A fact (n, k) states that real projective n-space does not immerse in
// R^k. Nonimmersion is monotone: a fact for P^N propagates to every P^n
// with n >= N, and D/K are defined through that closure.

namespace psni::rules {

using dyadic::alpha;
using dyadic::p_pow;

struct NonimmersionFact {
  long long n = 0;
  long long k = 0;
  std::string rule_id;
  std::map<std::string, long long> params;

  bool operator==(const NonimmersionFact& o) const { return n == o.n && k == o.k && rule_id == o.rule_id; }
};

struct Rule {
  std::string rule_id;
  std::string source;          // citation label
  int precedence_rank = 0;     // lower = earlier acknowledged source
  std::function<std::vector<NonimmersionFact>(long long n_max)> generator;
};

// Lowest two set-bit positions e0 < e1 of M; the theorem hypothesis is
// h <= 2^{e1} - 2^{e0}.
inline bool check_13_hypothesis(long long M, long long h) {
  if (M < 1 || h < 1) throw std::invalid_argument("check_13_hypothesis: need M,h >= 1");
  if (alpha(M) < 2) throw std::invalid_argument("check_13_hypothesis: need alpha(M) >= 2");
  int e0 = dyadic::nu(M);
  int e1 = dyadic::nu(M & (M - 1));
  return h <= (1LL << e1) - (1LL << e0);
}

namespace detail {

inline NonimmersionFact fact(long long n, long long k, const std::string& id,
                             std::map<std::string, long long> params) {
  return NonimmersionFact{n, k, id, std::move(params)};
}

// Vacuous claims (k <= n) are dropped; these theorems only say something
// when the Euclidean dimension exceeds the projective one.
inline void push(std::vector<NonimmersionFact>& out, long long n_max, NonimmersionFact f) {
  if (f.n <= n_max && f.k > f.n) out.push_back(std::move(f));
}

}  // namespace detail

// The encoded catalog. Precedence follows acknowledgment order; further
// rules (the ER(2)- and earlier tmf-based families, not encoded here) can
// be appended with the same generator contract.
inline std::vector<Rule> default_catalog() {
  using detail::push;
  std::vector<Rule> cat;
  int rank = 0;

  cat.push_back({"R-James", "James", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    static constexpr int kC[4] = {3, 2, 2, 4};
    for (long long e = 4; (1LL << e) - 1 <= n_max; ++e)
      push(out, n_max, detail::fact((1LL << e) - 1, (1LL << (e + 1)) - 2 * e - kC[e % 4], "R-James", {{"e", e}}));
    return out;
  }});

  cat.push_back({"R-Ann", "annihilated Chern/obstruction bound", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    for (long long m = 1; 2 * (m + alpha(m) - 1) <= n_max; ++m)
      push(out, n_max, detail::fact(2 * (m + alpha(m) - 1), 4 * m - 2 * alpha(m), "R-Ann", {{"m", m}}));
    return out;
  }});

  cat.push_back({"R-DZ", "modified Postnikov towers", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    for (long long n = 10; n <= n_max; n += 16)
      if (alpha(n) == 4) push(out, n_max, detail::fact(n, 2 * n - 9, "R-DZ", {{"n", n}}));
    return out;
  }});

  struct Tmpl11 {
    const char* id;
    int alpha_req;
    long long cn1, cn0;  // first statement n = cn1*M + cn0
    long long ck1, ck0;  //                 k = ck1*M + ck0
    bool two_statements;
  };
  static constexpr Tmpl11 kTmpl11[] = {
      {"R-1.1a", 3, 8, 9, 16, -1, false},
      {"R-1.1b", 6, 8, 9, 16, -11, false},
      {"R-1.1c", 7, 16, 16, 32, -7, true},
      {"R-1.1d", 9, 32, 25, 64, -4, true},
      {"R-1.1e", 10, 16, 17, 32, -20, true},
  };
  for (const auto& t : kTmpl11) {
    cat.push_back({t.id, "tmf obstruction", rank++, [t](long long n_max) {
      std::vector<NonimmersionFact> out;
      for (long long M = 1; t.cn1 * M + t.cn0 <= n_max; ++M) {
        if (alpha(M) != t.alpha_req) continue;
        push(out, n_max, detail::fact(t.cn1 * M + t.cn0, t.ck1 * M + t.ck0, t.id, {{"M", M}}));
        if (t.two_statements)
          push(out, n_max, detail::fact(t.cn1 * M + t.cn0 + 1, t.ck1 * M + t.ck0 + 1, t.id, {{"M", M}}));
      }
      return out;
    }});
  }

  cat.push_back({"R-1.3be", "tmf obstruction, general tower height", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    for (long long h = 1; 8 * ((1LL << (4 * h + 2)) - 1) + 8 * h + 1 <= n_max; ++h) {
      for (long long M = 1; 8 * M + 8 * h + 1 <= n_max; ++M) {
        if (alpha(M) != 4 * h + 2 || !check_13_hypothesis(M, h)) continue;
        if (h % 2 == 1) {
          detail::push(out, n_max, detail::fact(8 * M + 8 * h + 1, 16 * M - 8 * h - 3, "R-1.3be", {{"M", M}, {"h", h}}));
        } else {
          detail::push(out, n_max, detail::fact(8 * M + 8 * h + 1, 16 * M - 8 * h - 4, "R-1.3be", {{"M", M}, {"h", h}}));
          detail::push(out, n_max, detail::fact(8 * M + 8 * h + 2, 16 * M - 8 * h - 3, "R-1.3be", {{"M", M}, {"h", h}}));
        }
      }
    }
    return out;
  }});

  cat.push_back({"R-1.3c", "tmf obstruction, general tower height", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    for (long long h = 1; 8 * ((1LL << (4 * h + 3)) - 1) + 8 * h + 8 <= n_max; h += 2) {
      long long p = p_pow(h + 1);
      for (long long M = p; 8 * M + 8 * h + 8 <= n_max; M += p) {
        if (alpha(M) != 4 * h + 3) continue;
        detail::push(out, n_max, detail::fact(8 * M + 8 * h + 8, 16 * M - 8 * h + 1, "R-1.3c", {{"M", M}, {"h", h}}));
        detail::push(out, n_max, detail::fact(8 * M + 8 * h + 9, 16 * M - 8 * h + 2, "R-1.3c", {{"M", M}, {"h", h}}));
      }
    }
    return out;
  }});

  cat.push_back({"R-1.3d", "tmf obstruction, general tower height", rank++, [](long long n_max) {
    std::vector<NonimmersionFact> out;
    for (long long h = 2; 8 * ((1LL << (4 * h + 1)) - 1) + 8 * h + 9 <= n_max; h += 2) {
      long long p = p_pow(h + 1);
      for (long long M = p; 8 * M + 8 * h + 9 <= n_max; M += p) {
        if (alpha(M) != 4 * h + 1) continue;
        detail::push(out, n_max, detail::fact(8 * M + 8 * h + 9, 16 * M - 8 * h + 12, "R-1.3d", {{"M", M}, {"h", h}}));
        detail::push(out, n_max, detail::fact(8 * M + 8 * h + 10, 16 * M - 8 * h + 13, "R-1.3d", {{"M", M}, {"h", h}}));
      }
    }
    return out;
  }});

  return cat;
}

inline const Rule& find_rule(const std::vector<Rule>& catalog, const std::string& rule_id) {
  for (const auto& r : catalog)
    if (r.rule_id == rule_id) return r;
  throw std::invalid_argument("unknown rule_id: " + rule_id);
}

inline std::vector<NonimmersionFact> rule_facts(const Rule& rule, long long n_max) {
  if (n_max < 8) throw std::invalid_argument("rule_facts: need n_max >= 8");
  return rule.generator(n_max);
}

// Which rules run and in which first-source order.
struct RuleConfig {
  std::set<std::string> enabled;
  std::vector<std::string> precedence;

  static RuleConfig defaults(const std::vector<Rule>& catalog) {
    RuleConfig c;
    std::vector<const Rule*> sorted;
    for (const auto& r : catalog) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const Rule* a, const Rule* b) { return a->precedence_rank < b->precedence_rank; });
    for (const Rule* r : sorted) {
      c.enabled.insert(r->rule_id);
      c.precedence.push_back(r->rule_id);
    }
    return c;
  }

  void check(const std::vector<Rule>& catalog) const {
    for (const auto& id : enabled) find_rule(catalog, id);
    std::set<std::string> seen;
    for (const auto& id : precedence) {
      find_rule(catalog, id);
      if (!seen.insert(id).second)
        throw std::invalid_argument("config: rule listed twice in precedence: " + id);
    }
    for (const auto& id : enabled)
      if (!seen.count(id))
        throw std::invalid_argument("config: enabled rule missing from precedence: " + id);
  }
};

// Line-oriented key=value config: enable.<rule_id>=true|false and
// precedence=<comma-separated rule ids>. Unlisted rules keep defaults.
inline RuleConfig parse_config(std::istream& in, const std::vector<Rule>& catalog) {
  RuleConfig cfg = RuleConfig::defaults(catalog);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t;
    for (char ch : line)
      if (!isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value: " + line);
    std::string key = t.substr(0, eq), val = t.substr(eq + 1);
    if (key.rfind("enable.", 0) == 0) {
      std::string id = key.substr(7);
      find_rule(catalog, id);
      if (val == "true")
        cfg.enabled.insert(id);
      else if (val == "false")
        cfg.enabled.erase(id);
      else
        throw std::invalid_argument("config: enable value must be true|false: " + line);
    } else if (key == "precedence") {
      cfg.precedence.clear();
      std::stringstream ss(val);
      std::string id;
      while (std::getline(ss, id, ','))
        if (!id.empty()) cfg.precedence.push_back(id);
    } else {
      throw std::invalid_argument("config: unknown key: " + key);
    }
  }
  // Keep invariant: precedence covers exactly the enabled rules it mentions
  // plus any enabled rules in default order.
  std::vector<std::string> prec;
  for (const auto& id : cfg.precedence)
    if (cfg.enabled.count(id)) prec.push_back(id);
  for (const auto& id : RuleConfig::defaults(catalog).precedence)
    if (cfg.enabled.count(id) && std::find(prec.begin(), prec.end(), id) == prec.end()) prec.push_back(id);
  cfg.precedence = std::move(prec);
  cfg.check(catalog);
  return cfg;
}

inline RuleConfig load_config(const std::string& path, const std::vector<Rule>& catalog) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, catalog);
}

// D(n): the best dimension obtainable from the R-Ann family under monotone
// closure. Table form, so the tabulator can ask for every n at once.
class DTable {
 public:
  explicit DTable(long long n_max) : d_(static_cast<std::size_t>(n_max) + 1, 0) {
    for (long long m = 1; 2 * (m + alpha(m) - 1) <= n_max; ++m) {
      long long N = 2 * (m + alpha(m) - 1);
      d_[static_cast<std::size_t>(N)] = std::max(d_[static_cast<std::size_t>(N)], 4 * m - 2 * alpha(m));
    }
    long long cur = 0;
    for (auto& v : d_) {
      cur = std::max(cur, v);
      v = cur;
    }
  }

  long long operator()(long long n) const {
    if (n < 2 || n >= static_cast<long long>(d_.size()))
      throw std::out_of_range("DTable: n out of range");
    return d_[static_cast<std::size_t>(n)];
  }

  long long n_max() const { return static_cast<long long>(d_.size()) - 1; }

 private:
  std::vector<long long> d_;
};

inline long long D_of(long long n) {
  if (n < 2) throw std::invalid_argument("D_of: need n >= 2");
  return DTable(n)(n);
}

// Prefix-maximized facts of every enabled rule up to n_max; answers K(n)
// and first-source queries.
class FactIndex {
 public:
  FactIndex(const std::vector<Rule>& catalog, const RuleConfig& config, long long n_max)
      : n_max_(n_max) {
    config.check(catalog);
    for (const auto& id : config.precedence) {
      const Rule& r = find_rule(catalog, id);
      std::vector<long long> best(static_cast<std::size_t>(n_max) + 1, 0);
      auto facts = rule_facts(r, n_max);
      for (const auto& f : facts)
        best[static_cast<std::size_t>(f.n)] = std::max(best[static_cast<std::size_t>(f.n)], f.k);
      long long cur = 0;
      for (auto& v : best) {
        cur = std::max(cur, v);
        v = cur;
      }
      ids_.push_back(id);
      closed_.push_back(std::move(best));
      facts_.push_back(std::move(facts));
    }
  }

  long long n_max() const { return n_max_; }
  const std::vector<std::string>& rule_ids() const { return ids_; }

  const std::vector<NonimmersionFact>& facts_of(const std::string& rule_id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (ids_[i] == rule_id) return facts_[i];
    throw std::invalid_argument("rule not in index: " + rule_id);
  }

  long long K(long long n) const {
    check_n(n);
    long long k = 0;
    for (const auto& c : closed_) k = std::max(k, c[static_cast<std::size_t>(n)]);
    return k;
  }

  // (k, rule_id): best k and the earliest-precedence rule achieving it.
  std::pair<long long, std::string> best_row(long long n) const {
    check_n(n);
    long long k = K(n);
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (closed_[i][static_cast<std::size_t>(n)] == k) return {k, ids_[i]};
    throw std::logic_error("best_row: no achieving rule");
  }

 private:
  void check_n(long long n) const {
    if (n < 8 || n > n_max_) throw std::out_of_range("FactIndex: n out of range");
  }

  long long n_max_;
  std::vector<std::string> ids_;                       // precedence order
  std::vector<std::vector<long long>> closed_;         // per rule, prefix max k
  std::vector<std::vector<NonimmersionFact>> facts_;   // per rule, raw facts
};

inline long long K_of(long long n, const std::vector<Rule>& catalog, const RuleConfig& config) {
  if (n < 8) throw std::invalid_argument("K_of: need n >= 8");
  return FactIndex(catalog, config, n).K(n);
}

}  // namespace psni::rules
