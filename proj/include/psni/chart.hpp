#pragma once

#include "psni/dyadic.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Finite abelian 2-group presentations transcribed from Adams spectral
// sequence chart pictures. A chart portion is a set of towers (cyclic
// 2-power summands over the filtration-0 monomials) plus h0-extension
// merges into continuation towers. Multiplication by 2 raises filtration
// by 1 along a tower; at the top of a merged tower it lands in the sum of
// the continuation generators the tower is drawn into.
//
// Element arithmetic (zero tests, filtration of an element, nonzero
// filtration queries) is exact integer lattice membership, decided by
// fraction-free triangularization of the relation lattice.

namespace psni::chart {

using dyadic::BigInt;
using dyadic::Valuation;

struct ChartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownChartError : ChartError {
  using ChartError::ChartError;
};
struct ChartParseError : ChartError {
  using ChartError::ChartError;
};

struct Tower {
  int offset = 0;     // X1-exponent relative to the center monomial
  int filt_base = 0;  // lowest filtration of the tower
  int height = 1;     // elements in filtrations filt_base .. filt_base+height-1

  bool operator==(const Tower&) const = default;
};

// A member reference is a tower offset {o} or, for merges of merges, the
// sorted offsets identifying an earlier merge (written o1/o2 in the file).
using MemberRef = std::vector<int>;

struct Merge {
  int filt = 0;  // filtration where the members' tops come together
  std::vector<MemberRef> members;
  int height = 1;  // height of the continuation tower

  // Flattened identity used when a later merge references this one.
  MemberRef key() const {
    MemberRef k;
    for (const auto& m : members) k.insert(k.end(), m.begin(), m.end());
    std::sort(k.begin(), k.end());
    return k;
  }

  bool operator==(const Merge&) const = default;
};

// Assertion that 2^filt * (sum of the member towers) lies strictly above
// the stated filtration. Checked against the presentation, never added to it.
struct Vanish {
  int filt = 0;
  std::vector<int> members;

  bool operator==(const Vanish&) const = default;
};

namespace detail {

// v is a member of the integer row span of `rows`. Both are consumed.
inline bool lattice_contains(std::vector<std::vector<BigInt>> rows, std::vector<BigInt> v) {
  const std::size_t n = v.size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    // gcd-eliminate column `col` among rows[r..] down to a single pivot
    while (true) {
      std::size_t best = r;
      bool found = false;
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (!found || abs(rows[i][col]) < abs(rows[best][col])) { best = i; found = true; }
      }
      if (!found) break;
      std::swap(rows[r], rows[best]);
      bool others = false;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        BigInt q = rows[i][col] / rows[r][col];
        for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) others = true;
      }
      if (!others) break;
    }
    if (rows[r][col] != 0) {
      if (v[col] % rows[r][col] != 0) return false;
      BigInt q = v[col] / rows[r][col];
      for (std::size_t j = col; j < n; ++j) v[j] -= q * rows[r][j];
      ++r;
    } else if (v[col] != 0) {
      return false;
    }
  }
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace detail

// The derived presentation: free abelian group on towers and continuation
// generators, modulo tower orders and merge relations.
class Presentation {
 public:
  struct Generator {
    std::string name;
    int filt_base = 0;
    int height = 1;
  };

  Presentation(const std::vector<Tower>& towers, const std::vector<Merge>& merges) {
    for (const auto& t : towers) {
      if (t.height < 1) throw ChartError("tower height must be positive");
      if (tower_index_.count(t.offset)) throw ChartError("duplicate tower offset");
      tower_index_[t.offset] = static_cast<int>(gens_.size());
      gens_.push_back({"g" + std::to_string(t.offset), t.filt_base, t.height});
    }
    std::vector<MemberRef> keys;
    std::vector<int> merge_gen;
    for (const auto& m : merges) {
      merge_gen.push_back(static_cast<int>(gens_.size()));
      keys.push_back(m.key());
      gens_.push_back({"c" + ref_name(m.key()), m.filt, m.height});
    }
    // One relation per generator: 2^height * g = sum of the continuations
    // of every merge listing g as a member.
    const std::size_t n = gens_.size();
    for (std::size_t gi = 0; gi < n; ++gi) {
      std::vector<BigInt> row(n, 0);
      row[gi] = BigInt(1) << gens_[gi].height;
      for (std::size_t mi = 0; mi < merges.size(); ++mi) {
        for (const auto& ref : merges[mi].members) {
          int idx = resolve(ref, keys, merge_gen);
          if (idx != static_cast<int>(gi)) continue;
          if (merges[mi].filt != gens_[gi].filt_base + gens_[gi].height)
            throw ChartError("merge at filtration " + std::to_string(merges[mi].filt) +
                             " does not attach to the top of " + gens_[gi].name);
          row[static_cast<std::size_t>(merge_gen[mi])] -= 1;
        }
      }
      relations_.push_back(std::move(row));
    }
    max_filt_ = 0;
    for (const auto& g : gens_) max_filt_ = std::max(max_filt_, g.filt_base + g.height - 1);
  }

  std::size_t size() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  int max_filtration() const { return max_filt_; }
  bool has_tower(int offset) const { return tower_index_.count(offset) != 0; }

  // Element with a single coordinate 2^e on the tower at `offset`.
  std::vector<BigInt> tower_multiple(int offset, long long e) const {
    std::vector<BigInt> v(gens_.size(), 0);
    v[static_cast<std::size_t>(tower_index_.at(offset))] = BigInt(1) << e;
    return v;
  }

  bool is_zero(const std::vector<BigInt>& elem) const {
    return detail::lattice_contains(relations_, elem);
  }

  // elem lies in the subgroup generated by everything of filtration >= f.
  bool in_filtration_ge(const std::vector<BigInt>& elem, int f) const {
    auto rows = relations_;
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      std::vector<BigInt> row(gens_.size(), 0);
      int e = std::max(0, f - gens_[gi].filt_base);
      row[gi] = BigInt(1) << e;
      rows.push_back(std::move(row));
    }
    return detail::lattice_contains(std::move(rows), elem);
  }

  // Largest f with elem in the filtration->=f subgroup; nullopt for zero.
  std::optional<int> filtration_of(const std::vector<BigInt>& elem) const {
    if (is_zero(elem)) return std::nullopt;
    int f = 0;
    while (f <= max_filt_ && in_filtration_ge(elem, f + 1)) ++f;
    return f;
  }

  // elem is invisible at filtration <= f (it lies strictly above f).
  bool zero_through_filtration(const std::vector<BigInt>& elem, int f) const {
    return in_filtration_ge(elem, f + 1);
  }

  // The group has a nonzero element of filtration exactly f.
  bool nonzero_in_filtration(int f) const {
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      std::vector<BigInt> v(gens_.size(), 0);
      v[gi] = BigInt(1) << std::max(0, f - gens_[gi].filt_base);
      if (!in_filtration_ge(v, f + 1)) return true;
    }
    return false;
  }

  // Every quotient invariant is a finite 2-power (sanity check on the data).
  bool presents_finite_2_group() const {
    auto rows = relations_;
    const std::size_t n = gens_.size();
    std::size_t r = 0;
    BigInt det = 1;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = rows.size();
      for (std::size_t pass = 0;; ++pass) {
        piv = rows.size();
        for (std::size_t i = r; i < rows.size(); ++i)
          if (rows[i][col] != 0 && (piv == rows.size() || abs(rows[i][col]) < abs(rows[piv][col]))) piv = i;
        if (piv == rows.size()) return false;  // rank deficient: infinite quotient
        std::swap(rows[r], rows[piv]);
        bool others = false;
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          BigInt q = rows[i][col] / rows[r][col];
          for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[r][j];
          if (rows[i][col] != 0) others = true;
        }
        if (!others) break;
        (void)pass;
      }
      det *= rows[r][col];
      ++r;
    }
    if (det < 0) det = -det;
    while (det > 1 && det % 2 == 0) det /= 2;
    return det == 1;
  }

 private:
  static std::string ref_name(const MemberRef& ref) {
    std::string s;
    for (int x : ref) s += "_" + std::to_string(x);
    return s;
  }

  int resolve(const MemberRef& ref, const std::vector<MemberRef>& keys,
              const std::vector<int>& merge_gen) const {
    if (ref.size() == 1) {
      auto it = tower_index_.find(ref[0]);
      if (it == tower_index_.end()) throw ChartError("merge member references unknown tower");
      return it->second;
    }
    MemberRef sorted = ref;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == sorted) return merge_gen[i];
    throw ChartError("merge member references unknown merge");
  }

  std::vector<Generator> gens_;
  std::map<int, int> tower_index_;
  std::vector<std::vector<BigInt>> relations_;
  int max_filt_ = 0;
};

struct ChartPortion {
  std::pair<int, int> bottoms{0, 0};  // bottom cell dimensions, each in [2,9]
  int degree = 0;                     // stable homotopy degree
  std::vector<Tower> towers;
  std::vector<Merge> merges;
  std::vector<Vanish> vanishes;

  Presentation presentation() const { return Presentation(towers, merges); }

  // v2^8-periodicity: the drawn pattern moves up 8j filtrations while the
  // monomial towers still generate from filtration 0, so base towers grow
  // by 8j and every merge/vanish filtration shifts by 8j.
  ChartPortion shifted(int j) const {
    ChartPortion p = *this;
    p.degree += 48 * j;
    for (auto& t : p.towers) t.height += 8 * j;
    for (auto& m : p.merges) m.filt += 8 * j;
    for (auto& v : p.vanishes) v.filt += 8 * j;
    return p;
  }

  // The portion over the swapped smash factors is the offset-reversed chart.
  ChartPortion mirrored() const {
    ChartPortion p = *this;
    std::swap(p.bottoms.first, p.bottoms.second);
    for (auto& t : p.towers) t.offset = -t.offset;
    for (auto& m : p.merges) {
      for (auto& ref : m.members) {
        for (auto& x : ref) x = -x;
        std::sort(ref.begin(), ref.end());
      }
    }
    for (auto& v : p.vanishes)
      for (auto& x : v.members) x = -x;
    return p;
  }

  // Structural checks: a finite 2-group with consistent merge attachment,
  // and every vanish assertion holding in the presentation.
  void validate() const {
    Presentation pres = presentation();
    if (!pres.presents_finite_2_group())
      throw ChartError("chart does not present a finite abelian 2-group");
    for (const auto& v : vanishes) {
      std::vector<BigInt> elem(pres.size(), 0);
      for (int o : v.members) {
        auto t = pres.tower_multiple(o, v.filt);
        for (std::size_t i = 0; i < elem.size(); ++i) elem[i] += t[i];
      }
      if (!pres.zero_through_filtration(elem, v.filt))
        throw ChartError("vanish assertion fails at filtration " + std::to_string(v.filt));
    }
  }
};

// One evaluated term: a monomial offset with the 2-adic valuation of its
// binomial coefficient. Offsets outside the pictured window are certified
// zero by the stunted-space order bounds and recorded as such.
struct Term {
  int offset = 0;
  Valuation valuation;
};

enum class Verdict { zero, nonzero };

inline const char* to_string(Verdict v) { return v == Verdict::nonzero ? "nonzero" : "zero"; }

// Sum of 2^valuation * g_offset over the tracked terms, evaluated in the
// presented group. Terms with infinite valuation contribute nothing; terms
// outside the window must have been certified away by the caller.
inline Verdict evaluate_sum(const ChartPortion& chart, const std::vector<Term>& terms) {
  Presentation pres = chart.presentation();
  std::vector<BigInt> elem(pres.size(), 0);
  for (const auto& t : terms) {
    if (t.valuation.is_infinite) continue;
    if (!pres.has_tower(t.offset))
      throw ChartError("term offset " + std::to_string(t.offset) + " matches no tower");
    auto v = pres.tower_multiple(t.offset, t.valuation.value);
    for (std::size_t i = 0; i < elem.size(); ++i) elem[i] += v[i];
  }
  return pres.is_zero(elem) ? Verdict::zero : Verdict::nonzero;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

inline int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ChartParseError(std::string("bad integer for ") + what + ": '" + s + "'");
  }
}

// key=value fields after the record keyword
inline std::map<std::string, std::string> parse_fields(const std::vector<std::string>& words) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < words.size(); ++i) {
    auto eq = words[i].find('=');
    if (eq == std::string::npos) throw ChartParseError("expected key=value, got '" + words[i] + "'");
    out[words[i].substr(0, eq)] = words[i].substr(eq + 1);
  }
  return out;
}

inline std::string require(const std::map<std::string, std::string>& f, const char* key) {
  auto it = f.find(key);
  if (it == f.end()) throw ChartParseError(std::string("missing field ") + key);
  return it->second;
}

}  // namespace detail

// Chart database file: line-oriented records
//   chart <b1>,<b2> deg=<d>
//     tower offset=<o> filt=<f> height=<h>
//     merge filt=<f> members=<m1,m2> height=<h>   (a member is an offset,
//                                                  or o1/o2 naming a merge)
//     vanish filt=<f> members=<o1,...>
// blank-line terminated; '#' starts a comment.
class ChartDb {
 public:
  static ChartDb parse(std::string_view text) {
    ChartDb db;
    std::optional<ChartPortion> cur;
    std::string line;
    std::stringstream ss{std::string(text)};
    auto flush = [&] {
      if (cur) {
        cur->validate();
        db.charts_.push_back(std::move(*cur));
        cur.reset();
      }
    };
    while (std::getline(ss, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::string t = detail::trim(line);
      if (t.empty()) {
        flush();
        continue;
      }
      std::vector<std::string> words;
      for (const auto& w : detail::split(t, ' '))
        if (!w.empty()) words.push_back(w);
      const std::string& kind = words[0];
      if (kind == "chart") {
        flush();
        if (words.size() < 3) throw ChartParseError("chart record needs bottoms and deg");
        auto bots = detail::split(words[1], ',');
        if (bots.size() != 2) throw ChartParseError("chart bottoms must be <b1>,<b2>");
        ChartPortion p;
        p.bottoms = {detail::parse_int(bots[0], "b1"), detail::parse_int(bots[1], "b2")};
        auto fields = detail::parse_fields({words.begin() + 1, words.end()});
        p.degree = detail::parse_int(detail::require(fields, "deg"), "deg");
        cur = std::move(p);
      } else if (kind == "tower" || kind == "merge" || kind == "vanish") {
        if (!cur) throw ChartParseError(kind + " record outside a chart block");
        auto fields = detail::parse_fields(words);
        if (kind == "tower") {
          Tower tw;
          tw.offset = detail::parse_int(detail::require(fields, "offset"), "offset");
          tw.filt_base = detail::parse_int(detail::require(fields, "filt"), "filt");
          tw.height = detail::parse_int(detail::require(fields, "height"), "height");
          cur->towers.push_back(tw);
        } else if (kind == "merge") {
          Merge m;
          m.filt = detail::parse_int(detail::require(fields, "filt"), "filt");
          m.height = detail::parse_int(detail::require(fields, "height"), "height");
          for (const auto& tok : detail::split(detail::require(fields, "members"), ',')) {
            MemberRef ref;
            for (const auto& part : detail::split(tok, '/')) ref.push_back(detail::parse_int(part, "member"));
            m.members.push_back(std::move(ref));
          }
          if (m.members.size() < 2) throw ChartParseError("merge needs at least two members");
          cur->merges.push_back(std::move(m));
        } else {
          Vanish v;
          v.filt = detail::parse_int(detail::require(fields, "filt"), "filt");
          for (const auto& tok : detail::split(detail::require(fields, "members"), ','))
            v.members.push_back(detail::parse_int(tok, "member"));
          cur->vanishes.push_back(std::move(v));
        }
      } else {
        throw ChartParseError("unknown record '" + kind + "'");
      }
    }
    flush();
    return db;
  }

  static ChartDb embedded_default();

  const std::vector<ChartPortion>& charts() const { return charts_; }

  // Periodicity lookup with mirror fallback. Degrees repeat mod 48 with the
  // drawn pattern 8 filtrations higher per period.
  ChartPortion lookup(std::pair<int, int> bottoms, int degree) const {
    for (const auto& c : charts_) {
      if (c.bottoms != bottoms) continue;
      int diff = degree - c.degree;
      if (diff >= 0 && diff % 48 == 0) return c.shifted(diff / 48);
    }
    for (const auto& c : charts_) {
      if (c.bottoms != std::make_pair(bottoms.second, bottoms.first)) continue;
      int diff = degree - c.degree;
      if (diff >= 0 && diff % 48 == 0) return c.mirrored().shifted(diff / 48);
    }
    throw UnknownChartError("no chart for bottoms (" + std::to_string(bottoms.first) + "," +
                            std::to_string(bottoms.second) + ") degree " + std::to_string(degree));
  }

 private:
  std::vector<ChartPortion> charts_;
};

// Transcriptions of the five published chart pictures.
inline constexpr const char* kDefaultChartDb = R"(# Adams chart portions of tmf homology groups of smashed stunted
# projective spaces, as presentations with h0-extension merges.

chart 6,6 deg=30
  tower offset=-1 filt=0 height=2
  tower offset=0 filt=0 height=4
  tower offset=1 filt=0 height=2

chart 6,6 deg=38
  tower offset=-2 filt=0 height=2
  tower offset=-1 filt=0 height=4
  tower offset=0 filt=0 height=4
  tower offset=1 filt=0 height=2
  merge filt=4 members=-1,0 height=2

chart 7,2 deg=46
  tower offset=-2 filt=0 height=4
  tower offset=-1 filt=0 height=4
  tower offset=0 filt=0 height=4
  tower offset=1 filt=0 height=4
  tower offset=2 filt=0 height=1
  merge filt=4 members=-1,0 height=4
  merge filt=4 members=0,1 height=1

chart 6,3 deg=46
  tower offset=-2 filt=0 height=4
  tower offset=-1 filt=0 height=4
  tower offset=0 filt=0 height=4
  tower offset=1 filt=0 height=4
  tower offset=2 filt=0 height=2
  merge filt=4 members=-1,0 height=4
  merge filt=4 members=0,1 height=2

chart 6,5 deg=62
  tower offset=-3 filt=0 height=3
  tower offset=-2 filt=0 height=4
  tower offset=-1 filt=0 height=4
  tower offset=0 filt=0 height=4
  tower offset=1 filt=0 height=4
  tower offset=2 filt=0 height=4
  tower offset=3 filt=0 height=2
  merge filt=4 members=-2,-1 height=3
  merge filt=4 members=-1,0 height=4
  merge filt=4 members=0,1 height=4
  merge filt=4 members=1,2 height=2
  merge filt=8 members=-1/0,0/1 height=2
  vanish filt=8 members=-1,0,1
  vanish filt=8 members=-1,1
)";

inline ChartDb ChartDb::embedded_default() { return parse(kDefaultChartDb); }

}  // namespace psni::chart
