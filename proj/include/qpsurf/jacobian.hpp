#pragma once

#include <qpsurf/pathalg.hpp>

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qpsurf {

// Degree-N truncation of the Jacobian ideal: the span of p d_a(S) q over
// paths p, q with |p| + |q| + (lowest degree of d_a(S)) <= N, terms above
// N dropped. Paths are columns of a sparse echelon form built lazily per
// (head, tail) block. A negative answer only holds up to the truncation.
class TruncatedJacobianIdeal {
 public:
  explicit TruncatedJacobianIdeal(const Potential& s, std::optional<std::size_t> truncation = std::nullopt)
      : q_(s.quiver_ptr()), n_(truncation.value_or(s.truncation())) {
    const Quiver& q = *q_;
    nv_ = q.num_vertices();
    Potential s_n(s.element().with_truncation(n_ + 1));
    for (std::size_t a = 0; a < q.num_arrows(); ++a) derivs_.push_back(cyclic_derivative(s_n, a));
    enumerate_paths();
    blocks_.resize(nv_ * nv_);
  }

  std::size_t truncation() const { return n_; }
  std::size_t generator_count() const { return generators_; }
  std::size_t path_count() const { return total_paths_; }

  bool contains(const PathElement& u) {
    if (!same_layout(u.quiver(), *q_)) throw std::invalid_argument("element lives on a different quiver");
    if (u.max_degree() > n_) throw std::invalid_argument("degree overflow: element exceeds truncation degree");
    std::map<std::size_t, std::map<int, Rational>> per_block;
    for (const auto& [p, c] : u.terms()) {
      std::size_t b = block_id(path_head(*q_, p), path_tail(*q_, p));
      per_block[b][column(b, encode(p))] += c;
    }
    for (auto& [b, work] : per_block) {
      Block& blk = built_block(b);
      std::erase_if(work, [](const auto& kv) { return kv.second == 0; });
      reduce(blk, work);
      if (!work.empty()) return false;
    }
    return true;
  }

  bool contains_path(const Path& p) {
    PathElement e(q_, n_);
    e.add(p, 1);
    return contains(e);
  }

  // Smallest L <= N with every path of length L in the ideal.
  std::optional<std::size_t> nilpotency_bound() {
    for (std::size_t len = 0; len <= n_; ++len) {
      bool all = true;
      for (const auto& [b, key] : by_length_[len]) {
        std::map<int, Rational> work{{column(b, key), Rational(1)}};
        reduce(built_block(b), work);
        if (!work.empty()) {
          all = false;
          break;
        }
      }
      if (all) return len;
    }
    return std::nullopt;
  }

  // First path of the given length outside the ideal, if any.
  std::optional<Path> first_surviving_path(std::size_t len) {
    for (const auto& [b, key] : by_length_.at(len)) {
      std::map<int, Rational> work{{column(b, key), Rational(1)}};
      reduce(built_block(b), work);
      if (!work.empty()) return decode(key, b / nv_);
    }
    return std::nullopt;
  }

  // Membership of a cycle combination in J + [A, A] (modulo degree > N).
  bool contains_modulo_commutators(const PathElement& u) {
    build_cyclic();
    std::map<int, Rational> work;
    for (const auto& [p, c] : u.terms()) {
      if (path_head(*q_, p) != path_tail(*q_, p)) throw std::invalid_argument("not a combination of cycles");
      if (p.length() > n_) throw std::invalid_argument("degree overflow");
      work[cyclic_column(path_head(*q_, p), encode(p))] += c;
    }
    std::erase_if(work, [](const auto& kv) { return kv.second == 0; });
    reduce(cyclic_, work);
    return work.empty();
  }

  std::vector<Path> paths_of_length(std::size_t len) const {
    std::vector<Path> out;
    if (len > n_) return out;
    for (const auto& [b, key] : by_length_[len]) out.push_back(decode(key, b / nv_));
    return out;
  }

  std::vector<Path> cycles_up_to(std::size_t len) const {
    std::vector<Path> out;
    for (std::size_t l = 1; l <= std::min(len, n_); ++l)
      for (const auto& [b, key] : by_length_[l])
        if (b / nv_ == b % nv_) out.push_back(decode(key, b / nv_));
    return out;
  }

 private:
  using Row = std::vector<std::pair<int, Rational>>;

  struct Block {
    bool built = false;
    std::vector<std::string> keys;
    std::unordered_map<std::string, int> index;
    std::vector<int> pivot_row;
    std::vector<Row> rows;
  };

  std::size_t block_id(std::size_t head, std::size_t tail) const { return head * nv_ + tail; }

  static void append_arrow(std::string& key, std::size_t a) {
    key.push_back(static_cast<char>((a >> 8) & 0xff));
    key.push_back(static_cast<char>(a & 0xff));
  }

  static std::string encode(const Path& p) {
    std::string k;
    for (auto a : p.arrows) append_arrow(k, a);
    return k;
  }

  Path decode(const std::string& key, std::size_t head) const {
    if (key.empty()) return Path::trivial(head);
    std::vector<std::size_t> arr;
    for (std::size_t i = 0; i < key.size(); i += 2)
      arr.push_back((static_cast<std::size_t>(static_cast<unsigned char>(key[i])) << 8) |
                    static_cast<unsigned char>(key[i + 1]));
    return Path::of(std::move(arr));
  }

  void enumerate_paths() {
    const Quiver& q = *q_;
    by_length_.assign(n_ + 1, {});
    paths_.assign(nv_ * nv_, {});
    for (std::size_t v = 0; v < nv_; ++v) by_length_[0].emplace_back(block_id(v, v), std::string());
    std::vector<std::vector<std::size_t>> into(nv_);
    for (std::size_t a = 0; a < q.num_arrows(); ++a) into[q.arrow(a).head].push_back(a);
    for (std::size_t len = 1; len <= n_; ++len) {
      for (const auto& [b, key] : by_length_[len - 1]) {
        std::size_t head = b / nv_, tail = b % nv_;
        for (std::size_t a : into[tail]) {
          std::string k = key;
          append_arrow(k, a);
          by_length_[len].emplace_back(block_id(head, q.arrow(a).tail), std::move(k));
        }
      }
    }
    for (std::size_t len = 0; len <= n_; ++len)
      for (const auto& [b, key] : by_length_[len]) {
        paths_[b].push_back(key);
        ++total_paths_;
      }
  }

  int column(std::size_t b, const std::string& key) {
    Block& blk = blocks_[b];
    if (blk.index.empty() && !paths_[b].empty()) {
      blk.keys = paths_[b];
      for (std::size_t i = 0; i < blk.keys.size(); ++i) blk.index.emplace(blk.keys[i], static_cast<int>(i));
      blk.pivot_row.assign(blk.keys.size(), -1);
    }
    auto it = blk.index.find(key);
    if (it == blk.index.end()) throw std::logic_error("path missing from enumeration");
    return it->second;
  }

  static void reduce(Block& blk, std::map<int, Rational>& work) {
    while (!work.empty()) {
      auto it = work.begin();
      int pr = blk.pivot_row[it->first];
      if (pr < 0) return;
      Rational f = it->second;
      for (const auto& [c, v] : blk.rows[pr]) {
        auto [w, inserted] = work.emplace(c, 0);
        w->second -= f * v;
        if (w->second == 0) work.erase(w);
      }
    }
  }

  static void insert(Block& blk, std::map<int, Rational>& work) {
    std::erase_if(work, [](const auto& kv) { return kv.second == 0; });
    reduce(blk, work);
    if (work.empty()) return;
    Rational lead = work.begin()->second;
    Row row;
    row.reserve(work.size());
    for (const auto& [c, v] : work) row.emplace_back(c, v / lead);
    blk.pivot_row[work.begin()->first] = static_cast<int>(blk.rows.size());
    blk.rows.push_back(std::move(row));
  }

  // Calls emit(column_key_of_block, coefficient-map) for every generator of block b.
  template <class Sink>
  void for_each_generator(std::size_t head, std::size_t tail, Sink&& emit) {
    const Quiver& q = *q_;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const PathElement& d = derivs_[a];
      if (d.is_zero()) continue;
      std::size_t lo = *d.min_degree();
      if (lo > n_) continue;
      const auto& left = paths_[block_id(head, q.arrow(a).tail)];
      const auto& right = paths_[block_id(q.arrow(a).head, tail)];
      std::vector<std::pair<std::string, Rational>> dterms;
      for (const auto& [p, c] : d.terms()) dterms.emplace_back(encode(p), c);
      for (const auto& pk : left) {
        std::size_t lp = pk.size() / 2;
        if (lp + lo > n_) break;
        for (const auto& qk : right) {
          std::size_t lq = qk.size() / 2;
          if (lp + lq + lo > n_) break;
          std::map<std::string, Rational> gen;
          for (const auto& [dk, c] : dterms) {
            if (lp + lq + dk.size() / 2 > n_) continue;
            gen[pk + dk + qk] += c;
          }
          emit(gen);
        }
      }
    }
  }

  Block& built_block(std::size_t b) {
    Block& blk = blocks_[b];
    if (blk.built) return blk;
    if (blk.index.empty() && !paths_[b].empty()) column(b, paths_[b].front());
    for_each_generator(b / nv_, b % nv_, [&](const std::map<std::string, Rational>& gen) {
      std::map<int, Rational> work;
      for (const auto& [k, c] : gen) work[blk.index.at(k)] += c;
      ++generators_;
      insert(blk, work);
    });
    blk.built = true;
    return blk;
  }

  int cyclic_column(std::size_t v, const std::string& key) { return cyclic_offset_[v] + column(block_id(v, v), key); }

  void build_cyclic() {
    if (cyclic_.built) return;
    const Quiver& q = *q_;
    int total = 0;
    cyclic_offset_.assign(nv_, 0);
    for (std::size_t v = 0; v < nv_; ++v) {
      cyclic_offset_[v] = total;
      column(block_id(v, v), std::string());
      total += static_cast<int>(paths_[block_id(v, v)].size());
    }
    cyclic_.pivot_row.assign(static_cast<std::size_t>(total), -1);
    for (std::size_t v = 0; v < nv_; ++v) {
      for_each_generator(v, v, [&](const std::map<std::string, Rational>& gen) {
        std::map<int, Rational> work;
        for (const auto& [k, c] : gen) work[cyclic_column(v, k)] += c;
        insert(cyclic_, work);
      });
    }
    // w - rot(w), rot moving the first arrow to the end.
    for (std::size_t v = 0; v < nv_; ++v) {
      for (const auto& key : paths_[block_id(v, v)]) {
        if (key.empty()) continue;
        std::string rot = key.substr(2) + key.substr(0, 2);
        std::size_t a = (static_cast<std::size_t>(static_cast<unsigned char>(key[0])) << 8) |
                        static_cast<unsigned char>(key[1]);
        std::size_t w = q.arrow(a).tail;
        std::map<int, Rational> work;
        work[cyclic_column(v, key)] += 1;
        work[cyclic_column(w, rot)] -= 1;
        insert(cyclic_, work);
      }
    }
    cyclic_.built = true;
  }

  QuiverPtr q_;
  std::size_t n_;
  std::size_t nv_ = 0;
  std::vector<PathElement> derivs_;
  std::vector<std::vector<std::pair<std::size_t, std::string>>> by_length_;
  std::vector<std::vector<std::string>> paths_;  // per block, by length
  std::vector<Block> blocks_;
  Block cyclic_;
  std::vector<int> cyclic_offset_;
  std::size_t generators_ = 0;
  std::size_t total_paths_ = 0;
};

inline bool jacobian_membership(const Potential& s, const PathElement& u) {
  TruncatedJacobianIdeal ideal(s);
  return ideal.contains(u);
}

inline std::optional<std::size_t> jacobian_nilpotency_bound(const Potential& s) {
  TruncatedJacobianIdeal ideal(s);
  return ideal.nilpotency_bound();
}

}  // namespace qpsurf
