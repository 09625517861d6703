#pragma once

#include <boost/functional/hash.hpp>

#include <mutex>
#include <unordered_map>
#include <utility>

#include "hvertex/lin.hpp"

namespace hvertex::detail {

struct WordHash {
  size_t operator()(const Word& w) const { return boost::hash_range(w.begin(), w.end()); }
};
struct WordPairHash {
  size_t operator()(const std::pair<Word, Word>& p) const {
    size_t s = boost::hash_range(p.first.begin(), p.first.end());
    boost::hash_combine(s, boost::hash_range(p.second.begin(), p.second.end()));
    return s;
  }
};
struct BasisWordHash {
  size_t operator()(const std::pair<Basis, Word>& p) const {
    size_t s = boost::hash_range(p.second.begin(), p.second.end());
    boost::hash_combine(s, p.first);
    return s;
  }
};
struct BasisPairHash {
  size_t operator()(const std::pair<Basis, Basis>& p) const { return (static_cast<size_t>(p.first) << 16) | p.second; }
};

// Values are never erased or modified, so references stay valid after unlock.
template <class K, class V, class H>
class Memo {
 public:
  const V* find(const K& k) const {
    std::lock_guard lock(mu_);
    auto it = m_.find(k);
    return it == m_.end() ? nullptr : &it->second;
  }
  const V& put(const K& k, V v) {
    std::lock_guard lock(mu_);
    return m_.try_emplace(k, std::move(v)).first->second;
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<K, V, H> m_;
};

}  // namespace hvertex::detail
