#include "soergel/slice.hpp"

#include <map>
#include <mutex>

namespace soergel {

const std::unordered_map<MonoKey, std::uint32_t>& monomial_index(int nvars, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unordered_map<MonoKey, std::uint32_t>> cache;
  const auto& monos = monomials_of_total(nvars, m);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nvars, m});
  if (it != cache.end()) return it->second;
  std::unordered_map<MonoKey, std::uint32_t> idx;
  idx.reserve(monos.size());
  for (std::size_t i = 0; i < monos.size(); ++i) idx.emplace(monos[i], static_cast<std::uint32_t>(i));
  return cache.emplace(std::make_pair(nvars, m), std::move(idx)).first->second;
}

SliceLayout::SliceLayout(int nvars, std::vector<int> gen_deg, int d)
    : nvars_(nvars), gen_deg_(std::move(gen_deg)), d_(d) {
  total_.resize(gen_deg_.size());
  start_.resize(gen_deg_.size());
  monos_.resize(gen_deg_.size(), nullptr);
  idx_.resize(gen_deg_.size(), nullptr);
  for (std::size_t g = 0; g < gen_deg_.size(); ++g) {
    const int diff = d - gen_deg_[g];
    start_[g] = dim_;
    if (diff < 0 || diff % 2 != 0) {
      total_[g] = -1;
      continue;
    }
    total_[g] = diff / 2;
    monos_[g] = &monomials_of_total(nvars, total_[g]);
    idx_[g] = &monomial_index(nvars, total_[g]);
    dim_ += monos_[g]->size();
  }
}

const std::vector<MonoKey>& SliceLayout::monos(std::size_t g) const { return *monos_[g]; }

long SliceLayout::index(std::size_t g, MonoKey key) const {
  if (total_[g] < 0) return -1;
  auto it = idx_[g]->find(key);
  if (it == idx_[g]->end()) return -1;
  return static_cast<long>(start_[g] + it->second);
}

}  // namespace soergel
