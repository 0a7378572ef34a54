#include "isosched/additive_basis.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace isosched {

namespace {

constexpr std::size_t kMaxUniverse = 64;
constexpr long long kMaxCandidates = 5'000'000;

int common_dim(const std::vector<Offset>& targets) {
  if (targets.empty())
    throw std::invalid_argument("additive basis search needs at least one target");
  int d = static_cast<int>(targets.front().size());
  if (d < 1) throw std::invalid_argument("targets need at least one component");
  for (const Offset& t : targets)
    if (static_cast<int>(t.size()) != d)
      throw std::invalid_argument("targets differ in dimension count");
  return d;
}

std::vector<Offset> subset_sums(const std::vector<Offset>& basis, int d) {
  std::vector<Offset> sums{Offset(d, 0)};
  for (const Offset& b : basis) {
    std::size_t old = sums.size();
    for (std::size_t k = 0; k < old; ++k) {
      Offset s = sums[k];
      for (int j = 0; j < d; ++j) s[j] += b[j];
      sums.push_back(std::move(s));
    }
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

}  // namespace

bool is_additive_basis(const std::vector<Offset>& targets,
                       const std::vector<Offset>& basis) {
  int d = common_dim(targets);
  for (const Offset& b : basis)
    if (static_cast<int>(b.size()) != d)
      throw std::invalid_argument("basis vectors differ in dimension count");
  if (basis.size() > 30)
    throw std::invalid_argument("basis too large for subset enumeration");
  std::vector<Offset> sums = subset_sums(basis, d);
  for (const Offset& t : targets)
    if (!std::binary_search(sums.begin(), sums.end(), t)) return false;
  return true;
}

std::vector<Offset> find_min_additive_basis(const std::vector<Offset>& targets_in,
                                            int max_basis_size) {
  int d = common_dim(targets_in);
  if (max_basis_size < 0)
    throw std::invalid_argument("maximum basis size must be nonnegative");

  std::vector<Offset> targets = targets_in;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  // Candidate universe: the bounding box of the targets, zero excluded,
  // in lexicographic order.
  std::vector<int> lo(d, 0), hi(d, 0);
  for (const Offset& t : targets)
    for (int j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], t[j]);
      hi[j] = std::max(hi[j], t[j]);
    }
  std::vector<Offset> universe;
  Offset cur(lo.begin(), lo.end());
  while (true) {
    if (!is_zero(cur)) universe.push_back(cur);
    int j = d - 1;
    while (j >= 0 && cur[j] == hi[j]) {
      cur[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    ++cur[j];
  }
  if (universe.size() > kMaxUniverse)
    throw BasisSearchError("candidate universe has " +
                           std::to_string(universe.size()) + " vectors, limit " +
                           std::to_string(kMaxUniverse));

  auto feasible = [&](const std::vector<Offset>& basis) {
    std::vector<Offset> sums = subset_sums(basis, d);
    for (const Offset& t : targets)
      if (!std::binary_search(sums.begin(), sums.end(), t)) return false;
    return true;
  };

  // Deepening on the basis size; combinations enumerate in lexicographic
  // order over the sorted universe, so the first hit is the least basis.
  const int u = static_cast<int>(universe.size());
  for (int k = 0; k <= max_basis_size && k <= u; ++k) {
    long long combinations = 1;
    for (int j = 0; j < k; ++j) {
      combinations = combinations * (u - j) / (j + 1);
      if (combinations > kMaxCandidates)
        throw BasisSearchError("search space exceeds " +
                               std::to_string(kMaxCandidates) + " candidate bases");
    }
    std::vector<int> pick(k);
    for (int j = 0; j < k; ++j) pick[j] = j;
    while (true) {
      std::vector<Offset> basis;
      basis.reserve(k);
      for (int idx : pick) basis.push_back(universe[idx]);
      if (feasible(basis)) return basis;
      int j = k - 1;
      while (j >= 0 && pick[j] == u - k + j) --j;
      if (j < 0) break;
      ++pick[j];
      for (int l = j + 1; l < k; ++l) pick[l] = pick[l - 1] + 1;
    }
  }
  throw BasisSearchError("no additive basis of size up to " +
                         std::to_string(max_basis_size) + " covers the targets");
}

}  // namespace isosched
