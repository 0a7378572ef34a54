#include "isosched/neighborhood.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "isosched/prefix_trie.hpp"

namespace isosched {

Neighborhood::Neighborhood(int d_, std::vector<Offset> offsets_)
    : d(d_), offsets(std::move(offsets_)) {
  if (d < 1) throw std::invalid_argument("neighborhood needs at least one dimension");
  if (offsets.empty())
    throw std::invalid_argument("neighborhood needs at least one offset");
  for (std::size_t i = 0; i < offsets.size(); ++i)
    if (static_cast<int>(offsets[i].size()) != d)
      throw std::invalid_argument("offset " + std::to_string(i) + " has " +
                                  std::to_string(offsets[i].size()) +
                                  " components, neighborhood has " + std::to_string(d));
}

BlockSizeMap uniform_sizes(int count, long long block) {
  if (count < 1) throw std::invalid_argument("size map needs at least one entry");
  if (block < 0) throw std::invalid_argument("block sizes must be nonnegative");
  return BlockSizeMap(static_cast<std::size_t>(count), block);
}

std::vector<std::string> validate(const Neighborhood& n, const TorusShape& shape) {
  if (n.d != shape.ndims())
    throw std::invalid_argument("neighborhood has " + std::to_string(n.d) +
                                " dimensions, shape " + shape.to_string() + " has " +
                                std::to_string(shape.ndims()));
  std::vector<std::string> warnings;
  for (int i = 0; i < n.size(); ++i) {
    for (int j = 0; j < n.d; ++j) {
      int c = n.offsets[i][j];
      int p = shape.dims()[j];
      if (std::abs(c) >= p) {
        long long wrapped = ((static_cast<long long>(c) % p) + p) % p;
        std::ostringstream os;
        os << "offset " << i << " " << offset_to_string(n.offsets[i]) << ": component "
           << j << " wraps dimension of size " << p << " (" << c << " aliases "
           << wrapped << ")";
        warnings.push_back(os.str());
      }
    }
  }
  return warnings;
}

namespace {

// Enumerates the box [lo_j, hi_j]^d in lexicographic order, first dimension
// outermost, and keeps the offsets accepted by the filter.
template <typename Filter>
std::vector<Offset> enumerate_box(int d, const std::vector<int>& lo,
                                  const std::vector<int>& hi, Filter&& keep) {
  std::vector<Offset> out;
  Offset cur(lo.begin(), lo.end());
  while (true) {
    if (keep(cur)) out.push_back(cur);
    int j = d - 1;
    while (j >= 0 && cur[j] == hi[j]) {
      cur[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    ++cur[j];
  }
  return out;
}

void require_dim_radius(int d, int r) {
  if (d < 1) throw std::invalid_argument("dimension count must be positive");
  if (r < 1) throw std::invalid_argument("radius must be positive");
  // (2r+1)^d neighbors have to stay enumerable
  double cells = 1.0;
  for (int j = 0; j < d; ++j) cells *= 2.0 * r + 1.0;
  if (cells > 1e8)
    throw std::invalid_argument("neighborhood would have more than 1e8 offsets");
}

}  // namespace

Neighborhood gen_moore(int d, int r) {
  require_dim_radius(d, r);
  std::vector<int> lo(d, -r), hi(d, r);
  return Neighborhood(
      d, enumerate_box(d, lo, hi, [](const Offset& c) { return !is_zero(c); }));
}

Neighborhood gen_octant(int d, int r) {
  require_dim_radius(d, r);
  std::vector<int> lo(d, 0), hi(d, r);
  return Neighborhood(
      d, enumerate_box(d, lo, hi, [](const Offset& c) { return !is_zero(c); }));
}

Neighborhood gen_shales(int d, const std::vector<int>& radii) {
  if (radii.empty()) throw std::invalid_argument("shales need at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] < 1) throw std::invalid_argument("shale radii must be positive");
    if (k > 0 && radii[k] <= radii[k - 1])
      throw std::invalid_argument("shale radii must be strictly increasing");
  }
  require_dim_radius(d, radii.back());
  std::set<int> allowed(radii.begin(), radii.end());
  std::vector<int> lo(d, -radii.back()), hi(d, radii.back());
  auto on_shale = [&](const Offset& c) {
    if (is_zero(c)) return false;
    for (int v : c)
      if (v != 0 && !allowed.count(std::abs(v))) return false;
    return true;
  };
  return Neighborhood(d, enumerate_box(d, lo, hi, on_shale));
}

BlockSizeMap gen_irregular_sizes(const Neighborhood& n, long long mhat) {
  if (mhat < 1) throw std::invalid_argument("size base must be positive");
  BlockSizeMap sizes;
  sizes.reserve(n.offsets.size());
  for (int i = 0; i < n.size(); ++i) {
    long long norm = l1_norm(n.offsets[i]);
    if (norm > n.d)
      throw std::invalid_argument("offset " + std::to_string(i) + " " +
                                  offset_to_string(n.offsets[i]) + " has L1 norm " +
                                  std::to_string(norm) + " > dimension count " +
                                  std::to_string(n.d));
    long long size = 1;
    for (long long e = 0; e < n.d - norm; ++e) {
      if (size > std::numeric_limits<long long>::max() / mhat)
        throw std::invalid_argument("block size overflows 64 bits");
      size *= mhat;
    }
    sizes.push_back(size);
  }
  return sizes;
}

NeighborhoodMetrics compute_metrics(const Neighborhood& n) {
  NeighborhoodMetrics m;
  m.size = n.size();
  for (int j = 0; j < n.d; ++j) {
    int maxpos = 0, maxneg = 0;
    std::set<int> values;
    for (const Offset& c : n.offsets) {
      maxpos = std::max(maxpos, c[j]);
      maxneg = std::max(maxneg, -c[j]);
      if (c[j] != 0) values.insert(c[j]);
    }
    m.torus_rounds += maxpos + maxneg;
    m.direct_rounds += static_cast<int>(values.size());
  }
  for (const Offset& c : n.offsets) m.alltoall_volume += l1_norm(c);
  m.allgather_volume = PrefixTrie(n, allgather_dim_order(n)).edge_weight_sum();
  return m;
}

namespace {

std::vector<std::pair<std::string, std::vector<int>>> parse_kv_list(
    const std::string& text) {
  // "d=3,r=3,7" -> {d: [3], r: [3, 7]}; values without a key continue the
  // previous key's list.
  std::vector<std::pair<std::string, std::vector<int>>> pairs;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    std::size_t eq = token.find('=');
    std::string value_text = token;
    if (eq != std::string::npos) {
      pairs.emplace_back(token.substr(0, eq), std::vector<int>{});
      value_text = token.substr(eq + 1);
    } else if (pairs.empty()) {
      throw std::invalid_argument("expected key=value, got '" + token + "'");
    }
    std::size_t used = 0;
    int value = std::stoi(value_text, &used);
    if (used != value_text.size())
      throw std::invalid_argument("bad integer '" + value_text + "'");
    pairs.back().second.push_back(value);
  }
  return pairs;
}

int single_value(const std::vector<std::pair<std::string, std::vector<int>>>& pairs,
                 const std::string& key) {
  for (const auto& [k, v] : pairs)
    if (k == key) {
      if (v.size() != 1)
        throw std::invalid_argument("parameter " + key + " takes one value");
      return v.front();
    }
  throw std::invalid_argument("missing parameter " + key);
}

std::vector<int> list_value(
    const std::vector<std::pair<std::string, std::vector<int>>>& pairs,
    const std::string& key) {
  for (const auto& [k, v] : pairs)
    if (k == key) return v;
  throw std::invalid_argument("missing parameter " + key);
}

}  // namespace

Neighborhood neighborhood_from_spec(const std::string& spec) {
  std::size_t colon = spec.find(':');
  std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
  if (name == "moore" || name == "octant" || name == "shales") {
    if (colon == std::string::npos)
      throw std::invalid_argument("generator '" + name + "' needs parameters, e.g. " +
                                  name + ":d=3,r=1");
    try {
      auto pairs = parse_kv_list(spec.substr(colon + 1));
      if (name == "moore") return gen_moore(single_value(pairs, "d"), single_value(pairs, "r"));
      if (name == "octant")
        return gen_octant(single_value(pairs, "d"), single_value(pairs, "r"));
      return gen_shales(single_value(pairs, "d"), list_value(pairs, "r"));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("bad neighborhood spec '" + spec + "': " + e.what());
    }
  }
  return load_neighborhood(spec);
}

Neighborhood neighborhood_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad neighborhood JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("offsets"))
    throw std::invalid_argument("neighborhood JSON needs fields 'd' and 'offsets'");
  int d = doc.at("d").get<int>();
  std::vector<Offset> offsets;
  for (const auto& row : doc.at("offsets")) offsets.push_back(row.get<Offset>());
  return Neighborhood(d, std::move(offsets));
}

std::string neighborhood_to_json(const Neighborhood& n) {
  nlohmann::ordered_json doc;
  doc["d"] = n.d;
  doc["offsets"] = n.offsets;
  return doc.dump(2) + "\n";
}

Neighborhood load_neighborhood(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open neighborhood file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return neighborhood_from_json(buffer.str());
}

void save_neighborhood(const Neighborhood& n, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write neighborhood file '" + path + "'");
  out << neighborhood_to_json(n);
}

}  // namespace isosched
