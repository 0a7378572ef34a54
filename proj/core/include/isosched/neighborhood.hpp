#ifndef ISOSCHED_NEIGHBORHOOD_HPP
#define ISOSCHED_NEIGHBORHOOD_HPP

#include <string>
#include <vector>

#include "isosched/torus.hpp"

namespace isosched {

// An ordered list of relative neighbors, identical on every rank. A rank R
// sends block i to R + offsets[i] and receives block i from R - offsets[i].
// The order fixes the block layout in the communication buffers, so two
// neighborhoods with the same offsets in different order are distinct.
// Duplicate offsets and the zero offset are permitted.
struct Neighborhood {
  int d = 0;
  std::vector<Offset> offsets;

  Neighborhood(int d, std::vector<Offset> offsets);

  int size() const { return static_cast<int>(offsets.size()); }
};

// Per-block message sizes, indexed like Neighborhood::offsets.
using BlockSizeMap = std::vector<long long>;

BlockSizeMap uniform_sizes(int count, long long block);

struct NeighborhoodMetrics {
  int size = 0;                   // number of neighbors
  int torus_rounds = 0;           // hop-by-hop rounds, summed over dimensions
  long long alltoall_volume = 0;  // blocks forwarded by the torus all-to-all
  long long allgather_volume = 0; // blocks forwarded by the torus allgather
  int direct_rounds = 0;          // rounds of the single-hop-per-dimension variant
};

// Throws std::invalid_argument on a dimension mismatch. Returns non-fatal
// warnings for offsets that wrap around the torus and therefore alias a
// nearer position.
std::vector<std::string> validate(const Neighborhood& n, const TorusShape& shape);

// All (2r+1)^d - 1 offsets with Chebyshev norm at most r, zero excluded,
// in lexicographic order from the most negative corner.
Neighborhood gen_moore(int d, int r);

// All (r+1)^d - 1 nonzero offsets with components in [0, r], lexicographic.
Neighborhood gen_octant(int d, int r);

// Thin shells at the given Chebyshev distances: every nonzero component of an
// offset has magnitude equal to one of the radii. The radii must be positive
// and strictly increasing. Lexicographic order, zero excluded.
Neighborhood gen_shales(int d, const std::vector<int>& radii);

// Graded sizes mhat^(d - |C^i|_1); requires every offset's L1 norm <= d.
BlockSizeMap gen_irregular_sizes(const Neighborhood& n, long long mhat);

NeighborhoodMetrics compute_metrics(const Neighborhood& n);

// Generator spec strings ("moore:d=3,r=1", "octant:d=3,r=3",
// "shales:d=3,r=3,7") or a path to a neighborhood JSON file.
Neighborhood neighborhood_from_spec(const std::string& spec);

// JSON file format: {"d": 2, "offsets": [[1,0], [0,-1], ...]}
Neighborhood neighborhood_from_json(const std::string& text);
std::string neighborhood_to_json(const Neighborhood& n);
Neighborhood load_neighborhood(const std::string& path);
void save_neighborhood(const Neighborhood& n, const std::string& path);

}  // namespace isosched

#endif  // ISOSCHED_NEIGHBORHOOD_HPP
