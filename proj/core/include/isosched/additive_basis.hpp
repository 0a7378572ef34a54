#ifndef ISOSCHED_ADDITIVE_BASIS_HPP
#define ISOSCHED_ADDITIVE_BASIS_HPP

#include <stdexcept>
#include <vector>

#include "isosched/torus.hpp"

namespace isosched {

// Thrown when no basis exists within the size bound and candidate universe.
struct BasisSearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// True when every target is a sum of pairwise distinct basis vectors (each
// basis vector used at most once per target; the empty sum covers zero).
bool is_additive_basis(const std::vector<Offset>& targets,
                       const std::vector<Offset>& basis);

// Smallest additive basis for the targets, by exhaustive search over
// increasing basis sizes. Candidates are the nonzero vectors in the
// targets' bounding box (for 1-D positive targets: the integers
// [1, max target]), so an optimum that would overshoot the box is out of
// reach by construction. Among bases of minimal size the lexicographically
// least is returned, so results are reproducible. Throws BasisSearchError
// when max_basis_size is exhausted or the search space is too large.
std::vector<Offset> find_min_additive_basis(const std::vector<Offset>& targets,
                                            int max_basis_size = 8);

}  // namespace isosched

#endif  // ISOSCHED_ADDITIVE_BASIS_HPP
