#ifndef ISOSCHED_TORUS_HPP
#define ISOSCHED_TORUS_HPP

#include <string>
#include <vector>

namespace isosched {

// Absolute position in the process grid, one component per dimension.
using Coord = std::vector<int>;

// Relative displacement between grid positions. Components may be negative or
// exceed the grid extent; torus arithmetic wraps them.
using Offset = std::vector<int>;

long long l1_norm(const Offset& c);
long long chebyshev_norm(const Offset& c);
int nonzero_count(const Offset& c);
bool is_zero(const Offset& c);

// d-dimensional periodic process grid. Ranks are row-major with the last
// dimension varying fastest.
class TorusShape {
 public:
  explicit TorusShape(std::vector<int> dims);

  int ndims() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  long long total() const { return total_; }

  int rank_of(const Coord& coord) const;
  Coord coord_of(int rank) const;

  // Component-wise (r + c) mod p, normalized into [0, p). sub(r, c) is the
  // inverse of add(r, c).
  Coord add(const Coord& r, const Offset& c) const;
  Coord sub(const Coord& r, const Offset& c) const;

  std::string to_string() const;  // "4x4x4"
  static TorusShape parse(const std::string& text);

  friend bool operator==(const TorusShape& a, const TorusShape& b) = default;

 private:
  std::vector<int> dims_;
  long long total_ = 1;
};

std::string offset_to_string(const Offset& c);  // "(1,-2,0)"

}  // namespace isosched

#endif  // ISOSCHED_TORUS_HPP
