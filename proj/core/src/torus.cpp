#include "isosched/torus.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace isosched {

long long l1_norm(const Offset& c) {
  long long sum = 0;
  for (int v : c) sum += std::llabs(v);
  return sum;
}

long long chebyshev_norm(const Offset& c) {
  long long max = 0;
  for (int v : c) {
    long long a = std::llabs(v);
    if (a > max) max = a;
  }
  return max;
}

int nonzero_count(const Offset& c) {
  int count = 0;
  for (int v : c)
    if (v != 0) ++count;
  return count;
}

bool is_zero(const Offset& c) { return nonzero_count(c) == 0; }

namespace {

int wrap(long long v, int p) {
  long long m = v % p;
  if (m < 0) m += p;
  return static_cast<int>(m);
}

}  // namespace

TorusShape::TorusShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty())
    throw std::invalid_argument("torus shape needs at least one dimension");
  for (int p : dims_) {
    if (p < 1)
      throw std::invalid_argument("torus dimension sizes must be positive, got " +
                                  std::to_string(p));
    total_ *= p;
    if (total_ > std::numeric_limits<int>::max())
      throw std::invalid_argument("torus has more positions than the rank range");
  }
}

int TorusShape::rank_of(const Coord& coord) const {
  if (static_cast<int>(coord.size()) != ndims())
    throw std::invalid_argument("coordinate has " + std::to_string(coord.size()) +
                                " components, shape has " + std::to_string(ndims()));
  long long rank = 0;
  for (int j = 0; j < ndims(); ++j) {
    if (coord[j] < 0 || coord[j] >= dims_[j])
      throw std::out_of_range("coordinate component " + std::to_string(j) + " = " +
                              std::to_string(coord[j]) + " outside [0, " +
                              std::to_string(dims_[j]) + ")");
    rank = rank * dims_[j] + coord[j];
  }
  return static_cast<int>(rank);
}

Coord TorusShape::coord_of(int rank) const {
  if (rank < 0 || rank >= total_)
    throw std::out_of_range("rank " + std::to_string(rank) + " outside [0, " +
                            std::to_string(total_) + ")");
  Coord coord(ndims());
  for (int j = ndims() - 1; j >= 0; --j) {
    coord[j] = rank % dims_[j];
    rank /= dims_[j];
  }
  return coord;
}

Coord TorusShape::add(const Coord& r, const Offset& c) const {
  if (static_cast<int>(r.size()) != ndims() || static_cast<int>(c.size()) != ndims())
    throw std::invalid_argument("torus add needs " + std::to_string(ndims()) +
                                "-component operands");
  Coord out(ndims());
  for (int j = 0; j < ndims(); ++j)
    out[j] = wrap(static_cast<long long>(r[j]) + c[j], dims_[j]);
  return out;
}

Coord TorusShape::sub(const Coord& r, const Offset& c) const {
  if (static_cast<int>(r.size()) != ndims() || static_cast<int>(c.size()) != ndims())
    throw std::invalid_argument("torus sub needs " + std::to_string(ndims()) +
                                "-component operands");
  Coord out(ndims());
  for (int j = 0; j < ndims(); ++j)
    out[j] = wrap(static_cast<long long>(r[j]) - c[j], dims_[j]);
  return out;
}

std::string TorusShape::to_string() const {
  std::ostringstream os;
  for (int j = 0; j < ndims(); ++j) {
    if (j) os << 'x';
    os << dims_[j];
  }
  return os.str();
}

TorusShape TorusShape::parse(const std::string& text) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('x', pos);
    std::string piece =
        text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      int value = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      dims.push_back(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad torus shape '" + text +
                                  "', expected e.g. 4x4x4");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return TorusShape(dims);
}

std::string offset_to_string(const Offset& c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j) os << ',';
    os << c[j];
  }
  os << ')';
  return os.str();
}

}  // namespace isosched
