#ifndef ISOSCHED_COSTMODEL_HPP
#define ISOSCHED_COSTMODEL_HPP

#include <stdexcept>
#include <string>

namespace isosched {

// Linear latency/bandwidth model: a round costs alpha regardless of content,
// a byte on the wire costs beta. beta == 0 collapses the model to pure round
// counting, which is handy when only latency matters.
struct CostParams {
  double alpha = 1.0;
  double beta = 0.0;
  long long block_size = 1;
};

inline double estimate(const CostParams& p, long long rounds, long long volume_blocks) {
  if (rounds < 0 || volume_blocks < 0)
    throw std::invalid_argument("negative rounds or volume in cost estimate");
  return p.alpha * static_cast<double>(rounds) +
         p.beta * static_cast<double>(volume_blocks) * static_cast<double>(p.block_size);
}

inline double estimate_bytes(const CostParams& p, long long rounds, long long bytes) {
  if (rounds < 0 || bytes < 0)
    throw std::invalid_argument("negative rounds or bytes in cost estimate");
  return p.alpha * static_cast<double>(rounds) + p.beta * static_cast<double>(bytes);
}

enum class CrossoverKind {
  Threshold,     // combining wins below block_size, direct wins above
  AlwaysFaster,  // combining wins at every block size
  NeverFaster,   // direct wins at every block size
};

struct Crossover {
  CrossoverKind kind = CrossoverKind::Threshold;
  double block_size = 0.0;  // meaningful only for Threshold
};

// Block size at which a combining schedule (rounds, volume) stops beating the
// direct schedule (size rounds, size volume). Combining trades extra volume
// for fewer rounds, so it wins when blocks are small and latency dominates.
inline Crossover crossover_blocksize(double alpha, double beta, int size,
                                     long long rounds, long long volume) {
  if (beta <= 0.0)
    throw std::invalid_argument("crossover needs a positive bandwidth cost");
  if (alpha < 0.0) throw std::invalid_argument("negative latency cost");
  if (size < 1) throw std::invalid_argument("crossover needs a nonempty neighborhood");
  const long long s = size;
  if (rounds >= s && volume > s) return {CrossoverKind::NeverFaster, 0.0};
  if (volume <= s) return {CrossoverKind::AlwaysFaster, 0.0};
  double mstar = (alpha / beta) * static_cast<double>(s - rounds) /
                 static_cast<double>(volume - s);
  return {CrossoverKind::Threshold, mstar};
}

inline std::string to_string(CrossoverKind kind) {
  switch (kind) {
    case CrossoverKind::Threshold: return "threshold";
    case CrossoverKind::AlwaysFaster: return "always";
    case CrossoverKind::NeverFaster: return "never";
  }
  return "?";
}

}  // namespace isosched

#endif
