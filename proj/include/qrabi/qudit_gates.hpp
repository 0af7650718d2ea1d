#pragma once

// Elementary two-level unitaries U(j, j'; t) obtained from resonant Rabi
// channels, their embedding into the n^2-dimensional 2-qudit space
// (|level> (x) |atom index>, level first), the controlled-shift target and a
// small beam search that composes generators toward a target.

#include <cstdint>
#include <vector>

#include "qrabi/rwa_dynamics.hpp"

namespace qrabi::gates {

using rwa::RabiChannel;

struct ElementaryUnitary {
  int n = 2;
  RabiChannel channel;
  double t = 0.0;
  CMatrix matrix_2n;  // rows/cols 0..n-1: m-block, n..2n-1: r-block
};

ElementaryUnitary elementary_unitary(int n, const RabiChannel& channel, double t);

/// n^2 x n^2 identity with the four n x n blocks of u placed at (k,k), (k,l), (l,k), (l,l).
CMatrix embed_block(int n, int level_index_k, int level_index_l, const ElementaryUnitary& u);

/// n * C(n, 2) = n^2 (n - 1) / 2.
long long elementary_count(int n);

/// One level pair of a full level set together with one of its n channels.
struct GeneratorSlot {
  int level_index_k = 0;
  int level_index_l = 1;
  int j = 0;
  int j_prime = 0;
};

/// Every (level pair, channel) slot for n levels; the list has elementary_count(n) entries.
std::vector<GeneratorSlot> enumerate_generators(int n, const std::vector<int>& levels);

enum class ShiftConvention {
  ControlSecond,  // |a>|b> -> (Sigma1^b |a>) |b>, the figure's reading
  ControlFirst,   // |a>|b> -> |a> (Sigma1^a |b>)
};

CMatrix controlled_shift_target(int n, ShiftConvention convention = ShiftConvention::ControlSecond);

/// |tr(u^dagger v)| / dim.
double fidelity(const CMatrix& u, const CMatrix& v);

struct EmbeddedGate {
  int level_index_k = 0;
  int level_index_l = 1;
  ElementaryUnitary unitary;
  CMatrix matrix;  // n^2 x n^2
};

EmbeddedGate make_embedded(int n, int level_index_k, int level_index_l, const RabiChannel& channel, double t);

class GateSequence {
 public:
  explicit GateSequence(int n);

  /// Applies g after everything already in the sequence: product <- g.matrix * product.
  void append(const EmbeddedGate& g);
  const std::vector<EmbeddedGate>& gates() const { return gates_; }
  const CMatrix& product() const { return product_; }
  int n() const { return n_; }
  std::size_t size() const { return gates_.size(); }

 private:
  int n_;
  std::vector<EmbeddedGate> gates_;
  CMatrix product_;
};

struct GateSetEntry {
  int level_index_k = 0;
  int level_index_l = 1;
  RabiChannel channel;
  std::vector<double> durations;
};

struct SynthesisOptions {
  int beam_width = 64;
  std::uint64_t seed = 0;
  double stop_fidelity = 1.0 - 1e-12;
};

struct SynthesisResult {
  GateSequence sequence;
  double fidelity = 0.0;
  long long candidates_scored = 0;
};

/// Beam search over products of gate-set elements up to max_depth. Candidates
/// of equal fidelity are ordered by a seed-derived key so the result is
/// reproducible for a fixed seed.
SynthesisResult synthesize(const CMatrix& target, int n, const std::vector<GateSetEntry>& gate_set, int max_depth,
                           const SynthesisOptions& opts = {});

}  // namespace qrabi::gates
