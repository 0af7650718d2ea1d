#include "qrabi/qudit_gates.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qrabi::gates {

ElementaryUnitary elementary_unitary(int n, const RabiChannel& channel, double t) {
  if (n < 2) throw std::invalid_argument("elementary_unitary: n must be >= 2");
  if (channel.j < 0 || channel.j >= n || channel.j_prime < 0 || channel.j_prime >= n) {
    throw std::out_of_range("elementary_unitary: channel atom index out of range");
  }
  ElementaryUnitary u;
  u.n = n;
  u.channel = channel;
  u.t = t;
  u.matrix_2n = CMatrix::Identity(2 * n, 2 * n);
  const Eigen::Matrix2cd block = rwa::rwa_matrix(channel.R, t);
  const int a = channel.j;
  const int b = n + channel.j_prime;
  u.matrix_2n(a, a) = block(0, 0);
  u.matrix_2n(a, b) = block(0, 1);
  u.matrix_2n(b, a) = block(1, 0);
  u.matrix_2n(b, b) = block(1, 1);
  return u;
}

CMatrix embed_block(int n, int level_index_k, int level_index_l, const ElementaryUnitary& u) {
  if (u.n != n || u.matrix_2n.rows() != 2 * n) throw std::invalid_argument("embed_block: size mismatch");
  if (level_index_k < 0 || level_index_k >= n || level_index_l < 0 || level_index_l >= n ||
      level_index_k == level_index_l) {
    throw std::out_of_range("embed_block: level indices must be distinct and in [0, n)");
  }
  CMatrix out = CMatrix::Identity(n * n, n * n);
  const int k = level_index_k * n;
  const int l = level_index_l * n;
  out.block(k, k, n, n) = u.matrix_2n.block(0, 0, n, n);
  out.block(k, l, n, n) = u.matrix_2n.block(0, n, n, n);
  out.block(l, k, n, n) = u.matrix_2n.block(n, 0, n, n);
  out.block(l, l, n, n) = u.matrix_2n.block(n, n, n, n);
  return out;
}

long long elementary_count(int n) {
  if (n < 0) throw std::invalid_argument("elementary_count: n must be >= 0");
  const long long nn = n;
  return nn * nn * (nn - 1) / 2;
}

std::vector<GeneratorSlot> enumerate_generators(int n, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != n) throw std::invalid_argument("enumerate_generators: need n levels");
  if (!std::is_sorted(levels.begin(), levels.end()) ||
      std::adjacent_find(levels.begin(), levels.end()) != levels.end()) {
    throw std::invalid_argument("enumerate_generators: levels must be strictly ascending");
  }
  std::vector<GeneratorSlot> out;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      for (const auto& [jp, j] : rwa::channel_enumerate(n, levels[static_cast<std::size_t>(k)],
                                                       levels[static_cast<std::size_t>(l)])) {
        out.push_back({k, l, j, jp});
      }
    }
  }
  return out;
}

CMatrix controlled_shift_target(int n, ShiftConvention convention) {
  if (n < 1) throw std::invalid_argument("controlled_shift_target: n must be >= 1");
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int image = convention == ShiftConvention::ControlSecond ? ((a + b) % n) * n + b
                                                                     : a * n + (a + b) % n;
      out(image, a * n + b) = 1.0;
    }
  }
  return out;
}

double fidelity(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols() || u.rows() == 0) {
    throw std::invalid_argument("fidelity: matrices must be square and of equal size");
  }
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

EmbeddedGate make_embedded(int n, int level_index_k, int level_index_l, const RabiChannel& channel, double t) {
  EmbeddedGate g;
  g.level_index_k = level_index_k;
  g.level_index_l = level_index_l;
  g.unitary = elementary_unitary(n, channel, t);
  g.matrix = embed_block(n, level_index_k, level_index_l, g.unitary);
  return g;
}

GateSequence::GateSequence(int n) : n_(n), product_(CMatrix::Identity(n * n, n * n)) {
  if (n < 2) throw std::invalid_argument("GateSequence: n must be >= 2");
}

void GateSequence::append(const EmbeddedGate& g) {
  if (g.matrix.rows() != product_.rows()) throw std::invalid_argument("GateSequence: gate size mismatch");
  product_ = g.matrix * product_;
  gates_.push_back(g);
}

namespace {

struct BeamNode {
  std::vector<std::size_t> path;
  CMatrix product;
  double fidelity = 0.0;
  std::uint64_t key = 0;
};

bool better(const BeamNode& a, const BeamNode& b) {
  if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
  if (a.key != b.key) return a.key < b.key;
  return a.path < b.path;
}

}  // namespace

SynthesisResult synthesize(const CMatrix& target, int n, const std::vector<GateSetEntry>& gate_set, int max_depth,
                           const SynthesisOptions& opts) {
  if (target.rows() != n * n || target.cols() != n * n) throw std::invalid_argument("synthesize: target must be n^2 x n^2");
  if (max_depth < 0) throw std::invalid_argument("synthesize: max_depth must be >= 0");

  std::vector<EmbeddedGate> elements;
  for (const GateSetEntry& e : gate_set) {
    for (double t : e.durations) elements.push_back(make_embedded(n, e.level_index_k, e.level_index_l, e.channel, t));
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<std::uint64_t> element_keys(elements.size());
  for (auto& k : element_keys) k = rng();

  SynthesisResult result{GateSequence(n), fidelity(target, CMatrix::Identity(n * n, n * n)), 0};
  BeamNode best{{}, CMatrix::Identity(n * n, n * n), result.fidelity, 0};

  std::vector<BeamNode> beam{best};
  const std::size_t width = static_cast<std::size_t>(std::max(1, opts.beam_width));
  for (int depth = 1; depth <= max_depth && !elements.empty(); ++depth) {
    if (best.fidelity >= opts.stop_fidelity) break;
    std::vector<BeamNode> next;
    next.reserve(beam.size() * elements.size());
    for (const BeamNode& node : beam) {
      for (std::size_t e = 0; e < elements.size(); ++e) {
        BeamNode child;
        child.path = node.path;
        child.path.push_back(e);
        child.product = elements[e].matrix * node.product;
        child.fidelity = fidelity(target, child.product);
        // mix the element keys along the path so ties resolve by seed
        child.key = node.key * 0x9E3779B97F4A7C15ULL + element_keys[e];
        next.push_back(std::move(child));
        ++result.candidates_scored;
      }
    }
    const std::size_t keep = std::min(width, next.size());
    std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(), better);
    next.resize(keep);
    if (next.front().fidelity > best.fidelity) best = next.front();
    beam = std::move(next);
  }

  for (std::size_t e : best.path) result.sequence.append(elements[e]);
  result.fidelity = best.fidelity;
  return result;
}

}  // namespace qrabi::gates
