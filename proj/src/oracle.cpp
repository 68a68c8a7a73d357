#include "dicke/oracle.hpp"

#include "dicke/errors.hpp"
#include "dicke/numerics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace dicke::oracle {

namespace {

// Nonzero atomic elements <s'|J_+|s> as (s', s, value).
struct Raise {
  int to, from;
  double value;
};

std::vector<Raise> raising_elements(const DickeBasis& b) {
  std::vector<Raise> out;
  if (b.kind == BasisKind::SymmetricSector) {
    for (int n = 0; n < b.n_atoms; ++n)
      out.push_back({n + 1, n, std::sqrt((n + 1.0) * (b.n_atoms - n))});
  } else {
    for (int s = 0; s < b.atom_dim(); ++s)
      for (int i = 0; i < b.n_atoms; ++i)
        if (!(s & (1 << i))) out.push_back({s | (1 << i), s, 1.0});
  }
  return out;
}

double jz_value(const DickeBasis& b, int s) { return b.up_count(s) - b.n_atoms / 2.0; }

// Elements of omega_ph a'a + omega0 J_z + g (a + a')(J_+ + J_-), upper triangle and diagonal.
template <class Sink>
void for_each_element(const DickeBasis& b, double omega_ph, double omega0, double g, Sink&& sink) {
  const int d = b.atom_dim();
  const auto raise = raising_elements(b);
  for (int m = 0; m < b.cutoff; ++m) {
    for (int s = 0; s < d; ++s) {
      const long i = static_cast<long>(m) * d + s;
      sink(i, i, omega_ph * m + omega0 * jz_value(b, s));
    }
    if (m + 1 == b.cutoff || g == 0.0) continue;
    const double am = std::sqrt(m + 1.0);
    for (const auto& r : raise) {
      // (m, from) <-> (m+1, to) and (m, to) <-> (m+1, from)
      sink(static_cast<long>(m) * d + r.from, static_cast<long>(m + 1) * d + r.to, g * am * r.value);
      sink(static_cast<long>(m) * d + r.to, static_cast<long>(m + 1) * d + r.from, g * am * r.value);
    }
  }
}

int parity_of(const DickeBasis& b, long i) {
  const int d = b.atom_dim();
  const long m = i / d;
  const int s = static_cast<int>(i % d);
  return static_cast<int>((m + b.up_count(s)) % 2);
}

struct Block {
  std::vector<long> index;  // global indices
  Eigen::MatrixXd matrix;
};

// Dense parity blocks of the given operator, assembled without the full matrix.
std::array<Block, 2> parity_blocks(const DickeBasis& b, double omega_ph, double omega0, double g) {
  std::array<Block, 2> blocks;
  std::vector<long> pos(b.dim());
  for (long i = 0; i < b.dim(); ++i) {
    auto& blk = blocks[parity_of(b, i)];
    pos[i] = static_cast<long>(blk.index.size());
    blk.index.push_back(i);
  }
  for (auto& blk : blocks) blk.matrix = Eigen::MatrixXd::Zero(blk.index.size(), blk.index.size());
  for_each_element(b, omega_ph, omega0, g, [&](long i, long j, double v) {
    auto& m = blocks[parity_of(b, i)].matrix;
    m(pos[i], pos[j]) += v;
    if (i != j) m(pos[j], pos[i]) += v;
  });
  return blocks;
}

double coupling(const ModelParams& p) { return p.lambda / std::sqrt(static_cast<double>(p.n_atoms)); }

Eigen::VectorXd embed(const Block& blk, const Eigen::VectorXd& v, long dim) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (std::size_t k = 0; k < blk.index.size(); ++k) out[blk.index[k]] = v[k];
  return out;
}

}  // namespace

int DickeBasis::atom_dim() const { return kind == BasisKind::SymmetricSector ? n_atoms + 1 : (1 << n_atoms); }

long DickeBasis::dim() const { return static_cast<long>(cutoff) * atom_dim(); }

int DickeBasis::up_count(int s) const {
  return kind == BasisKind::SymmetricSector ? s : std::popcount(static_cast<unsigned>(s));
}

void DickeBasis::validate() const {
  if (n_atoms < 1) throw Error(ErrorKind::InvalidParameter, "n_atoms must be >= 1", "n_atoms");
  if (cutoff < 2) throw Error(ErrorKind::InvalidParameter, "photon cutoff must be >= 2", "cutoff");
  if (kind == BasisKind::FullProduct && n_atoms > kMaxFullProductAtoms) {
    std::ostringstream msg;
    msg << "full product basis requires N <= " << kMaxFullProductAtoms << ", got N=" << n_atoms;
    throw Error(ErrorKind::Capacity, msg.str(), "n_atoms");
  }
  if (kind == BasisKind::SymmetricSector && static_cast<long>(cutoff) * (n_atoms + 1) > kMaxSymmetricDimension) {
    std::ostringstream msg;
    msg << "symmetric sector requires cutoff*(N+1) <= " << kMaxSymmetricDimension << ", got "
        << static_cast<long>(cutoff) * (n_atoms + 1);
    throw Error(ErrorKind::Capacity, msg.str(), "cutoff");
  }
}

Eigen::MatrixXd build_hamiltonian(const ModelParams& params, const DickeBasis& basis) {
  params.validate();
  basis.validate();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  for_each_element(basis, params.omega, params.omega0, coupling(params), [&](long i, long j, double v) {
    h(i, j) += v;
    if (i != j) h(j, i) += v;
  });
  return h;
}

Eigen::VectorXd parity_diagonal(const DickeBasis& basis) {
  Eigen::VectorXd p(basis.dim());
  for (long i = 0; i < basis.dim(); ++i) p[i] = parity_of(basis, i) == 0 ? 1.0 : -1.0;
  return p;
}

double parity_commutator_norm(const Eigen::MatrixXd& h, const DickeBasis& basis) {
  const Eigen::VectorXd p = parity_diagonal(basis);
  // [H, Pi]_ij = H_ij (p_j - p_i)
  double worst = 0.0;
  for (long j = 0; j < h.cols(); ++j)
    for (long i = 0; i < h.rows(); ++i) worst = std::max(worst, std::abs(h(i, j) * (p[j] - p[i])));
  return worst;
}

Eigen::MatrixXd OracleState::atom_density() const {
  const int d = basis.atom_dim();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  for (long k = 0; k < vectors.cols(); ++k) {
    if (weights[k] < 1e-18) continue;
    Eigen::Map<const Eigen::MatrixXd> psi(vectors.col(k).data(), d, basis.cutoff);
    rho.noalias() += weights[k] * psi * psi.transpose();
  }
  return rho;
}

OracleState exact_ground_state_in(const ModelParams& params, const DickeBasis& basis) {
  params.validate();
  basis.validate();
  auto blocks = parity_blocks(basis, params.omega, params.omega0, coupling(params));
  double best = std::numeric_limits<double>::infinity();
  int best_parity = 0;
  Eigen::VectorXd best_vec;
  for (int par = 0; par < 2; ++par) {
    if (blocks[par].index.empty()) continue;
    const auto eig = numerics::symmetric_eigendecomposition(blocks[par].matrix, 1);
    // Prefer the even block when the two are degenerate to rounding.
    if (best_vec.size() == 0 || eig.values[0] < best - 1e-12 * std::max(1.0, std::abs(best))) {
      best = eig.values[0];
      best_parity = par;
      best_vec = embed(blocks[par], eig.vectors.col(0), basis.dim());
    }
  }
  const double big = best_vec.cwiseAbs().maxCoeff();
  for (long i = 0; i < best_vec.size(); ++i)
    if (std::abs(best_vec[i]) > 1e-12 * big) {
      if (best_vec[i] < 0.0) best_vec = -best_vec;
      break;
    }
  OracleState s;
  s.basis = basis;
  s.vectors = best_vec;
  s.weights = Eigen::VectorXd::Ones(1);
  s.energies = Eigen::VectorXd::Constant(1, best);
  s.ground_energy = best;
  s.parity = best_parity == 0 ? 1 : -1;
  return s;
}

OracleState exact_ground_state(const ModelParams& params, int cutoff) {
  const DickeBasis basis{BasisKind::SymmetricSector, params.n_atoms, cutoff};
  OracleState s = exact_ground_state_in(params, basis);
  DickeBasis larger = basis;
  larger.cutoff = static_cast<int>(std::ceil(1.5 * cutoff));
  larger.validate();
  const double e2 = exact_ground_state_in(params, larger).ground_energy;
  if (std::abs(e2 - s.ground_energy) >= 1e-8) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "photon cutoff " << cutoff << " not converged: energy shifts by " << std::abs(e2 - s.ground_energy)
        << " at cutoff " << larger.cutoff;
    throw Error(ErrorKind::Cutoff, msg.str(), "photon");
  }
  return s;
}

OracleState exact_thermal_state(const ModelParams& params, int cutoff, double beta) {
  params.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidParameter, "beta must be > 0", "beta");
  const DickeBasis basis{BasisKind::FullProduct, params.n_atoms, cutoff};
  basis.validate();
  auto blocks = parity_blocks(basis, params.omega, params.omega0, coupling(params));
  OracleState s;
  s.basis = basis;
  s.beta = beta;
  s.vectors = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  s.energies.resize(basis.dim());
  long col = 0;
  for (const auto& blk : blocks) {
    if (blk.index.empty()) continue;
    const auto eig = numerics::symmetric_eigendecomposition(blk.matrix);
    for (long k = 0; k < eig.values.size(); ++k, ++col) {
      s.energies[col] = eig.values[k];
      for (std::size_t r = 0; r < blk.index.size(); ++r) s.vectors(blk.index[r], col) = eig.vectors(r, k);
    }
  }
  s.ground_energy = s.energies.minCoeff();
  s.weights = (-beta * (s.energies.array() - s.ground_energy)).exp();
  const double total = s.weights.sum();
  s.weights /= total;
  s.log_z = -beta * s.ground_energy + std::log(total);
  return s;
}

Eigen::VectorXd up_count_distribution(const OracleState& state) {
  const auto& b = state.basis;
  const int d = b.atom_dim();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(b.n_atoms + 1);
  for (long k = 0; k < state.vectors.cols(); ++k) {
    if (state.weights[k] < 1e-18) continue;
    for (long i = 0; i < b.dim(); ++i) {
      const double v = state.vectors(i, k);
      p[b.up_count(static_cast<int>(i % d))] += state.weights[k] * v * v;
    }
  }
  return p;
}

OverlapCheck exact_overlap(const OracleState& state, const SeparableState& sep) {
  const auto& b = state.basis;
  if (sep.n_atoms() != b.n_atoms)
    throw Error(ErrorKind::InvalidParameter, "separable state and oracle basis disagree on N", "n_atoms");
  const int d = b.atom_dim();

  // (i) diagonal probabilities straight from the amplitudes.
  OverlapCheck out{0.0, 0.0};
  for (long k = 0; k < state.vectors.cols(); ++k) {
    if (state.weights[k] < 1e-18) continue;
    for (long i = 0; i < b.dim(); ++i) {
      const int s = static_cast<int>(i % d);
      const int n = b.up_count(s);
      const double w = b.kind == BasisKind::SymmetricSector ? log_weight(sep, n) : log_configuration_weight(sep, n);
      const double v = state.vectors(i, k);
      out.via_diagonal += state.weights[k] * v * v * std::exp(w);
    }
  }

  // (ii) trace against an explicitly assembled rho^s.
  Eigen::MatrixXd rho_s = Eigen::MatrixXd::Zero(d, d);
  if (b.kind == BasisKind::SymmetricSector) {
    for (int n = 0; n < d; ++n) rho_s(n, n) = std::exp(log_weight(sep, n));
  } else {
    const auto single = sep.single_atom_matrix();  // (up, down)
    rho_s(0, 0) = 1.0;
    int size = 1;
    // Kronecker power; atom i is bit i, so build from the highest atom down.
    for (int i = 0; i < b.n_atoms; ++i) {
      Eigen::MatrixXd next = Eigen::MatrixXd::Zero(2 * size, 2 * size);
      for (int hi_r = 0; hi_r < 2; ++hi_r)
        for (int hi_c = 0; hi_c < 2; ++hi_c) {
          // label bit value 1 = up = row/col 0 of the single-atom matrix
          const double e = single[1 - hi_r][1 - hi_c];
          next.block(hi_r * size, hi_c * size, size, size) = e * rho_s.topLeftCorner(size, size);
        }
      size *= 2;
      rho_s = next;
    }
  }
  const Eigen::MatrixXd rho = state.atom_density();
  out.via_trace = (rho * rho_s).trace();
  if (std::abs(out.via_trace - out.via_diagonal) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "overlap paths disagree: diagonal " << out.via_diagonal << " vs trace " << out.via_trace;
    throw Error(ErrorKind::Internal, msg.str());
  }
  return out;
}

MomentSet exact_moments(const OracleState& state) {
  const auto& b = state.basis;
  const int d = b.atom_dim();
  const Eigen::MatrixXd rho = state.atom_density();
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(d, d);
  for (const auto& r : raising_elements(b)) jp(r.to, r.from) += r.value;
  const Eigen::MatrixXd jm = jp.transpose();
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(d, d);
  for (int s = 0; s < d; ++s) jz(s, s) = jz_value(b, s);
  const Eigen::MatrixXd jx = 0.5 * (jp + jm);
  // J_y = (J_+ - J_-)/(2i), so J_y^2 = -(J_+ - J_-)^2/4 is real.
  const Eigen::MatrixXd diff = jp - jm;
  const Eigen::MatrixXd jy2 = -0.25 * diff * diff;

  auto expect = [&](const Eigen::MatrixXd& op) { return (rho * op).trace(); };
  const double nn = b.n_atoms;
  MomentSet m;
  m.n_atoms = b.n_atoms;
  // rho is real symmetric and J_+ - J_- antisymmetric, so <J_y> vanishes identically.
  m.first = {expect(jx) / nn, 0.0, expect(jz) / nn};
  m.second = {expect(jx * jx) / (nn * nn), expect(jy2) / (nn * nn), expect(jz * jz) / (nn * nn)};
  return m;
}

double split_log_partition(const ModelParams& params, int cutoff, double beta) {
  params.validate();
  const DickeBasis basis{BasisKind::FullProduct, params.n_atoms, cutoff};
  basis.validate();
  const int d = basis.atom_dim();
  // H_I alone: photon energy switched off.
  auto blocks = parity_blocks(basis, 0.0, params.omega0, coupling(params));
  std::vector<double> terms;
  terms.reserve(basis.dim());
  for (const auto& blk : blocks) {
    if (blk.index.empty()) continue;
    const auto eig = numerics::symmetric_eigendecomposition(blk.matrix);
    for (long k = 0; k < eig.values.size(); ++k) {
      // <v_k| e^{-beta H_0} |v_k>
      double h0 = 0.0;
      for (std::size_t r = 0; r < blk.index.size(); ++r) {
        const long m = blk.index[r] / d;
        const double v = eig.vectors(r, k);
        h0 += std::exp(-beta * params.omega * m) * v * v;
      }
      terms.push_back(-beta * eig.values[k] + std::log(h0));
    }
  }
  return numerics::log_sum_exp(terms);
}

}  // namespace dicke::oracle
