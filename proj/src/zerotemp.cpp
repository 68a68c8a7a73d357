#include "dicke/zerotemp.hpp"

#include "dicke/errors.hpp"
#include "dicke/numerics.hpp"
#include "displacement.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace dicke {

namespace {

constexpr double kTailLimit = 1e-8;

void check_phase(const ModelParams& p, Phase phase) {
  const double lc = critical_coupling(p);
  if (phase == Phase::Normal && p.lambda > lc)
    throw Error(ErrorKind::InvalidParameter, "normal-phase Hamiltonian requested above lambda_c", "phase");
  if (phase == Phase::Superradiant && p.lambda <= lc)
    throw Error(ErrorKind::InvalidParameter, "superradiant Hamiltonian requested at or below lambda_c", "phase");
}

Phase zero_t_phase(const ModelParams& p) {
  return p.lambda <= critical_coupling(p) ? Phase::Normal : Phase::Superradiant;
}

// Indices of the even sector (m + k even) in the product basis.
std::vector<int> even_indices(const Cutoffs& c) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(c.photon) * c.atom / 2 + 1);
  for (int m = 0; m < c.photon; ++m)
    for (int k = 0; k < c.atom; ++k)
      if ((m + k) % 2 == 0) idx.push_back(m * c.atom + k);
  return idx;
}

Eigen::SparseMatrix<double> restrict_to(const Eigen::SparseMatrix<double>& h, const std::vector<int>& idx) {
  std::vector<int> pos(h.rows(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (int col = 0; col < h.outerSize(); ++col) {
    if (pos[col] < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, col); it; ++it)
      if (pos[it.row()] >= 0) t.emplace_back(pos[it.row()], pos[col], it.value());
  }
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::SparseMatrix<double> out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Lowest eigenpair of a symmetric positive-shiftable matrix by shift-invert iteration.
std::pair<double, Eigen::VectorXd> inverse_iteration(const Eigen::SparseMatrix<double>& a, double shift,
                                                     const Eigen::VectorXd& start) {
  Eigen::SparseMatrix<double> shifted = a;
  for (int i = 0; i < a.rows(); ++i) shifted.coeffRef(i, i) -= shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "sparse LDLT factorization failed");
  Eigen::VectorXd v = start.normalized();
  double theta = v.dot(a * v);
  const double scale = std::max(1.0, std::abs(theta));
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = solver.solve(v);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "sparse solve failed");
    v = w.normalized();
    Eigen::VectorXd av = a * v;
    theta = v.dot(av);
    if ((av - theta * v).norm() < 1e-11 * scale) return {theta, v};
  }
  throw Error(ErrorKind::Numerical, "inverse iteration did not converge");
}

void check_tail(const TwoModeState& s) {
  const Eigen::MatrixXd psi = s.as_matrix();
  const Eigen::VectorXd photon = psi.rowwise().squaredNorm();
  const Eigen::VectorXd atom = psi.colwise().squaredNorm().transpose();
  auto tail = [](const Eigen::VectorXd& marginal) {
    const int n = static_cast<int>(marginal.size());
    const int top = std::max(1, static_cast<int>(std::ceil(0.1 * n)));
    return marginal.tail(top).sum();
  };
  const double tp = tail(photon), ta = tail(atom);
  if (tp >= kTailLimit || ta >= kTailLimit) {
    const bool photon_bad = tp / kTailLimit >= ta / kTailLimit;
    std::ostringstream msg;
    msg << (photon_bad ? "photon" : "atom") << " cutoff " << (photon_bad ? s.cutoffs.photon : s.cutoffs.atom)
        << " too small: top-10% probability " << (photon_bad ? tp : ta);
    throw Error(ErrorKind::Cutoff, msg.str(), photon_bad ? "photon" : "atom");
  }
}

// Amplitudes in the physical HP basis: rows photon m, columns atom level n.
Eigen::MatrixXd physical_amplitudes(const TwoModeState& s) {
  const Eigen::MatrixXd psi = s.as_matrix();
  if (s.displacement_atom == 0.0) return psi;
  const int levels = detail::physical_atom_levels(s.displacement_atom, s.cutoffs.atom);
  const Eigen::MatrixXd u = detail::displacement_matrix(s.displacement_atom, levels, s.cutoffs.atom);
  return psi * u.transpose();
}

TwoModeState rebind(const TwoModeState& s, const ModelParams& p) {
  TwoModeState out = s;
  ModelParams old = p;
  old.n_atoms = s.n_atoms;
  out.n_atoms = p.n_atoms;
  out.displacement_atom = atom_displacement(p, s.phase);
  // Only the constant term of the Hamiltonian depends on N.
  out.ground_energy += effective_coefficients(p, s.phase).constant - effective_coefficients(old, s.phase).constant;
  return out;
}

}  // namespace

QuadraticCoefficients effective_coefficients(const ModelParams& p, Phase phase) {
  p.validate();
  check_phase(p, phase);
  const double lc = critical_coupling(p);
  const double l2 = p.lambda * p.lambda, lc2 = lc * lc;
  const double n = p.n_atoms;
  QuadraticCoefficients c;
  c.omega = p.omega;
  if (phase == Phase::Normal) {
    c.omega_b = p.omega0;
    c.coupling = p.lambda;
    c.constant = -n * p.omega0 / 2.0;
  } else {
    c.omega_b = p.omega0 + 2.0 / p.omega * (l2 - lc2);
    c.squeeze = (l2 - lc2) * (3.0 * l2 + lc2) / (2.0 * p.omega * (l2 + lc2));
    c.coupling = std::sqrt(2.0) * lc2 / std::sqrt(l2 + lc2);
    c.constant = -n / p.omega * (l2 + lc2 * lc2 / l2);
  }
  return c;
}

double atom_displacement(const ModelParams& p, Phase phase) {
  if (phase == Phase::Normal) return 0.0;
  const double lc = critical_coupling(p);
  const double mu = lc * lc / (p.lambda * p.lambda);
  return std::sqrt(p.n_atoms * (1.0 - mu) / 2.0);
}

EffectiveHamiltonian effective_hamiltonian(const ModelParams& params, Phase phase, Cutoffs cutoffs) {
  if (cutoffs.photon < 8 || cutoffs.atom < 8)
    throw Error(ErrorKind::InvalidParameter, "cutoffs must be >= 8", cutoffs.photon < 8 ? "photon" : "atom");
  EffectiveHamiltonian h;
  h.params = params;
  h.phase = phase;
  h.cutoffs = cutoffs;
  h.coefficients = effective_coefficients(params, phase);
  const auto& c = h.coefficients;
  const int na = cutoffs.atom;
  const int dim = cutoffs.photon * na;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(dim) * 7);
  auto put = [&](int i, int j, double v) {
    t.emplace_back(i, j, v);
    if (i != j) t.emplace_back(j, i, v);
  };
  for (int m = 0; m < cutoffs.photon; ++m) {
    for (int k = 0; k < na; ++k) {
      const int i = m * na + k;
      put(i, i, c.omega * m + c.omega_b * k + c.squeeze * (2.0 * k + 1.0) + c.constant);
      if (c.squeeze != 0.0 && k + 2 < na) put(i, i + 2, c.squeeze * std::sqrt((k + 1.0) * (k + 2.0)));
      if (c.coupling != 0.0 && m + 1 < cutoffs.photon) {
        const double am = std::sqrt(m + 1.0);
        if (k + 1 < na) put(i, (m + 1) * na + k + 1, c.coupling * am * std::sqrt(k + 1.0));
        if (k > 0) put(i, (m + 1) * na + k - 1, c.coupling * am * std::sqrt(static_cast<double>(k)));
      }
    }
  }
  h.matrix.resize(dim, dim);
  h.matrix.setFromTriplets(t.begin(), t.end());
  return h;
}

Eigen::MatrixXd TwoModeState::as_matrix() const {
  Eigen::MatrixXd psi(cutoffs.photon, cutoffs.atom);
  for (int m = 0; m < cutoffs.photon; ++m)
    for (int k = 0; k < cutoffs.atom; ++k) psi(m, k) = amplitudes[m * cutoffs.atom + k];
  return psi;
}

TwoModeState ground_state(const EffectiveHamiltonian& h) {
  const auto idx = even_indices(h.cutoffs);
  const Eigen::SparseMatrix<double> block = restrict_to(h.matrix, idx);
  const int n = static_cast<int>(idx.size());

  double energy = 0.0;
  Eigen::VectorXd v;
  if (n <= kDenseBlockLimit) {
    const auto eig = numerics::symmetric_eigendecomposition(Eigen::MatrixXd(block), 1);
    energy = eig.values[0];
    v = eig.vectors.col(0);
  } else {
    double shift;
    try {
      const auto w = normal_mode_frequencies(h.coefficients);
      shift = quadratic_ground_energy(h.coefficients) - 0.05 * std::max(w.omega_minus, 1e-6);
    } catch (const Error&) {
      // Gershgorin lower bound.
      shift = 0.0;
      bool first = true;
      for (int col = 0; col < block.outerSize(); ++col) {
        double diag = 0.0, off = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(block, col); it; ++it) {
          if (it.row() == col) diag += it.value();
          else off += std::abs(it.value());
        }
        shift = first ? diag - off : std::min(shift, diag - off);
        first = false;
      }
      shift -= 1.0;
    }
    Eigen::VectorXd start = Eigen::VectorXd::Constant(n, 1e-3);
    start[0] = 1.0;
    std::tie(energy, v) = inverse_iteration(block, shift, start);
  }

  TwoModeState s;
  s.cutoffs = h.cutoffs;
  s.phase = h.phase;
  s.n_atoms = h.params.n_atoms;
  s.displacement_atom = atom_displacement(h.params, h.phase);
  s.ground_energy = energy;
  s.amplitudes = Eigen::VectorXd::Zero(h.dimension());
  for (int i = 0; i < n; ++i) s.amplitudes[idx[i]] = v[i];
  s.amplitudes.normalize();
  const double big = s.amplitudes.cwiseAbs().maxCoeff();
  for (int i = 0; i < s.amplitudes.size(); ++i) {
    if (std::abs(s.amplitudes[i]) > 1e-12 * big) {
      if (s.amplitudes[i] < 0.0) s.amplitudes = -s.amplitudes;
      break;
    }
  }
  check_tail(s);
  return s;
}

TwoModeState solve_ground_state(const ModelParams& params, const ZeroTempOptions& options) {
  params.validate();
  const Phase phase = zero_t_phase(params);
  Cutoffs c = options.cutoffs;
  for (;;) {
    try {
      return ground_state(effective_hamiltonian(params, phase, c));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Cutoff || !options.escalate) throw;
      int& target = e.field() == "photon" ? c.photon : c.atom;
      if (target >= options.max_cutoff) throw;
      target = std::min(options.max_cutoff, static_cast<int>(std::ceil(target * 1.5)));
    }
  }
}

PolaritonFrequencies normal_mode_frequencies(const QuadraticCoefficients& c) {
  const double s11 = c.omega * c.omega;
  const double s22 = c.omega_b * (c.omega_b + 4.0 * c.squeeze);
  const double s12 = 2.0 * c.coupling * std::sqrt(c.omega * c.omega_b);
  const double mean = 0.5 * (s11 + s22);
  const double rad = std::hypot(0.5 * (s11 - s22), s12);
  const double lo = mean - rad, hi = mean + rad;
  if (!(lo > 0.0)) throw Error(ErrorKind::Critical, "quadratic form is not positive: soft mode at the critical point");
  return {std::sqrt(lo), std::sqrt(hi)};
}

PolaritonFrequencies polariton_frequencies(const ModelParams& params) {
  params.validate();
  const double lc = critical_coupling(params);
  if (params.lambda == lc) throw Error(ErrorKind::Critical, "lambda equals lambda_c; the soft mode frequency is zero");
  return normal_mode_frequencies(effective_coefficients(params, zero_t_phase(params)));
}

double quadratic_ground_energy(const QuadraticCoefficients& c) {
  const auto w = normal_mode_frequencies(c);
  return 0.5 * (w.omega_minus + w.omega_plus) - 0.5 * (c.omega + c.omega_b) + c.constant;
}

std::vector<double> low_spectrum(const EffectiveHamiltonian& h, int count) {
  std::vector<int> even = even_indices(h.cutoffs), odd;
  std::vector<char> is_even(h.dimension(), 0);
  for (int i : even) is_even[i] = 1;
  for (int i = 0; i < h.dimension(); ++i)
    if (!is_even[i]) odd.push_back(i);
  std::vector<double> out;
  for (const auto* idx : {&even, &odd}) {
    const Eigen::MatrixXd block(restrict_to(h.matrix, *idx));
    const int k = std::min<int>(count, static_cast<int>(idx->size()));
    const auto eig = numerics::symmetric_eigendecomposition(block, k);
    for (int i = 0; i < eig.values.size(); ++i) out.push_back(eig.values[i]);
  }
  std::sort(out.begin(), out.end());
  out.resize(std::min<std::size_t>(out.size(), count));
  return out;
}

std::vector<double> atom_diagonal_probabilities(const TwoModeState& state) {
  const Eigen::MatrixXd x = physical_amplitudes(state);
  const Eigen::VectorXd p = x.colwise().squaredNorm().transpose();
  return {p.data(), p.data() + p.size()};
}

double reduced_atom_purity(const TwoModeState& state) {
  const Eigen::MatrixXd psi = state.as_matrix();
  const Eigen::MatrixXd rho = psi.transpose() * psi;
  return rho.squaredNorm();
}

std::vector<double> reduced_atom_spectrum(const TwoModeState& state) {
  const Eigen::MatrixXd psi = state.as_matrix();
  const auto eig = numerics::symmetric_eigendecomposition(psi.transpose() * psi);
  std::vector<double> out(eig.values.data(), eig.values.data() + eig.values.size());
  std::reverse(out.begin(), out.end());
  return out;
}

double overlap_zero_t(const TwoModeState& state, const SeparableState& sep) {
  if (sep.n_atoms() != state.n_atoms)
    throw Error(ErrorKind::InvalidParameter, "separable state and ground state disagree on N", "n_atoms");
  const auto p = atom_diagonal_probabilities(state);
  const auto& lw = sep.log_weights();
  double missing = 0.0;
  for (std::size_t n = p.size(); n < lw.size(); ++n) missing += std::exp(lw[n]);
  if (missing > 1e-12) {
    std::ostringstream msg;
    msg << "atom levels end at n=" << p.size() - 1 << " but the binomial weights keep mass " << missing
        << " beyond it";
    throw Error(ErrorKind::Cutoff, msg.str(), "atom");
  }
  return diagonal_overlap(sep, p);
}

double closed_form_overlap_normal(double lambda) {
  if (!(lambda >= 0.0 && lambda < 0.5))
    throw Error(ErrorKind::Domain, "closed form is defined for 0 <= lambda < 1/2", "lambda");
  const double r = std::sqrt(1.0 - 4.0 * lambda * lambda);
  const double s = std::sqrt(1.0 + 2.0 * lambda) + std::sqrt(1.0 - 2.0 * lambda);
  return std::pow(2.0, 1.5) * std::sqrt(r) / (1.0 + 3.0 * r + 0.5 * s * s * s);
}

ScalingFit scaling_fit(const std::vector<double>& lambda_grid, const std::vector<double>& delta_values,
                       double lambda_c, int correction_order) {
  if (lambda_grid.size() != delta_values.size())
    throw Error(ErrorKind::InvalidInput, "lambda grid and delta values differ in length");
  const int n = static_cast<int>(lambda_grid.size());
  if (n < 4) throw Error(ErrorKind::InsufficientData, "scaling fit needs at least 4 points, got " + std::to_string(n));
  Eigen::VectorXd u(n), t(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(lambda_grid[i] < lambda_c)) throw Error(ErrorKind::Domain, "grid point at or above lambda_c", "lambda");
    if (!(delta_values[i] > 0.0)) throw Error(ErrorKind::Domain, "delta must be positive", "delta");
    t[i] = 1.0 - lambda_grid[i] / lambda_c;
    u[i] = -std::log(t[i]);
    y[i] = -std::log(delta_values[i]);
  }

  auto solve = [&](const Eigen::MatrixXd& a, Eigen::VectorXd& coef, Eigen::VectorXd& resid, double& stderr0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    coef = qr.solve(y);
    resid = y - a * coef;
    const int dof = n - static_cast<int>(a.cols());
    const double s2 = dof > 0 ? resid.squaredNorm() / dof : 0.0;
    const Eigen::MatrixXd cov = (a.transpose() * a).inverse() * s2;
    stderr0 = std::sqrt(std::max(0.0, cov(0, 0)));
  };

  ScalingFit fit{};
  Eigen::MatrixXd a(n, 2);
  a.col(0) = u;
  a.col(1).setOnes();
  Eigen::VectorXd coef, resid;
  solve(a, coef, resid, fit.slope_stderr);
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.residuals.assign(resid.data(), resid.data() + n);

  fit.correction_order = std::clamp(correction_order, 0, n - 3);
  Eigen::MatrixXd b(n, 2 + fit.correction_order);
  b.col(0) = u;
  b.col(1).setOnes();
  for (int j = 1; j <= fit.correction_order; ++j) b.col(1 + j) = t.array().pow(0.5 * j);
  solve(b, coef, resid, fit.exponent_stderr);
  fit.exponent = coef[0];
  fit.corrected_residuals.assign(resid.data(), resid.data() + n);
  return fit;
}

MomentSet collective_moments_zero_t(const TwoModeState& state, const ModelParams& params,
                                    BranchConvention convention) {
  params.validate();
  if (params.n_atoms != state.n_atoms)
    throw Error(ErrorKind::InvalidParameter, "state and parameters disagree on N", "n_atoms");
  const int n_atoms = params.n_atoms;
  const Eigen::MatrixXd x = physical_amplitudes(state);
  const int levels = static_cast<int>(x.cols());
  if (state.displacement_atom == 0.0 && levels > n_atoms + 1) {
    std::ostringstream msg;
    msg << "atom cutoff " << levels << " exceeds the N+1=" << n_atoms + 1 << " levels where sqrt(N - b'b) is defined";
    throw Error(ErrorKind::Cutoff, msg.str(), "atom");
  }
  const int kept = std::min(levels, n_atoms + 1);
  Eigen::MatrixXd rho = x.leftCols(kept).transpose() * x.leftCols(kept);
  const double total = x.squaredNorm();
  if (total - rho.trace() > 1e-10) {
    std::ostringstream msg;
    msg << "probability " << total - rho.trace() << " lies above n=N where sqrt(N - b'b) is undefined";
    throw Error(ErrorKind::Cutoff, msg.str(), "atom");
  }
  rho /= rho.trace();
  if (convention == BranchConvention::ParitySymmetric)
    for (int i = 0; i < kept; ++i)
      for (int j = 0; j < kept; ++j)
        if ((i + j) % 2 == 1) rho(i, j) = 0.0;

  // c[n] = <n+1|J_+|n> = sqrt((n+1)(N-n))
  std::vector<double> c(kept, 0.0);
  for (int n = 0; n < kept; ++n) c[n] = std::sqrt((n + 1.0) * (n_atoms - n));
  const double half = n_atoms / 2.0;
  double jz = 0, jz2 = 0, jp = 0, jp2 = 0, jpjm = 0, jmjp = 0;
  for (int n = 0; n < kept; ++n) {
    const double z = n - half;
    jz += z * rho(n, n);
    jz2 += z * z * rho(n, n);
    if (n > 0) jpjm += c[n - 1] * c[n - 1] * rho(n, n);
    jmjp += c[n] * c[n] * rho(n, n);
    if (n + 1 < kept) jp += c[n] * rho(n, n + 1);
    if (n + 2 < kept) jp2 += c[n] * c[n + 1] * rho(n, n + 2);
  }
  // rho is real symmetric, so <J_-> = <J_+> and <J_-^2> = <J_+^2>.
  const double nn = static_cast<double>(n_atoms);
  MomentSet m;
  m.n_atoms = n_atoms;
  m.first = {jp / nn, 0.0, jz / nn};
  m.second = {(2.0 * jp2 + jpjm + jmjp) / 4.0 / (nn * nn), (-2.0 * jp2 + jpjm + jmjp) / 4.0 / (nn * nn),
              jz2 / (nn * nn)};
  return m;
}

ZeroTempPoint evaluate_zero_t(const ModelParams& params, const TwoModeState& solved) {
  params.validate();
  const TwoModeState state = rebind(solved, params);
  ZeroTempPoint r;
  r.params = params;
  r.phase = state.phase;
  r.jz_mean_field = order_parameter_zero_t(params);
  r.a = 0.5 + r.jz_mean_field;
  const auto p = atom_diagonal_probabilities(state);
  double mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  r.jz_state = (mean - params.n_atoms / 2.0) / params.n_atoms;
  r.delta = overlap_zero_t(state, SeparableState::from_jz(r.jz_mean_field, params.n_atoms));
  r.purity = reduced_atom_purity(state);
  r.ground_energy = state.ground_energy;
  r.cutoffs_used = state.cutoffs;
  return r;
}

ZeroTempPoint evaluate_zero_t(const ModelParams& params, const ZeroTempOptions& options) {
  return evaluate_zero_t(params, solve_ground_state(params, options));
}

}  // namespace dicke
