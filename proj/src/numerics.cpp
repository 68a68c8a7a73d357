#include "dicke/numerics.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace dicke {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid_parameter";
    case ErrorKind::InvalidDistribution: return "invalid_distribution";
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Index: return "index";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::Cutoff: return "cutoff";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Critical: return "critical_point";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::Internal: return "internal";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace dicke

namespace dicke::numerics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Drop below the global maximum beyond which exp() underflows relative to it.
constexpr double kNegligibleDrop = 745.0;

struct Panel {
  double lo, hi;
  double value, abs_value, error;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& h, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = h(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = h(center - dx);
    f2[j] = h(center + dx);
    const double s = f1[j] + f2[j];
    kronrod += kWgk[j] * s;
    abs_k += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  Panel p{lo, hi, kronrod * half, abs_k * std::abs(half), 0.0};
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() * p.abs_value;
  p.error = std::max(err, round);
  return p;
}

struct AdaptiveResult {
  double value;
  double abs_value;
  double error;
  int nodes;
};

AdaptiveResult integrate_windows(const std::function<double(double)>& h, const std::vector<Window>& windows,
                                 const QuadratureSpec& spec) {
  constexpr int kInitialPanels = 16;
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  int nodes = 0;
  double value = 0.0, abs_value = 0.0, error = 0.0;
  for (const auto& w : windows) {
    const double step = (w.hi - w.lo) / kInitialPanels;
    for (int i = 0; i < kInitialPanels; ++i) {
      const double lo = w.lo + i * step;
      const double hi = (i + 1 == kInitialPanels) ? w.hi : lo + step;
      Panel p = gauss_kronrod(h, lo, hi);
      nodes += 15;
      value += p.value;
      abs_value += p.abs_value;
      error += p.error;
      queue.push(p);
    }
  }

  while (error > spec.rel_tol * abs_value && !queue.empty()) {
    if (nodes + 30 > spec.max_nodes) break;
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    queue.pop();
    Panel left = gauss_kronrod(h, worst.lo, mid);
    Panel right = gauss_kronrod(h, mid, worst.hi);
    nodes += 30;
    value += left.value + right.value - worst.value;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum in position order so the result does not depend on heap layout.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  AdaptiveResult r{0.0, 0.0, 0.0, nodes};
  for (const auto& p : panels) {
    r.value += p.value;
    r.abs_value += p.abs_value;
    r.error += p.error;
  }
  if (r.error > spec.rel_tol * r.abs_value) {
    std::ostringstream msg;
    msg << "quadrature did not reach rel_tol " << spec.rel_tol << " within " << spec.max_nodes
        << " nodes; achieved relative error estimate " << (r.abs_value > 0 ? r.error / r.abs_value : r.error);
    throw Error(ErrorKind::Numerical, msg.str(), "max_nodes");
  }
  return r;
}

double golden_max(const LogIntegrand& f, double lo, double hi) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-11 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Walk from the peak in direction dir until ln f drops below target; returns the crossing.
double find_edge(const LogIntegrand& f, double x0, double dir, double step, double target) {
  double inner = x0;
  double outer = x0 + dir * step;
  int it = 0;
  while (f(outer) >= target) {
    if (++it > 2000) throw Error(ErrorKind::Numerical, "integrand does not decay away from its maximum");
    inner = outer;
    step *= 1.5;
    outer = inner + dir * step;
  }
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (inner + outer);
    if (f(mid) >= target) inner = mid;
    else outer = mid;
  }
  return outer;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (max_nodes < 64) throw Error(ErrorKind::InvalidParameter, "max_nodes must be >= 64", "max_nodes");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3))
    throw Error(ErrorKind::InvalidParameter, "rel_tol must lie in (0, 1e-3]", "rel_tol");
  if (!(window_halfwidth_sigmas >= 1.0 && std::isfinite(window_halfwidth_sigmas)))
    throw Error(ErrorKind::InvalidParameter, "window_halfwidth_sigmas must be >= 1", "window_halfwidth_sigmas");
}

std::vector<Window> locate_windows(const LogIntegrand& f, double halfwidth_sigmas) {
  constexpr int kScanPoints = 1025;
  constexpr double kEndMargin = 60.0;
  double radius = 16.0;
  std::vector<double> xs(kScanPoints), vs(kScanPoints);
  double vmax = kNegInf;
  for (;;) {
    const double h = 2.0 * radius / (kScanPoints - 1);
    vmax = kNegInf;
    for (int i = 0; i < kScanPoints; ++i) {
      xs[i] = -radius + i * h;
      vs[i] = f(xs[i]);
      if (std::isnan(vs[i])) throw Error(ErrorKind::Numerical, "log-integrand returned NaN");
      vmax = std::max(vmax, vs[i]);
    }
    if (vmax == kNegInf) throw Error(ErrorKind::Numerical, "log-integrand is -inf on the whole scan range");
    const int n = kScanPoints;
    const bool left_ok = vs[0] < vmax - kEndMargin && vs[0] <= vs[1];
    const bool right_ok = vs[n - 1] < vmax - kEndMargin && vs[n - 1] <= vs[n - 2];
    if (left_ok && right_ok) break;
    if (radius > 1e7) throw Error(ErrorKind::Numerical, "log-integrand does not decay within |x| < 1e7");
    radius *= 2.0;
  }

  const double h = xs[1] - xs[0];
  const double drop = 0.5 * halfwidth_sigmas * halfwidth_sigmas;
  std::vector<Window> raw;
  for (int i = 1; i + 1 < kScanPoints; ++i) {
    if (!(vs[i] > vs[i - 1] && vs[i] >= vs[i + 1])) continue;
    if (vs[i] < vmax - kNegligibleDrop) continue;
    const double xp = golden_max(f, xs[i - 1], xs[i + 1]);
    const double vp = std::max(f(xp), vs[i]);
    const double xpeak = f(xp) >= vs[i] ? xp : xs[i];
    // Initial walking step from the local curvature, bounded by the scan spacing.
    const double fd = 1e-3 * h;
    const double curv = -(f(xpeak + fd) - 2.0 * vp + f(xpeak - fd)) / (fd * fd);
    double step = (curv > 0.0 && std::isfinite(curv)) ? std::min(h, 1.0 / std::sqrt(curv)) : h;
    step = std::max(step, 1e-9 * (1.0 + std::abs(xpeak)));
    const double target = vp - drop;
    raw.push_back({find_edge(f, xpeak, -1.0, step, target), find_edge(f, xpeak, 1.0, step, target), xpeak, vp});
  }
  if (raw.empty()) throw Error(ErrorKind::Numerical, "no interior maximum of the log-integrand found");

  std::sort(raw.begin(), raw.end(), [](const Window& a, const Window& b) { return a.lo < b.lo; });
  std::vector<Window> merged;
  for (const auto& w : raw) {
    if (!merged.empty() && w.lo <= merged.back().hi) {
      auto& m = merged.back();
      m.hi = std::max(m.hi, w.hi);
      if (w.peak_log > m.peak_log) {
        m.peak_log = w.peak_log;
        m.peak_x = w.peak_x;
      }
    } else {
      merged.push_back(w);
    }
  }
  return merged;
}

LogWeightedIntegrator::LogWeightedIntegrator(LogIntegrand log_w, QuadratureSpec spec)
    : log_w_(std::move(log_w)), spec_(spec) {
  spec_.validate();
  windows_ = locate_windows(log_w_, spec_.window_halfwidth_sigmas);
  scale_ = kNegInf;
  for (const auto& w : windows_) scale_ = std::max(scale_, w.peak_log);
  const double scale = scale_;
  const auto& lw = log_w_;
  AdaptiveResult r = integrate_windows([&](double x) { return std::exp(lw(x) - scale); }, windows_, spec_);
  if (!(r.value > 0.0)) throw Error(ErrorKind::Numerical, "weight integral is not positive");
  weight_integral_ = r.value;
  total_ = {scale_ + std::log(r.value), r.error / r.value, r.nodes, static_cast<int>(windows_.size())};
}

LogIntegralResult LogWeightedIntegrator::log_integral() const { return total_; }

double LogWeightedIntegrator::average(const std::function<double(double)>& g) const {
  const double scale = scale_;
  const auto& lw = log_w_;
  AdaptiveResult r =
      integrate_windows([&](double x) { return std::exp(lw(x) - scale) * g(x); }, windows_, spec_);
  return r.value / weight_integral_;
}

LogIntegralResult log_integral(const LogIntegrand& log_f, const QuadratureSpec& spec) {
  return LogWeightedIntegrator(log_f, spec).log_integral();
}

double find_root(const std::function<double(double)>& f, std::pair<double, double> bracket, int max_iterations) {
  double lo = std::min(bracket.first, bracket.second);
  double hi = std::max(bracket.first, bracket.second);
  double flo = f(lo), fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) throw Error(ErrorKind::Numerical, "function is NaN at bracket endpoint");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::Bracket, msg.str());
  }
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= 1e-12 * std::max(std::abs(lo), std::abs(hi)) || hi - lo <= 1e-300) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "bisection did not converge; final bracket [" << lo << ", " << hi << "]";
  throw Error(ErrorKind::Numerical, msg.str());
}

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_sum_exp(const std::vector<double>& values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double log_binomial(long n, long k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_two_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace dicke::numerics
