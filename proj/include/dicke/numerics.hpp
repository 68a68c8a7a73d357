#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace dicke::numerics {

/** @brief Controls for the windowed adaptive quadrature. */
struct QuadratureSpec {
  int max_nodes = 20000;
  double rel_tol = 1e-10;
  double window_halfwidth_sigmas = 8.0;

  void validate() const;
};

// x -> ln f(x); may return -inf where f vanishes.
using LogIntegrand = std::function<double(double)>;

struct Window {
  double lo;
  double hi;
  double peak_x;
  double peak_log;
};

struct LogIntegralResult {
  double log_value;
  double rel_error;
  int nodes;
  int windows;
};

/**
 * @brief Integration windows around the maxima of a log-integrand.
 *
 * A window extends from a located maximum until ln f has dropped by
 * halfwidth_sigmas^2/2, which is +-k sigma for a Gaussian peak.  Windows that
 * overlap are merged.  Maxima lying more than 745 below the global maximum are
 * dropped since they cannot contribute in double precision.
 */
std::vector<Window> locate_windows(const LogIntegrand& log_f, double halfwidth_sigmas);

/**
 * @brief Integrals against a fixed positive weight exp(log_w(x)).
 *
 * Windows are located once; every integral reuses them.  Each window is
 * integrated by adaptive Gauss-Kronrod (7/15) bisection with the integrand
 * rescaled by the window peak, and windows are combined with log-sum-exp.
 */
class LogWeightedIntegrator {
 public:
  LogWeightedIntegrator(LogIntegrand log_w, QuadratureSpec spec);

  // ln of the integral of exp(log_w).
  LogIntegralResult log_integral() const;

  // E_w[g] = int exp(log_w) g / int exp(log_w).
  double average(const std::function<double(double)>& g) const;

  const std::vector<Window>& windows() const { return windows_; }

 private:
  LogIntegrand log_w_;
  QuadratureSpec spec_;
  std::vector<Window> windows_;
  double scale_ = 0.0;
  LogIntegralResult total_{};
  double weight_integral_ = 0.0;  // scaled by exp(-scale_)
};

LogIntegralResult log_integral(const LogIntegrand& log_f, const QuadratureSpec& spec);

/**
 * @brief Bisection on a sign-changing bracket.
 *
 * Stops when the bracket width falls below 1e-12 relative to the larger
 * endpoint magnitude (absolute 1e-300 floor).  Throws Bracket when the
 * endpoint values have the same sign and Numerical when max_iterations is hit.
 */
double find_root(const std::function<double(double)>& f, std::pair<double, double> bracket,
                 int max_iterations = 400);

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/**
 * @brief Dense symmetric eigendecomposition (LAPACK dsyevr).
 *
 * With count > 0 only the lowest count pairs are computed.  Only the lower
 * triangle of the input is read.
 */
EigenDecomposition symmetric_eigendecomposition(const Eigen::MatrixXd& matrix, int count = 0);

double log_sum_exp(double a, double b);
double log_sum_exp(const std::vector<double>& values);

// ln C(n, k) via lgamma.
double log_binomial(long n, long k);

// ln(2 cosh y) without overflow.
double log_two_cosh(double y);

}  // namespace dicke::numerics
