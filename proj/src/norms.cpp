#include "wfa/norms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "wfa/rng.hpp"

namespace wfa {

HolderPair HolderPair::from_p(double p) {
  if (p == 1.0) return {1.0, kInfinity};
  if (p == 2.0) return {2.0, 2.0};
  if (p == kInfinity) return {kInfinity, 1.0};
  throw DomainError("only p in {1, 2, inf} is supported");
}

double vector_norm(const Eigen::VectorXd& v, double p) {
  if (p == 1.0) return v.lpNorm<1>();
  if (p == 2.0) return v.norm();
  if (p == kInfinity) return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
  if (!(p >= 1.0)) throw DomainError("vector norm requires p >= 1");
  return std::pow(v.array().abs().pow(p).sum(), 1.0 / p);
}

double induced_matrix_norm(const Eigen::MatrixXd& M, double q) {
  if (q == 1.0) return M.cwiseAbs().colwise().sum().maxCoeff();
  if (q == kInfinity) return M.cwiseAbs().rowwise().sum().maxCoeff();
  if (q == 2.0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
  }
  throw DomainError("induced matrix norms are computed only for q in {1, 2, inf}");
}

double wfa_norm(const WeightedAutomaton& A, const HolderPair& hp) {
  double value = std::max(vector_norm(A.alpha(), hp.p), vector_norm(A.beta(), hp.q));
  for (const Eigen::MatrixXd& M : A.transitions())
    value = std::max(value, induced_matrix_norm(M, hp.q));
  return value;
}

Eigen::MatrixXd kronecker_self_sum(const WeightedAutomaton& A) {
  const int n = A.num_states();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
  for (const Eigen::MatrixXd& T : A.transitions()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M.block(i * n, j * n, n, n) += T(i, j) * T;
  }
  return M;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw DomainError("spectral radius needs a square matrix");
  const int d = static_cast<int>(M.rows());
  if (d <= 400) {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(M, /*computeEigenvectors=*/false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  // Power iteration with a deterministic start.
  Rng rng(0x5eed5eedULL);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.next_uniform(0.5, 1.5);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 10'000; ++it) {
    Eigen::VectorXd w = M * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = norm;
    w /= norm;
    if (std::abs(next - estimate) <= 1e-10 * std::max(1.0, std::abs(next)) && it > 2) {
      return next;
    }
    estimate = next;
    v = w;
  }
  return estimate;
}

double kron_sum_spectral_radius(const WeightedAutomaton& A) {
  return spectral_radius(kronecker_self_sum(A));
}

HankelBoundedness hankel_bounded(const WeightedAutomaton& A) {
  const double rho = kron_sum_spectral_radius(A);
  return {rho < 1.0, rho};
}

FunctionNormResult l2_norm_squared(const WeightedAutomaton& A) {
  const int n = A.num_states();
  const Eigen::MatrixXd M = kronecker_self_sum(A);
  const double rho = spectral_radius(M);
  if (rho < 1.0) {
    // vec convention: (alpha (x) alpha)' (I - M)^-1 (beta (x) beta).
    Eigen::VectorXd av(n * n), bv(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        av(i * n + j) = A.alpha()(i) * A.alpha()(j);
        bv(i * n + j) = A.beta()(i) * A.beta()(j);
      }
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    Eigen::VectorXd x = lu.solve(bv);
    const double residual = (lhs * x - bv).cwiseAbs().maxCoeff();
    if (!x.allFinite() || residual > 1e-6 * std::max(1.0, bv.cwiseAbs().maxCoeff()))
      throw NumericError("linear solve for the squared 2-norm failed (residual " +
                         std::to_string(residual) + ")");
    FunctionNormResult result;
    result.value = std::max(0.0, av.dot(x));
    result.status = NormStatus::kExact;
    return result;
  }
  // The series may still converge through cancellation; report a truncated
  // lower bound instead of deciding.
  const int fallback_length = 24;
  FunctionNormResult truncated =
      lp_norm_truncated(A, 2.0, fallback_length, /*max_strings=*/2'000'000);
  FunctionNormResult result;
  result.value = truncated.value * truncated.value;
  result.status = NormStatus::kTruncatedLowerBound;
  result.truncation_length = truncated.truncation_length;
  return result;
}

namespace {

// Smallest supported-pair automaton norm; the contraction radius used for
// geometric tail certificates.
double best_weight_radius(const WeightedAutomaton& A) {
  double r = kInfinity;
  for (double p : {1.0, 2.0, kInfinity}) r = std::min(r, wfa_norm(A, HolderPair::from_p(p)));
  return r;
}

}  // namespace

FunctionNormResult lp_norm_truncated(const WeightedAutomaton& A, double p, int max_length,
                                     std::uint64_t max_strings) {
  if (!(p >= 1.0)) throw DomainError("function norms require p >= 1");
  if (max_length < 0) throw DomainError("max_length must be >= 0");
  const int k = A.alphabet().size();

  double count = 0.0;
  double layer = 1.0;
  for (int t = 0; t <= max_length; ++t, layer *= k) {
    count += layer;
    if (count > static_cast<double>(max_strings))
      throw ResourceError("norm enumeration to length " + std::to_string(max_length) + " needs " +
                          std::to_string(count) + " strings, above the guard of " +
                          std::to_string(max_strings));
  }

  // DFS over the prefix trie, carrying alpha' A_prefix.
  double power_sum = 0.0;  // sum |f|^p (finite p)
  double sup = 0.0;        // max |f| (p = inf)
  const bool finite_p = p != kInfinity;
  struct Frame {
    Eigen::RowVectorXd state;
    int depth;
    int next_symbol;
  };
  std::vector<Frame> stack;
  stack.push_back({A.alpha().transpose(), 0, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next_symbol == 0) {
      const double fx = top.state * A.beta();
      const double a = std::abs(fx);
      if (finite_p)
        power_sum += (p == 2.0) ? a * a : ((p == 1.0) ? a : std::pow(a, p));
      else
        sup = std::max(sup, a);
    }
    if (top.depth == max_length || top.next_symbol >= k) {
      stack.pop_back();
      continue;
    }
    const Symbol a = top.next_symbol++;
    stack.push_back({top.state * A.transition(a), top.depth + 1, 0});
  }

  FunctionNormResult result;
  result.status = NormStatus::kTruncatedLowerBound;
  result.truncation_length = max_length;
  result.value = finite_p ? std::pow(power_sum, 1.0 / p) : sup;

  // Geometric tail certificate from |f(x)| <= r^(|x|+2) when the weight
  // radius is contractive.
  const double r = best_weight_radius(A);
  if (r < 1.0) {
    if (finite_p) {
      const double ratio = k * std::pow(r, p);
      if (ratio < 1.0) {
        const double first = std::pow(static_cast<double>(k), max_length + 1) *
                             std::pow(r, p * (max_length + 3.0));
        result.tail_bound = first / (1.0 - ratio);
      }
    } else {
      result.tail_bound = std::pow(r, max_length + 3.0);
    }
  }
  return result;
}

}  // namespace wfa
