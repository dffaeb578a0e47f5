#include "wfa/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wfa {

namespace {

Eigen::VectorXd vec_row_flat(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  Eigen::VectorXd v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(i * n + j) = M(i, j);
  return v;
}

Eigen::MatrixXd unvec_row_flat(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = v(i * n + j);
  return M;
}

double fixed_point_residual(const WeightedAutomaton& A, const Eigen::MatrixXd& P,
                            const Eigen::MatrixXd& Q) {
  Eigen::MatrixXd rp = A.beta() * A.beta().transpose() - P;
  Eigen::MatrixXd rq = A.alpha() * A.alpha().transpose() - Q;
  for (const Eigen::MatrixXd& T : A.transitions()) {
    rp += T * P * T.transpose();
    rq += T.transpose() * Q * T;
  }
  return std::max(rp.cwiseAbs().maxCoeff(), rq.cwiseAbs().maxCoeff());
}

}  // namespace

Gramians gramians(const WeightedAutomaton& A) {
  const HankelBoundedness cert = hankel_bounded(A);
  if (!cert.bounded)
    throw DomainError(
        "Hankel operator is not bounded under the Kronecker criterion (spectral radius " +
        std::to_string(cert.kron_spectral_radius) + " >= 1); the Gramian fixed points diverge");

  const int n = A.num_states();
  Eigen::MatrixXd P, Q;
  if (n * n <= 400) {
    const Eigen::MatrixXd M = kronecker_self_sum(A);
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    P = unvec_row_flat(lu.solve(vec_row_flat(A.beta() * A.beta().transpose())), n);
    Q = unvec_row_flat(lu.transpose().solve(vec_row_flat(A.alpha() * A.alpha().transpose())), n);
  } else {
    P = Eigen::MatrixXd::Zero(n, n);
    Q = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd bb = A.beta() * A.beta().transpose();
    const Eigen::MatrixXd aa = A.alpha() * A.alpha().transpose();
    bool converged = false;
    for (int it = 0; it < 100'000; ++it) {
      Eigen::MatrixXd Pn = bb;
      Eigen::MatrixXd Qn = aa;
      for (const Eigen::MatrixXd& T : A.transitions()) {
        Pn += T * P * T.transpose();
        Qn += T.transpose() * Q * T;
      }
      const double delta =
          std::max((Pn - P).cwiseAbs().maxCoeff(), (Qn - Q).cwiseAbs().maxCoeff());
      P.swap(Pn);
      Q.swap(Qn);
      if (delta <= 1e-13 * std::max(1.0, P.cwiseAbs().maxCoeff())) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericError("Gramian fixed-point iteration did not converge");
  }
  // Rounding can leave a tiny skew part.
  P = 0.5 * (P + P.transpose()).eval();
  Q = 0.5 * (Q + Q.transpose()).eval();
  const double residual = fixed_point_residual(A, P, Q);
  const double scale = std::max({1.0, P.cwiseAbs().maxCoeff(), Q.cwiseAbs().maxCoeff()});
  if (!(residual <= 1e-10 * scale))
    throw NumericError("Gramian solve residual " + std::to_string(residual) +
                       " exceeds tolerance");
  return {std::move(P), std::move(Q), residual};
}

HankelSpectrum hankel_singular_values(const WeightedAutomaton& A) {
  Gramians g = gramians(A);
  const int n = A.num_states();

  // Eigenvalues of P Q through the symmetric product L' Q L with P = L L';
  // this keeps the spectrum real and nonnegative under rounding.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(g.reachability);
  Eigen::MatrixXd L = ep.eigenvectors() *
                      ep.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  Eigen::MatrixXd symmetric = L.transpose() * g.observability * L;
  symmetric = 0.5 * (symmetric + symmetric.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric);

  HankelSpectrum spectrum;
  spectrum.reachability = std::move(g.reachability);
  spectrum.observability = std::move(g.observability);
  spectrum.gramian_residual = g.residual;
  spectrum.singular_values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double lambda = std::max(0.0, es.eigenvalues()(n - 1 - i));
    spectrum.singular_values[static_cast<std::size_t>(i)] = std::sqrt(lambda);
  }
  const double top = spectrum.singular_values.empty() ? 0.0 : spectrum.singular_values[0];
  for (double& s : spectrum.singular_values) {
    if (s < 1e-10 * top) s = 0.0;
    if (s > 0.0) ++spectrum.numerical_rank;
  }
  return spectrum;
}

double schatten_hankel_norm(const WeightedAutomaton& A, double p) {
  if (!(p >= 1.0)) throw DomainError("Schatten norms require p >= 1");
  const HankelSpectrum spectrum = hankel_singular_values(A);
  if (p == kInfinity)
    return spectrum.singular_values.empty() ? 0.0 : spectrum.singular_values[0];
  double sum = 0.0;
  for (double s : spectrum.singular_values)
    sum += (p == 1.0) ? s : ((p == 2.0) ? s * s : std::pow(s, p));
  return std::pow(sum, 1.0 / p);
}

std::vector<Str> enumerate_strings(int alphabet_size, int max_length,
                                   std::uint64_t max_strings) {
  if (alphabet_size < 1) throw DomainError("alphabet size must be >= 1");
  if (max_length < 0) throw DomainError("max_length must be >= 0");
  std::vector<Str> out;
  out.push_back({});
  for (int t = 1; t <= max_length; ++t) {
    // Lexicographic odometer, last position fastest.
    Str x(static_cast<std::size_t>(t), 0);
    for (;;) {
      if (out.size() >= max_strings)
        throw ResourceError("string enumeration exceeds the guard of " +
                            std::to_string(max_strings));
      out.push_back(x);
      int pos = t - 1;
      while (pos >= 0 && ++x[static_cast<std::size_t>(pos)] == alphabet_size)
        x[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

TruncatedHankel truncated_hankel(const WeightedAutomaton& A, int prefix_len, int suffix_len,
                                 std::uint64_t max_entries) {
  const int k = A.alphabet().size();
  std::vector<Str> prefixes = enumerate_strings(k, prefix_len, max_entries);
  std::vector<Str> suffixes = enumerate_strings(k, suffix_len, max_entries);
  const std::uint64_t entries =
      static_cast<std::uint64_t>(prefixes.size()) * static_cast<std::uint64_t>(suffixes.size());
  if (entries > max_entries)
    throw ResourceError("truncated Hankel block needs " + std::to_string(entries) +
                        " entries, above the guard of " + std::to_string(max_entries));

  TruncatedHankel th;
  th.block.resize(static_cast<Eigen::Index>(prefixes.size()),
                  static_cast<Eigen::Index>(suffixes.size()));

  // Forward state per prefix, built by the same left-to-right chain as
  // evaluate() so each block entry is bit-identical to evaluate(A, uv).
  std::vector<Eigen::RowVectorXd> forward(prefixes.size());
  forward[0] = A.alpha().transpose();
  for (std::size_t i = 1; i < prefixes.size(); ++i) {
    const Str& u = prefixes[i];
    Str parent(u.begin(), u.end() - 1);
    const std::size_t parent_index =
        static_cast<std::size_t>(std::lower_bound(prefixes.begin(), prefixes.end(), parent,
                                                  [](const Str& a, const Str& b) {
                                                    if (a.size() != b.size())
                                                      return a.size() < b.size();
                                                    return a < b;
                                                  }) -
                                 prefixes.begin());
    forward[i] = forward[parent_index] * A.transition(u.back());
  }
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    for (std::size_t j = 0; j < suffixes.size(); ++j) {
      Eigen::RowVectorXd h = forward[i];
      for (Symbol a : suffixes[j]) h = h * A.transition(a);
      th.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h * A.beta();
    }
  }
  th.prefixes = std::move(prefixes);
  th.suffixes = std::move(suffixes);
  return th;
}

std::vector<double> truncated_hankel_svd(const WeightedAutomaton& A, int prefix_len,
                                         int suffix_len, std::uint64_t max_entries) {
  const TruncatedHankel th = truncated_hankel(A, prefix_len, suffix_len, max_entries);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(th.block);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

}  // namespace wfa
