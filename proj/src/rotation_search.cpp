#include "fcontact/rotation_search.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fcontact {

namespace {

constexpr double kRowSumFloor = 1e-8;
constexpr double kSkewTol = 1e-10;
constexpr double kTermTol = 1e-15;

void require_square(const Eigen::MatrixXd& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw DimensionError(std::string(what) + ": matrix must be square");
}

Eigen::MatrixXd skew_from_params(const Eigen::VectorXd& x, int s) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(s, s);
  int k = 0;
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b) {
      X(a, b) = x[k];
      X(b, a) = -x[k];
      ++k;
    }
  return X;
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& X) {
  require_square(X, "expm");
  const int n = static_cast<int>(X.rows());
  const double norm = X.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd scaled = X / std::ldexp(1.0, squarings);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < kTermTol) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Eigen::VectorXd row_sums(const Eigen::MatrixXd& A) {
  require_square(A, "row_sums");
  return A.rowwise().sum();
}

Eigen::VectorXd v_vector(int s) {
  if (s < 2) throw DimensionError("v_vector requires s >= 2");
  Eigen::VectorXd v = Eigen::VectorXd::Constant(s, -1.0 / (s - 1));
  v[s - 1] = 1.0;
  return v;
}

Eigen::VectorXd h_map(const Eigen::MatrixXd& A) {
  require_square(A, "h_map");
  const int s = static_cast<int>(A.rows());
  if (s < 2) throw DimensionError("h_map requires s >= 2");
  const Eigen::VectorXd c = row_sums(A);
  for (int i = 0; i < s; ++i) {
    if (std::abs(c[i]) < kRowSumFloor) {
      std::ostringstream os;
      os << "h_map: row sum c_" << (i + 1) << " = " << c[i]
         << " is below the floor " << kRowSumFloor;
      throw PreconditionError(os.str());
    }
  }
  return A.transpose() * c.cwiseInverse().asDiagonal() * v_vector(s);
}

Eigen::VectorXd dh_identity(const Eigen::MatrixXd& X) {
  require_square(X, "dh_identity");
  const int s = static_cast<int>(X.rows());
  if (s < 2) throw DimensionError("dh_identity requires s >= 2");
  const double skew_defect = (X + X.transpose()).cwiseAbs().maxCoeff();
  if (skew_defect > kSkewTol) {
    std::ostringstream os;
    os << "dh_identity: input is not skew-symmetric, |X + X^T|_max = " << skew_defect;
    throw PreconditionError(os.str());
  }
  const Eigen::VectorXd v = v_vector(s);
  return X.transpose() * v - row_sums(X).asDiagonal() * v;
}

int image_rank(int s) {
  if (s < 2) throw DimensionError("image_rank requires s >= 2");
  const int m = s * (s - 1) / 2;
  Eigen::MatrixXd images(s, m);
  int k = 0;
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b) {
      Eigen::MatrixXd X = Eigen::MatrixXd::Zero(s, s);
      X(a, b) = 1.0;
      X(b, a) = -1.0;
      const Eigen::VectorXd img = dh_identity(X);
      if (std::abs(img.sum()) > 1e-12)
        throw Error("image_rank: differential image left the trace-zero hyperplane");
      images.col(k++) = img;
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(images);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10) ++rank;
  if (rank < s - 1) {
    std::ostringstream os;
    os << "image_rank: differential has rank " << rank << " < " << (s - 1)
       << " = dim V at s = " << s;
    throw PreconditionError(os.str());
  }
  return rank;
}

TargetVector::TargetVector(Eigen::VectorXd u) : u_(std::move(u)) {
  if (u_.size() < 2) throw DimensionError("target vector requires s >= 2");
  if (std::abs(u_.sum()) > 1e-10) {
    std::ostringstream os;
    os << "target is not in the trace-zero hyperplane: sum = " << u_.sum();
    throw PreconditionError(os.str());
  }
}

RotationSolution solve_rotation(const TargetVector& u, const RotationSolveOptions& opts) {
  const int s = u.s();
  const int m = s * (s - 1) / 2;
  const Eigen::VectorXd& target = u.coords();

  // Residual of the candidate with skew parameters x; +inf when the row-sum
  // floor is violated along the way.
  auto residual_of = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::MatrixXd A = expm(skew_from_params(x, s));
    return h_map(A) - target;
  };
  auto cost_of = [&](const Eigen::VectorXd& x) -> double {
    try {
      return residual_of(x).norm();
    } catch (const PreconditionError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::mt19937_64 gen(opts.seed);
  auto uniform = [&gen](double lo, double hi) {
    return lo + (static_cast<double>(gen() >> 11) * 0x1.0p-53) * (hi - lo);
  };

  double best_cost = std::numeric_limits<double>::infinity();
  RotationSolution best;

  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    if (attempt > 0)
      for (int i = 0; i < m; ++i) x[i] = uniform(-0.5, 0.5);

    double cost = cost_of(x);
    int iterations = 0;
    for (; iterations < opts.max_iterations && std::isfinite(cost); ++iterations) {
      Eigen::VectorXd r;
      try {
        r = residual_of(x);
      } catch (const PreconditionError&) {
        break;
      }
      if (r.cwiseAbs().maxCoeff() <= opts.residual_tol) break;

      Eigen::MatrixXd J(s, m);
      bool jacobian_ok = true;
      for (int k = 0; k < m; ++k) {
        Eigen::VectorXd xk = x;
        xk[k] += opts.fd_step;
        try {
          J.col(k) = (residual_of(xk) - r) / opts.fd_step;
        } catch (const PreconditionError&) {
          jacobian_ok = false;
          break;
        }
      }
      if (!jacobian_ok) break;

      Eigen::VectorXd step = J.colPivHouseholderQr().solve(Eigen::VectorXd(-r));
      if (!step.allFinite() || step.norm() == 0.0) break;
      // Trust region: every rotation has a skew logarithm of modest norm, so
      // there is no reason to chase iterates far from the origin.
      if (step.norm() > 2.0) step *= 2.0 / step.norm();

      // Damping: halve the step until the residual norm decreases inside the
      // search ball.
      double alpha = 1.0;
      bool improved = false;
      for (int halvings = 0; halvings < 30; ++halvings) {
        const Eigen::VectorXd trial_x = x + alpha * step;
        const double trial =
            trial_x.norm() <= 4.0 * M_PI ? cost_of(trial_x)
                                         : std::numeric_limits<double>::infinity();
        if (trial < cost) {
          x = trial_x;
          cost = trial;
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) break;
    }

    try {
      const Eigen::MatrixXd X = skew_from_params(x, s);
      const Eigen::MatrixXd A = expm(X);
      const Eigen::VectorXd r = h_map(A) - target;
      const double res = r.cwiseAbs().maxCoeff();
      if (r.norm() < best_cost) {
        best_cost = r.norm();
        best.A = A;
        best.skew = X;
        best.row_sums = row_sums(A);
        best.residual = res;
        best.iterations = iterations;
        best.restarts_used = attempt;
      }
      if (res <= opts.residual_tol) return best;
    } catch (const PreconditionError&) {
      // row-sum floor violated at the final iterate; try the next restart
    }
  }

  std::ostringstream os;
  os << "solve_rotation did not converge after " << opts.max_iterations
     << " iterations and " << opts.restarts << " restarts; best residual "
     << (std::isfinite(best_cost) ? best.residual
                                  : std::numeric_limits<double>::infinity());
  throw NoConvergenceError(os.str(), std::isfinite(best_cost)
                                         ? best.residual
                                         : std::numeric_limits<double>::infinity());
}

}  // namespace fcontact
