#include "exchboot/function_classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exchboot {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_scalar(const Sample& data, const char* what) {
  if (data.dim != 1) {
    throw std::invalid_argument(std::string(what) + " class needs scalar data, got dimension " +
                                std::to_string(data.dim));
  }
}

double lp_norm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Eigen::MatrixXd centered_scatter(const Sample& data) {
  const std::size_t n = data.size(), d = data.dim;
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) = data.values[i * d + j];
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  return x.transpose() * x;
}

double max_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

// sup of a^T S a over ||a||_q <= 1 where q is the conjugate of p.
WeakVariance dual_ball_variance(const Eigen::MatrixXd& scatter, double p) {
  const Eigen::Index d = scatter.rows();
  if (p == 2.0) return {max_eigenvalue(scatter), true};
  if (std::isinf(p)) {
    // q = 1: the maximum of a convex form over the cross-polytope sits at a vertex.
    return {std::max(0.0, scatter.diagonal().maxCoeff()), true};
  }
  if (p == 1.0 && d <= 20) {
    // q = inf: enumerate the cube's vertices up to a global sign.
    double best = 0.0;
    const std::uint64_t patterns = d == 0 ? 0 : (std::uint64_t{1} << (d - 1));
    Eigen::VectorXd a(d);
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      a(0) = 1.0;
      for (Eigen::Index j = 1; j < d; ++j) a(j) = ((mask >> (j - 1)) & 1U) ? -1.0 : 1.0;
      best = std::max(best, a.dot(scatter * a));
    }
    return {best, true};
  }
  const double q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  auto normalize = [q](Eigen::VectorXd a) {
    std::vector<double> tmp(a.data(), a.data() + a.size());
    const double nrm = lp_norm(tmp, q);
    if (nrm > 0.0) a /= nrm;
    return a;
  };
  double best = scatter.diagonal().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter);
  Eigen::VectorXd a = normalize(solver.eigenvectors().col(d - 1));
  for (int it = 0; it < 200; ++it) {
    best = std::max(best, a.dot(scatter * a));
    Eigen::VectorXd next = normalize(scatter * a);
    if ((next - a).norm() < 1e-13) break;
    a = next;
  }
  return {std::max(0.0, best), false};
}

double lipschitz_pattern_value(const std::vector<double>& gaps, const std::vector<int>& signs) {
  double t = 0.0, sum = 0.0, sumsq = 0.0;
  const double n = static_cast<double>(gaps.size() + 1);
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    t += signs[k] * gaps[k];
    sum += t;
    sumsq += t * t;
  }
  return sumsq - sum * sum / n;
}

WeakVariance lipschitz_variance(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n < 2) return {0.0, true};
  std::vector<double> gaps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) gaps[k] = sorted[k + 1] - sorted[k];
  std::vector<int> signs(n - 1, 1);
  if (n <= 20) {
    // The objective is convex in the increments, so the supremum over the box
    // |increment_k| <= gap_k is attained at a sign pattern; fix the first sign.
    double best = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << (n - 2);
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      for (std::size_t k = 1; k + 1 < n; ++k) signs[k] = ((mask >> (k - 1)) & 1U) ? -1 : 1;
      best = std::max(best, lipschitz_pattern_value(gaps, signs));
    }
    return {best, true};
  }
  // Single-flip hill climbing from a few starts; a lower bound only.
  double best = 0.0;
  for (int start = 0; start < 3; ++start) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      signs[k] = start == 0 ? 1 : start == 1 ? (k % 2 == 0 ? 1 : -1) : (k < (n - 1) / 2 ? 1 : -1);
    }
    double cur = lipschitz_pattern_value(gaps, signs);
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        signs[k] = -signs[k];
        const double v = lipschitz_pattern_value(gaps, signs);
        if (v > cur + 1e-15 * std::max(1.0, cur)) {
          cur = v;
          improved = true;
        } else {
          signs[k] = -signs[k];
        }
      }
    }
    best = std::max(best, cur);
  }
  return {best, false};
}

}  // namespace

void validate_sample(const Sample& s) {
  if (s.dim == 0) throw std::invalid_argument("sample dimension must be positive");
  if (s.values.size() % s.dim != 0)
    throw std::invalid_argument("sample values are not a whole number of points");
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!std::isfinite(s.values[i]))
      throw std::invalid_argument("sample contains a non-finite value at point " +
                                  std::to_string(i / s.dim));
  }
  if (s.group_split && (*s.group_split == 0 || *s.group_split >= s.size()))
    throw std::invalid_argument("group split must lie strictly inside the sample");
}

Sample scalar_sample(std::vector<double> xs) {
  Sample s;
  s.values = std::move(xs);
  s.dim = 1;
  validate_sample(s);
  return s;
}

Sample concat_samples(const Sample& x, const Sample& y) {
  if (x.dim != y.dim)
    throw std::invalid_argument("samples have different dimensions (" + std::to_string(x.dim) +
                                " vs " + std::to_string(y.dim) + ")");
  if (x.size() == 0 || y.size() == 0) throw std::invalid_argument("both samples must be non-empty");
  Sample z;
  z.dim = x.dim;
  z.values = x.values;
  z.values.insert(z.values.end(), y.values.begin(), y.values.end());
  z.group_split = x.size();
  validate_sample(z);
  return z;
}

FiniteClass make_finite_class(Eigen::MatrixXd values, bool symmetrized) {
  if (values.rows() == 0) throw std::invalid_argument("finite class needs at least one row");
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v) || v < -1.0 || v > 1.0)
        throw std::invalid_argument("finite class value outside [-1, 1] at row " +
                                    std::to_string(i + 1) + ", column " + std::to_string(j + 1));
    }
  return FiniteClass{std::move(values), symmetrized};
}

KernelBallClass make_kernel_ball(Eigen::MatrixXd gram) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram matrix must be square");
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if (!gram.allFinite()) throw std::invalid_argument("Gram matrix has non-finite entries");
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Gram matrix is not symmetric");
  if (gram.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const double trace = gram.trace();
    if (solver.eigenvalues().minCoeff() < -1e-8 * std::max(trace, 1e-300))
      throw std::invalid_argument("Gram matrix is not positive semidefinite");
  }
  double kb = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) kb = std::max(kb, std::sqrt(std::max(0.0, gram(i, i))));
  return KernelBallClass{std::move(gram), kb};
}

bool is_symmetric_class(const FunctionClass& cls) {
  if (const auto* f = std::get_if<FiniteClass>(&cls)) return f->symmetrized;
  return true;
}

SupEvaluator::SupEvaluator(const FunctionClass& cls, const Sample& data)
    : cls_(&cls), data_(&data), n_(data.size()) {
  validate_sample(data);
  std::visit(overloaded{
                 [&](const FiniteClass& f) {
                   if (static_cast<std::size_t>(f.values.cols()) != n_)
                     throw std::invalid_argument("finite class has " +
                                                 std::to_string(f.values.cols()) +
                                                 " columns but the sample has " +
                                                 std::to_string(n_) + " points");
                 },
                 [&](const KernelBallClass& k) {
                   if (static_cast<std::size_t>(k.gram.rows()) != n_)
                     throw std::invalid_argument("Gram matrix size does not match the sample");
                 },
                 [&](const DualBallClass& b) {
                   if (!(b.p >= 1.0)) throw std::invalid_argument("dual-ball exponent p must be >= 1");
                 },
                 [&](const HalfLinesClass&) { require_scalar(data, "half-lines"); },
                 [&](const Lipschitz1DClass&) { require_scalar(data, "Lipschitz"); },
             },
             cls);
  if (std::holds_alternative<HalfLinesClass>(cls) || std::holds_alternative<Lipschitz1DClass>(cls)) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return data.values[a] < data.values[b]; });
    group_end_.assign(n_, 0);
    gaps_.assign(n_ == 0 ? 0 : n_ - 1, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      const bool last = k + 1 == n_ || data.values[order_[k + 1]] != data.values[order_[k]];
      group_end_[k] = last ? 1 : 0;
      if (k + 1 < n_) gaps_[k] = data.values[order_[k + 1]] - data.values[order_[k]];
    }
  }
}

double SupEvaluator::operator()(std::span<const double> xi) const {
  if (xi.size() != n_)
    throw std::invalid_argument("weight length " + std::to_string(xi.size()) +
                                " does not match sample size " + std::to_string(n_));
  return std::visit(
      overloaded{
          [&](const FiniteClass& f) {
            const Eigen::Map<const Eigen::VectorXd> w(xi.data(), static_cast<Eigen::Index>(n_));
            const Eigen::VectorXd sums = f.values * w;
            double best = sums.maxCoeff();
            if (f.symmetrized) best = std::max(best, -sums.minCoeff());
            return best;
          },
          [&](const HalfLinesClass&) {
            double s = 0.0, best = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
              s += xi[order_[k]];
              if (group_end_[k]) best = std::max(best, std::abs(s));
            }
            return best;
          },
          [&](const Lipschitz1DClass&) {
            double s = 0.0, total = 0.0;
            for (std::size_t k = 0; k + 1 < n_; ++k) {
              s += xi[order_[k]];
              total += std::abs(s) * gaps_[k];
            }
            return total;
          },
          [&](const DualBallClass& b) {
            const std::size_t d = data_->dim;
            std::vector<double> acc(d, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
              const double w = xi[i];
              const double* x = data_->values.data() + i * d;
              for (std::size_t j = 0; j < d; ++j) acc[j] += w * x[j];
            }
            return lp_norm(acc, b.p);
          },
          [&](const KernelBallClass& k) {
            const Eigen::Map<const Eigen::VectorXd> w(xi.data(), static_cast<Eigen::Index>(n_));
            const double q = w.dot(k.gram * w);
            return std::sqrt(std::max(0.0, q));
          },
      },
      *cls_);
}

double sup_weighted_sum(const FunctionClass& cls, const Sample& data, std::span<const double> xi) {
  return SupEvaluator(cls, data)(xi);
}

WeakVariance weak_variance(const FunctionClass& cls, const Sample& data) {
  validate_sample(data);
  const std::size_t n = data.size();
  return std::visit(
      overloaded{
          [&](const FiniteClass& f) -> WeakVariance {
            if (static_cast<std::size_t>(f.values.cols()) != n)
              throw std::invalid_argument("finite class width does not match the sample");
            double best = 0.0;
            for (Eigen::Index r = 0; r < f.values.rows(); ++r) {
              const Eigen::RowVectorXd row = f.values.row(r);
              best = std::max(best, (row.array() - row.mean()).square().sum());
            }
            return {best, true};
          },
          [&](const HalfLinesClass&) -> WeakVariance {
            require_scalar(data, "half-lines");
            std::vector<double> xs = data.values;
            std::sort(xs.begin(), xs.end());
            double best = 0.0;
            const double nn = static_cast<double>(n);
            for (std::size_t k = 0; k < n; ++k) {
              if (k + 1 < n && xs[k + 1] == xs[k]) continue;
              const double c = static_cast<double>(k + 1);
              best = std::max(best, c * (nn - c) / nn);
            }
            return {best, true};
          },
          [&](const Lipschitz1DClass&) -> WeakVariance {
            require_scalar(data, "Lipschitz");
            std::vector<double> xs = data.values;
            std::sort(xs.begin(), xs.end());
            return lipschitz_variance(xs);
          },
          [&](const DualBallClass& b) -> WeakVariance {
            if (!(b.p >= 1.0)) throw std::invalid_argument("dual-ball exponent p must be >= 1");
            return dual_ball_variance(centered_scatter(data), b.p);
          },
          [&](const KernelBallClass& k) -> WeakVariance {
            if (static_cast<std::size_t>(k.gram.rows()) != n)
              throw std::invalid_argument("Gram matrix size does not match the sample");
            const Eigen::Index nn = static_cast<Eigen::Index>(n);
            const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(nn, nn) -
                                      Eigen::MatrixXd::Constant(nn, nn, 1.0 / static_cast<double>(n));
            return {max_eigenvalue(h * k.gram * h), true};
          },
      },
      cls);
}

double empirical_process_sup(const FiniteClass& cls, std::span<const double> means) {
  if (means.size() != static_cast<std::size_t>(cls.values.rows()))
    throw std::invalid_argument("expected " + std::to_string(cls.values.rows()) +
                                " row means, got " + std::to_string(means.size()));
  const double n = static_cast<double>(cls.values.cols());
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < cls.values.rows(); ++r)
    best = std::max(best, cls.values.row(r).sum() - n * means[static_cast<std::size_t>(r)]);
  return best;
}

}  // namespace exchboot
