#include "partition_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "partition_lab/errors.hpp"

namespace plab {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

// Dense path for small operators, where iteration buys nothing.
constexpr Eigen::Index kDenseLimit = 400;

// Orthonormalize the columns of S (SVQB), dropping numerically dependent
// directions. Returns the new basis.
Mat svqb(const Mat& s, double drop) {
  Vec d = s.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < d.size(); ++c) d(c) = d(c) > 0.0 ? 1.0 / d(c) : 0.0;
  const Mat sd = s * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(sd.transpose() * sd);
  const Vec& th = es.eigenvalues();
  const double top = th.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < th.size(); ++c)
    if (th(c) > drop * top) keep.push_back(c);
  Mat q(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    q.col(static_cast<Eigen::Index>(c)) = sd * es.eigenvectors().col(keep[c]) / std::sqrt(th(keep[c]));
  return q;
}

Mat orthonormalize(const Mat& s) {
  return svqb(svqb(s, 1e-14), 1e-14);
}

void fix_sign(Vec& x) {
  Eigen::Index at = 0;
  double best = -1.0;
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    const double a = std::abs(x(r));
    if (a > best * (1.0 + 1e-9)) {
      best = a;
      at = r;
    }
  }
  if (x(at) < 0.0) x = -x;
}

std::vector<EigenPair> pack(const Mat& x, const Vec& lambda, const SpMat& a, int m, double h) {
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) {
    Vec v = x.col(c);
    v.normalize();
    fix_sign(v);
    EigenPair p;
    p.value = lambda(c);
    p.residual = (a * v - lambda(c) * v).norm();
    p.vector.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index r = 0; r < v.size(); ++r) p.vector[static_cast<std::size_t>(r)] = v(r) / h;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<EigenPair> dense_eigenpairs(const SpMat& a, int m, double h) {
  Eigen::SelfAdjointEigenSolver<Mat> es{Mat(a)};
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
  return pack(es.eigenvectors().leftCols(m), es.eigenvalues().head(m), a, m, h);
}

} // namespace

DirichletOperator::DirichletOperator(Subdomain sub) : sub_(std::move(sub)) {
  const auto& g = sub_.grid();
  const auto n = static_cast<Eigen::Index>(sub_.size());
  const double ih2 = 1.0 / (g.h() * g.h());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * 5);
  for (Eigen::Index r = 0; r < n; ++r) {
    const CellIndex c = sub_.cells()[static_cast<std::size_t>(r)];
    t.emplace_back(r, r, 4.0 * ih2);
    const int i = g.col(c), j = g.row(c);
    for (int d = 0; d < 4; ++d) {
      const int a = i + kDi[d], b = j + kDj[d];
      if (!g.in_grid(a, b)) continue;
      const std::int32_t q = dof(g.index(a, b));
      if (q >= 0) t.emplace_back(r, q, -ih2);
    }
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(t.begin(), t.end());
  matrix_.makeCompressed();
}

std::int32_t DirichletOperator::dof(CellIndex c) const {
  const auto& cells = sub_.cells();
  const auto it = std::lower_bound(cells.begin(), cells.end(), c);
  if (it == cells.end() || *it != c) return -1;
  return static_cast<std::int32_t>(it - cells.begin());
}

DirichletOperator assemble_dirichlet(const Subdomain& sub) {
  if (sub.empty()) throw Error(ErrorCode::InvalidArgument, "assemble_dirichlet: empty subdomain");
  return DirichletOperator(sub);
}

std::vector<EigenPair> lowest_eigenpairs(const DirichletOperator& op, int m, const SolverOptions& opt) {
  const SpMat& a = op.matrix();
  const Eigen::Index n = a.rows();
  const double h = op.subdomain().grid().h();
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "lowest_eigenpairs: m out of range");
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "lowest_eigenpairs: tol must be positive");
  if (n <= kDenseLimit) return dense_eigenpairs(a, m, h);

  const int guard = std::clamp(m / 2, 2, 8);
  const Eigen::Index nb = std::min<Eigen::Index>(m + guard, n / 2);
  if (nb < m) return dense_eigenpairs(a, m, h);

  Eigen::SimplicialLDLT<SpMat> chol(a);
  if (chol.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "preconditioner factorization failed");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Mat x(n, nb);
  for (Eigen::Index c = 0; c < nb; ++c)
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = unif(rng);
  x = orthonormalize(chol.solve(x));

  auto rayleigh_ritz = [&](const Mat& s, Mat& vecs, Vec& vals) {
    const Mat as = a * s;
    Mat g = s.transpose() * as;
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
  };

  Mat c;
  Vec theta;
  rayleigh_ritz(x, c, theta);
  x = x * c;
  Mat p(n, 0);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Mat ax = a * x;
    const Mat r = ax - x * theta.head(nb).asDiagonal();
    bool done = true;
    for (int k = 0; k < m; ++k) done = done && r.col(k).norm() <= 0.5 * opt.tol;
    if (done) return pack(x, theta, a, m, h);

    const Mat w = chol.solve(r);
    Mat s(n, nb + w.cols() + p.cols());
    s << x, w, p;
    s = orthonormalize(s);
    if (s.cols() < nb) throw Error(ErrorCode::NoConvergence, "LOBPCG basis collapsed");
    rayleigh_ritz(s, c, theta);
    const Mat xn = s * c.leftCols(nb);
    // New search direction: component of the update outside the old block.
    p = xn - x * (x.transpose() * xn);
    x = xn;
  }
  throw Error(ErrorCode::NoConvergence, "LOBPCG: iteration budget exhausted");
}

EigenPair ground_state(const Subdomain& sub, const SolverOptions& opt) {
  const auto op = assemble_dirichlet(sub);
  auto pairs = lowest_eigenpairs(op, 1, opt);
  EigenPair& g = pairs.front();
  const double top = *std::max_element(g.vector.begin(), g.vector.end());
  for (double v : g.vector)
    if (v < -1e-8 * top) throw Error(ErrorCode::HardAssertion, "ground state changes sign");
  return std::move(g);
}

double ground_energy(const Subdomain& sub, const SolverOptions& opt) {
  return ground_state(sub, opt).value;
}

double weyl_ratio(double lambda_k, double area, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "weyl_ratio: k must be >= 1");
  return lambda_k * area / (4.0 * std::numbers::pi * k);
}

double discrete_square_eigenvalue(int p, int q, double h) {
  const double sp = std::sin(p * std::numbers::pi * h / 2.0);
  const double sq = std::sin(q * std::numbers::pi * h / 2.0);
  return 4.0 / (h * h) * (sp * sp + sq * sq);
}

std::vector<double> to_grid_function(const Subdomain& sub, const std::vector<double>& v) {
  std::vector<double> f(sub.grid().cell_count(), 0.0);
  for (std::size_t r = 0; r < sub.size(); ++r) f[static_cast<std::size_t>(sub.cells()[r])] = v[r];
  return f;
}

std::vector<double> to_grid_function(const DirichletOperator& op, const std::vector<double>& v) {
  return to_grid_function(op.subdomain(), v);
}

} // namespace plab
