#include "roughweyl/spectral.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/lanczos.hpp"
#include "roughweyl/working_form.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace roughweyl {

using Eigen::Index;

std::vector<std::pair<double, int>> Spectrum::grouped(Sign s) const {
  std::vector<std::pair<double, int>> out;
  for (double v : side(s)) {
    if (!out.empty() && std::abs(out.back().first - v) <= 1e-8 * std::max(1.0, std::abs(v))) ++out.back().second;
    else out.emplace_back(v, 1);
  }
  return out;
}

Vector ConstraintProjection::project(const Vector& v) const {
  if (!active) return v;
  return v - r * (r.dot(v) / r.squaredNorm());
}

namespace {

void check_constraint(const Vector& r) {
  const double mean = r.sum();
  const double scale = r.cwiseAbs().sum();
  if (!(scale > 0.0) || std::abs(mean) <= 1e-10 * scale)
    throw ModelingError("int rho dmu_g = 0 on a problem with tau = 1: the energy is not coercive on Z(rho)");
}

} // namespace

ConstraintProjection project_constraint(const Pencil& p) {
  ConstraintProjection c;
  c.active = p.tau == 1;
  c.r = p.r;
  c.mean = p.r.sum();
  c.working_dim = p.num_free() - (c.active ? 1 : 0);
  if (c.active) check_constraint(p.r);
  return c;
}

namespace detail {

SparseMatrix energy_matrix(const Pencil& p, double t) {
  SparseMatrix B = p.K_free;
  if (t != 0.0) B += t * p.M_free;
  return B;
}

namespace {

double rank_one_scale(const SparseMatrix& K, const Vector& r) {
  return K.diagonal().cwiseAbs().maxCoeff() / r.squaredNorm();
}

// H x for H = I - 2 w w^T / (w^T w) applied to every column.
void apply_householder(const Vector& w, Matrix& X) {
  const double c = w.squaredNorm();
  if (c == 0.0) return;
  const Eigen::RowVectorXd wx = w.transpose() * X;
  X.noalias() -= (2.0 / c) * w * wx;
}

} // namespace

DenseWorkingForm dense_working_form(const Pencil& p, const SparseMatrix& numerator, double t,
                                    const Vector* constraint) {
  DenseWorkingForm f;
  f.nf = p.num_free();
  const SparseMatrix Bs = energy_matrix(p, t);
  Matrix B = Matrix(Bs);
  if (constraint) {
    const double s = rank_one_scale(p.K_free, *constraint);
    B.noalias() += s * (*constraint) * constraint->transpose();
  }
  f.llt.compute(B);
  if (f.llt.info() != Eigen::Success)
    throw SolverError("Cholesky of the energy matrix failed: the form is not coercive "
                      "(use t > 0 or the Z(rho) constraint)");

  const auto L = f.llt.matrixL();
  Matrix X = L.solve(Matrix(numerator));
  Matrix S = L.solve(X.transpose());
  S = 0.5 * (S + S.transpose()).eval();

  if (constraint) {
    f.constrained = true;
    Vector u = L.solve(*constraint);
    Vector w = u;
    w(0) += (u(0) >= 0.0 ? 1.0 : -1.0) * u.norm();
    f.householder = w;
    apply_householder(w, S);
    Matrix St = S.transpose();
    apply_householder(w, St);
    S = St.transpose();
    f.S = S.bottomRightCorner(f.nf - 1, f.nf - 1);
    f.S = 0.5 * (f.S + f.S.transpose()).eval();
  } else {
    f.S = std::move(S);
  }
  return f;
}

Matrix DenseWorkingForm::to_dofs(const Matrix& Y) const {
  Matrix Z;
  if (constrained) {
    Z = Matrix::Zero(nf, Y.cols());
    Z.bottomRows(nf - 1) = Y;
    apply_householder(householder, Z);
  } else {
    Z = Y;
  }
  return llt.matrixU().solve(Z);
}

Matrix DenseWorkingForm::to_coords(const Matrix& V) const {
  Matrix Z = llt.matrixU() * V;
  if (!constrained) return Z;
  apply_householder(householder, Z);
  return Z.bottomRows(nf - 1);
}

} // namespace detail

namespace {

constexpr double kZeroFloor = 1e-11;

struct RawEigs {
  Vector top, bottom; // top descending (>0), bottom ascending (<0)
  Matrix top_vecs, bottom_vecs;
  bool complete_pos = false, complete_neg = false;
  int working_dim = 0;
  std::string method;
};

RawEigs dense_path(const Pencil& p, const SparseMatrix& numerator, double t, int k_each, bool want_vectors,
                   const Vector* constraint) {
  const auto f = detail::dense_working_form(p, numerator, t, constraint);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.S, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("dense symmetric eigensolve failed");
  const Vector& th = es.eigenvalues();
  const Index d = th.size();
  const double floor = kZeroFloor * (d > 0 ? th.cwiseAbs().maxCoeff() : 0.0);

  int npos = 0, nneg = 0;
  for (Index i = 0; i < d; ++i) {
    if (th(i) > floor) ++npos;
    if (th(i) < -floor) ++nneg;
  }
  const int kp = k_each > 0 ? std::min(k_each, npos) : npos;
  const int kn = k_each > 0 ? std::min(k_each, nneg) : nneg;

  RawEigs out;
  out.method = "dense";
  out.working_dim = static_cast<int>(d);
  out.complete_pos = kp == npos;
  out.complete_neg = kn == nneg;
  out.top.resize(kp);
  out.bottom.resize(kn);
  for (int i = 0; i < kp; ++i) out.top(i) = th(d - 1 - i);
  for (int i = 0; i < kn; ++i) out.bottom(i) = th(i);
  if (want_vectors) {
    Matrix Yt(d, kp), Yb(d, kn);
    for (int i = 0; i < kp; ++i) Yt.col(i) = es.eigenvectors().col(d - 1 - i);
    for (int i = 0; i < kn; ++i) Yb.col(i) = es.eigenvectors().col(i);
    out.top_vecs = f.to_dofs(Yt);
    out.bottom_vecs = f.to_dofs(Yb);
  }
  return out;
}

// Sparse energy form with (optionally) the rank-one constraint handled
// through a Woodbury correction of a pinned factorization.
class SparseEnergyForm {
public:
  SparseEnergyForm(const Pencil& p, double t, const Vector* constraint) : B_(detail::energy_matrix(p, t)) {
    if (!constraint) {
      llt_.compute(B_);
      if (llt_.info() != Eigen::Success)
        throw SolverError("sparse Cholesky of the energy matrix failed: the form is not coercive "
                          "(use t > 0 or the Z(rho) constraint)");
      return;
    }
    // B~ = K + s r r^T = Kp + U C U^T with Kp = K + sp e_p e_p^T, U = [r, e_p], C = diag(s, -sp).
    r_ = *constraint;
    s_ = detail::rank_one_scale(B_, r_);
    const double sp = B_.diagonal().cwiseAbs().maxCoeff();
    const Index n = B_.rows();
    Index pin = 0;
    r_.cwiseAbs().maxCoeff(&pin);
    SparseMatrix Kp = B_;
    Kp.coeffRef(pin, pin) += sp;
    llt_.compute(Kp);
    if (llt_.info() != Eigen::Success) throw SolverError("sparse Cholesky of the pinned energy matrix failed");
    U_ = Matrix::Zero(n, 2);
    U_.col(0) = r_;
    U_(pin, 1) = 1.0;
    Z_ = llt_.solve(U_);
    Eigen::Matrix2d cap = U_.transpose() * Z_;
    cap(0, 0) += 1.0 / s_;
    cap(1, 1) -= 1.0 / sp;
    cap_lu_ = cap.fullPivLu();
    constrained_ = true;
    // B~-orthogonal projector onto {r^T v = 0}: v - z (r^T v) / (r^T z), z = B~^{-1} r.
    z_ = solve(r_);
    rz_ = r_.dot(z_);
  }

  void apply(const Matrix& X, Matrix& Y) const {
    Y = B_ * X;
    if (constrained_) Y.noalias() += s_ * r_ * (r_.transpose() * X);
  }

  Matrix solve(const Matrix& X) const {
    Matrix Y = llt_.solve(X);
    if (constrained_) {
      const Matrix c = cap_lu_.solve(U_.transpose() * Y);
      Y.noalias() -= Z_ * c;
    }
    return Y;
  }

  void project(Matrix& X) const {
    if (!constrained_) return;
    const Eigen::RowVectorXd rx = r_.transpose() * X;
    X.noalias() -= z_ * (rx / rz_);
  }

  bool constrained() const { return constrained_; }

private:
  SparseMatrix B_;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  bool constrained_ = false;
  Vector r_, z_;
  double s_ = 0.0, rz_ = 1.0;
  Matrix U_, Z_;
  Eigen::FullPivLU<Eigen::Matrix2d> cap_lu_;
};

RawEigs sparse_path(const Pencil& p, const SparseMatrix& numerator, double t, int k_top, int k_bottom,
                    const SolveOptions& opts, const Vector* constraint) {
  if (k_top + k_bottom <= 0) throw SolverError("sparse path needs a positive eigenvalue count");
  const SparseEnergyForm form(p, t, constraint);
  const Index n = p.num_free();

  LanczosProblem pb;
  pb.n = n;
  pb.working_dim = n - (constraint ? 1 : 0);
  pb.apply_B = [&form](const Matrix& X, Matrix& Y) { form.apply(X, Y); };
  pb.apply_op = [&form, &numerator](const Matrix& X, Matrix& Y) {
    Y = form.solve(numerator * X);
    form.project(Y);
  };
  if (form.constrained()) pb.project = [&form](Matrix& X) { form.project(X); };

  LanczosOptions lo;
  lo.nev_top = k_top;
  lo.nev_bottom = k_bottom;
  lo.block = opts.block;
  lo.tol = opts.tol;
  lo.max_dim = opts.max_krylov;
  lo.seed = opts.seed;
  lo.want_vectors = opts.want_vectors;
  const auto res = block_lanczos(pb, lo);

  RawEigs out;
  out.method = "lanczos";
  out.working_dim = static_cast<int>(pb.working_dim);
  out.top = res.top;
  out.bottom = res.bottom;
  out.top_vecs = res.top_vectors;
  out.bottom_vecs = res.bottom_vectors;
  out.complete_pos = res.exhausted || res.top.size() < k_top;
  out.complete_neg = res.exhausted || res.bottom.size() < k_bottom;
  return out;
}

bool use_dense(const SolveOptions& opts, int working_dim, int k_each) {
  switch (opts.method) {
  case SolverMethod::Dense: return true;
  case SolverMethod::Sparse: return false;
  case SolverMethod::Auto: break;
  }
  return k_each <= 0 || working_dim <= opts.dense_limit;
}

// k_top / k_bottom: eigenvalues wanted per sign (<= 0 with the dense path
// means all of them). A side flagged `empty` is known to have no nonzero
// eigenvalue and is not requested from the iterative solver.
struct SideRequest {
  int k = 0;
  bool empty = false;
};

Spectrum solve_general(const Pencil& p, const SparseMatrix& numerator, double t, SideRequest top, SideRequest bottom,
                       const SolveOptions& opts, const Vector* constraint) {
  if (!(t >= 0.0)) throw ModelingError("t must be >= 0");
  const int working = p.num_free() - (constraint ? 1 : 0);
  const int k_each = std::max(top.k, bottom.k);
  const bool all = top.k <= 0 && bottom.k <= 0;
  const bool dense = use_dense(opts, working, all ? 0 : k_each);
  if (!dense && all) throw SolverError("the sparse path needs an explicit k_each");

  RawEigs raw;
  if (dense) {
    raw = dense_path(p, numerator, t, all ? 0 : k_each, opts.want_vectors, constraint);
  } else {
    const int kt = top.empty ? 0 : top.k;
    const int kb = bottom.empty ? 0 : bottom.k;
    if (kt + kb > 0) {
      raw = sparse_path(p, numerator, t, kt, kb, opts, constraint);
    } else {
      raw.method = "lanczos";
      raw.working_dim = working;
    }
    if (top.empty) raw.complete_pos = true;
    if (bottom.empty) raw.complete_neg = true;
  }

  Spectrum s;
  s.pos.assign(raw.top.data(), raw.top.data() + raw.top.size());
  s.neg.resize(static_cast<std::size_t>(raw.bottom.size()));
  for (Index i = 0; i < raw.bottom.size(); ++i) s.neg[static_cast<std::size_t>(i)] = -raw.bottom(i);
  if (opts.want_vectors) {
    s.vecs_pos = raw.top_vecs.cols() == raw.top.size() ? raw.top_vecs : Matrix(p.num_free(), 0);
    s.vecs_neg = raw.bottom_vecs.cols() == raw.bottom.size() ? raw.bottom_vecs : Matrix(p.num_free(), 0);
  }
  s.meta.t = t;
  s.meta.bc = p.bc.describe();
  s.meta.level = p.level;
  s.meta.constrained = constraint != nullptr;
  s.meta.method = raw.method;
  s.meta.working_dim = raw.working_dim;
  s.meta.complete_pos = raw.complete_pos;
  s.meta.complete_neg = raw.complete_neg;
  return s;
}

const Vector* constraint_for(const Pencil& p, double t) {
  if (t != 0.0 || p.tau != 1) return nullptr;
  check_constraint(p.r);
  return &p.r;
}

} // namespace

Spectrum solve_pencil(const Pencil& p, const SparseMatrix& numerator, double t, int k_each, const SolveOptions& opts) {
  const Vector* c = constraint_for(p, t);
  return solve_general(p, numerator, t, {k_each, false}, {k_each, false}, opts, c);
}

Spectrum solve_weighted(const Pencil& p, double t, int k_each, const SolveOptions& opts) {
  const Vector* c = constraint_for(p, t);
  // rho >= 0 at every sample point makes R positive semidefinite (and vice versa).
  return solve_general(p, p.R_free, t, {k_each, p.weight_max <= 0.0}, {k_each, p.weight_min >= 0.0}, opts, c);
}

LaplaceSpectrum solve_laplace(const Pencil& p, int count, const SolveOptions& opts) {
  if (count < 1) throw SolverError("solve_laplace: count must be >= 1");
  const int nf = p.num_free();
  count = std::min(count, nf);
  LaplaceSpectrum out;

  if (use_dense(opts, nf, count)) {
    // Direct generalized route K v = Lambda Mm v, independent of the inverted pencil.
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(
        Matrix(p.K_free), Matrix(p.M_free),
        (opts.want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly) | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw SolverError("generalized dense eigensolve failed");
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    if (p.tau == 1) out.values.front() = std::max(0.0, out.values.front());
    if (opts.want_vectors) out.vectors = es.eigenvectors().leftCols(count);
    return out;
  }

  // Inverted pencil Mm v = lambda K v with Lambda = 1/lambda; the Neumann zero
  // mode is reported separately and removed by the mean-zero constraint.
  SolveOptions so = opts;
  so.method = SolverMethod::Sparse;
  Vector mass_one;
  const Vector* constraint = nullptr;
  int wanted = count;
  if (p.tau == 1) {
    mass_one = p.M_free * Vector::Ones(nf);
    constraint = &mass_one;
    --wanted;
    out.values.push_back(0.0);
  }
  if (wanted > 0) {
    const auto raw = sparse_path(p, p.M_free, 0.0, wanted, 0, so, constraint);
    for (Index i = 0; i < raw.top.size(); ++i) out.values.push_back(1.0 / raw.top(i));
    if (opts.want_vectors) {
      out.vectors.resize(nf, static_cast<Index>(out.values.size()));
      Index col = 0;
      if (p.tau == 1) out.vectors.col(col++) = Vector::Ones(nf) / std::sqrt(mass_one.sum());
      for (Index i = 0; i < raw.top.size(); ++i) out.vectors.col(col++) = raw.top_vecs.col(i) / std::sqrt(raw.top(i));
    }
  } else if (opts.want_vectors) {
    out.vectors = Vector::Ones(nf) / std::sqrt(mass_one.sum());
  }
  return out;
}

double poincare_constant(const Pencil& p) {
  SolveOptions opts;
  const auto s = solve_general(p, p.M_free, 0.0, {1, false}, {1, true}, opts, constraint_for(p, 0.0));
  if (s.pos.empty() || !std::isfinite(s.pos.front()) || s.pos.front() <= 0.0)
    throw SolverError("poincare_constant: no positive eigenvalue of the mass pencil");
  const double mu = 1.0 / s.pos.front();
  const double scale = p.K_free.diagonal().cwiseAbs().maxCoeff() /
                       std::max(p.M_free.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  if (!(mu > 1e-12 * scale)) throw SolverError("poincare_constant: vanishing constant, the constraint projection failed");
  return mu;
}

} // namespace roughweyl
