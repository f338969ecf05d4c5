#include "roughweyl/lanczos.hpp"

#include "roughweyl/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace roughweyl {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class BlockLanczos {
public:
  BlockLanczos(const LanczosProblem& pb, const LanczosOptions& o) : pb_(pb), o_(o), gen_(o.seed) {
    p_ = std::max(1, o.block);
    nev_ = o.nev_top + o.nev_bottom;
    if (nev_ <= 0) throw SolverError("block_lanczos: no eigenvalues requested");
    if (pb.working_dim < 4 * p_ || pb.working_dim < nev_)
      throw SolverError("block_lanczos: working dimension " + std::to_string(pb.working_dim) +
                        " too small for the iterative path");
    Index max_dim = o.max_dim > 0 ? o.max_dim : std::max<Index>(4 * static_cast<Index>(nev_) + 100, 200);
    max_dim = std::min(max_dim, pb.working_dim);
    max_blocks_ = static_cast<Index>(max_dim / p_);
    if (max_blocks_ * p_ < max_dim) ++max_blocks_;
    Q_.resize(pb.n, (max_blocks_ + 1) * p_);
  }

  LanczosResult run() {
    MatrixXd X = random_block(p_);
    project(X);
    MatrixXd scale_src = X;
    orthonormalize(X, 0, col_norms(scale_src));
    Q_.leftCols(p_) = X;

    Index next_check = std::min<Index>(pb_.working_dim, std::max<Index>(static_cast<Index>(1.5 * nev_) + 20, 4 * p_));
    LanczosResult result;

    for (Index j = 0; j < max_blocks_; ++j) {
      const Index used = (j + 1) * p_;
      const auto Qj = Q_.middleCols(j * p_, p_);

      MatrixXd W;
      pb_.apply_op(Qj, W);
      const VectorXd scale = col_norms(W);
      MatrixXd BW;
      pb_.apply_B(W, BW);
      MatrixXd Aj = Qj.transpose() * BW;
      Aj = 0.5 * (Aj + Aj.transpose()).eval();

      W.noalias() -= Qj * Aj;
      if (j > 0) W.noalias() -= Q_.middleCols((j - 1) * p_, p_) * off_.back().transpose();
      project(W);
      reorthogonalize(W, used);

      diag_.push_back(Aj);
      const Index dim = used;
      const bool exhausted = dim >= pb_.working_dim;
      const bool room = !exhausted && dim + p_ <= pb_.working_dim && j + 1 < max_blocks_;

      if (room) {
        off_.push_back(orthonormalize(W, used, scale));
        last_gram_ = off_.back().transpose() * off_.back();
        Q_.middleCols(used, p_) = W;
      } else {
        MatrixXd BWr;
        pb_.apply_B(W, BWr);
        last_gram_ = W.transpose() * BWr;
        off_.push_back(MatrixXd::Zero(p_, p_));
      }

      if (dim >= next_check || !room) {
        if (check(dim, exhausted, result)) return result;
        next_check = std::max<Index>(dim + 4 * p_, static_cast<Index>(1.2 * static_cast<double>(dim)));
      }
      if (!room) break;
    }
    throw SolverError("block_lanczos: requested eigenpairs did not converge within Krylov dimension " +
                      std::to_string(diag_.size() * static_cast<std::size_t>(p_)));
  }

private:
  const LanczosProblem& pb_;
  const LanczosOptions& o_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  int p_ = 1;
  int nev_ = 0;
  Index max_blocks_ = 0;
  MatrixXd Q_;
  std::vector<MatrixXd> diag_;
  std::vector<MatrixXd> off_; // off_[j] couples block j+1 to block j
  MatrixXd last_gram_; // B-Gram matrix of the unnormalized residual block
  int checks_ = 0;

  MatrixXd random_block(Index cols) {
    MatrixXd X(pb_.n, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index i = 0; i < pb_.n; ++i) X(i, c) = normal_(gen_);
    return X;
  }

  void project(MatrixXd& X) const {
    if (pb_.project) pb_.project(X);
  }

  VectorXd col_norms(const MatrixXd& X) const {
    MatrixXd BX;
    pb_.apply_B(X, BX);
    VectorXd out(X.cols());
    for (Index c = 0; c < X.cols(); ++c) out(c) = std::sqrt(std::max(0.0, X.col(c).dot(BX.col(c))));
    return out;
  }

  // Two passes of classical Gram-Schmidt against the first `used` basis vectors.
  void reorthogonalize(MatrixXd& W, Index used) const {
    if (used == 0) return;
    const auto Qu = Q_.leftCols(used);
    for (int pass = 0; pass < 2; ++pass) {
      MatrixXd BW;
      pb_.apply_B(W, BW);
      const MatrixXd C = Qu.transpose() * BW;
      W.noalias() -= Qu * C;
    }
  }

  // B-orthonormalizes the columns of W in place against each other (W_in = W_out * R).
  // Columns that vanish are replaced by fresh random directions and get a zero
  // diagonal coefficient.
  MatrixXd orthonormalize(MatrixXd& W, Index used, const VectorXd& scale) {
    MatrixXd R = MatrixXd::Zero(W.cols(), W.cols());
    for (Index c = 0; c < W.cols(); ++c) {
      for (int pass = 0; pass < 2; ++pass) {
        if (c == 0) break;
        MatrixXd Bw;
        pb_.apply_B(W.col(c), Bw);
        const VectorXd coef = W.leftCols(c).transpose() * Bw.col(0);
        W.col(c).noalias() -= W.leftCols(c) * coef;
        R.col(c).head(c) += coef;
      }
      MatrixXd Bw;
      pb_.apply_B(W.col(c), Bw);
      const double nrm = std::sqrt(std::max(0.0, W.col(c).dot(Bw.col(0))));
      const double ref = std::max(scale(c), std::numeric_limits<double>::min());
      if (std::isfinite(nrm) && nrm > 1e-12 * ref) {
        R(c, c) = nrm;
        W.col(c) /= nrm;
        continue;
      }
      R(c, c) = 0.0;
      W.col(c) = replacement(W, c, used);
    }
    return R;
  }

  VectorXd replacement(const MatrixXd& W, Index c, Index used) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      MatrixXd x = random_block(1);
      project(x);
      const double before = col_norms(x)(0);
      for (int pass = 0; pass < 2; ++pass) {
        reorthogonalize(x, used);
        if (c > 0) {
          MatrixXd Bx;
          pb_.apply_B(x, Bx);
          x.noalias() -= W.leftCols(c) * (W.leftCols(c).transpose() * Bx);
        }
      }
      const double nrm = col_norms(x)(0);
      if (nrm > 1e-6 * before) return x.col(0) / nrm;
    }
    throw SolverError("block_lanczos: cannot extend the Krylov basis");
  }

  bool check(Index dim, bool exhausted, LanczosResult& result) {
    ++checks_;
    const Index nb = static_cast<Index>(diag_.size());
    MatrixXd T = MatrixXd::Zero(dim, dim);
    for (Index b = 0; b < nb; ++b) {
      T.block(b * p_, b * p_, p_, p_) = diag_[b];
      if (b + 1 < nb) {
        T.block((b + 1) * p_, b * p_, p_, p_) = off_[b];
        T.block(b * p_, (b + 1) * p_, p_, p_) = off_[b].transpose();
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw SolverError("block_lanczos: projected eigensolve failed");
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& S = es.eigenvectors();

    const double thmax = theta.cwiseAbs().maxCoeff();
    const double floor = o_.zero_floor * thmax;
    const double tol = o_.tol * thmax;
    auto residual = [&](Index i) {
      if (exhausted) return 0.0;
      const VectorXd s = S.col(i).tail(p_);
      return std::sqrt(std::max(0.0, s.dot(last_gram_ * s)));
    };

    int count_pos = 0, count_neg = 0;
    for (Index i = 0; i < dim; ++i) {
      if (theta(i) > floor) ++count_pos;
      if (theta(i) < -floor) ++count_neg;
    }
    int prefix_top = 0;
    for (Index i = dim - 1; i >= 0 && theta(i) > floor && residual(i) <= tol; --i) ++prefix_top;
    int prefix_bottom = 0;
    for (Index i = 0; i < dim && theta(i) < -floor && residual(i) <= tol; ++i) ++prefix_bottom;

    // A side with fewer nonzero eigenvalues than requested is complete once
    // every Ritz value of that sign has converged in a large enough space.
    const bool large = exhausted || dim >= std::min<Index>(pb_.working_dim, 2 * static_cast<Index>(nev_) + 20);
    const bool ok_top = prefix_top >= o_.nev_top || (large && prefix_top == count_pos);
    const bool ok_bottom = prefix_bottom >= o_.nev_bottom || (large && prefix_bottom == count_neg);
    if (!(ok_top && ok_bottom)) return false;

    const int kt = std::min(o_.nev_top, prefix_top);
    const int kb = std::min(o_.nev_bottom, prefix_bottom);
    result.top.resize(kt);
    result.bottom.resize(kb);
    for (int i = 0; i < kt; ++i) result.top(i) = theta(dim - 1 - i);
    for (int i = 0; i < kb; ++i) result.bottom(i) = theta(i);
    if (o_.want_vectors) {
      const auto Qd = Q_.leftCols(dim);
      result.top_vectors.resize(pb_.n, kt);
      result.bottom_vectors.resize(pb_.n, kb);
      for (int i = 0; i < kt; ++i) result.top_vectors.col(i) = Qd * S.col(dim - 1 - i);
      for (int i = 0; i < kb; ++i) result.bottom_vectors.col(i) = Qd * S.col(i);
    }
    result.krylov_dim = dim;
    result.exhausted = exhausted;
    result.checks = checks_;
    return true;
  }
};

} // namespace

LanczosResult block_lanczos(const LanczosProblem& problem, const LanczosOptions& opts) {
  return BlockLanczos(problem, opts).run();
}

} // namespace roughweyl
