#include "secisac/nullspace.hpp"

#include <cmath>
#include <sstream>

namespace secisac {

NullProjector null_projector(const MatC& channels) {
  const int k = static_cast<int>(channels.rows());
  const int n = static_cast<int>(channels.cols());
  if (k > n)
    throw std::invalid_argument("null_projector: more users than antennas");

  const MatC gram = channels * channels.adjoint();  // K x K, Hermitian PSD
  Eigen::SelfAdjointEigenSolver<MatC> eig(gram);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  const double ratio =
      lmax > 0.0 ? std::sqrt(std::max(lmin, 0.0) / lmax) : 0.0;
  if (ratio <= 1e-10) {
    std::ostringstream msg;
    msg << "null_projector: rank-deficient channel matrix "
        << "(singular-value ratio " << ratio << ")";
    throw RankDeficientError(msg.str(), ratio);
  }

  NullProjector p;
  p.source_rank = k;
  const Eigen::LLT<MatC> llt(gram);
  // I - H^H (H H^H)^-1 H without forming the explicit inverse.
  p.matrix = MatC::Identity(n, n) -
             channels.adjoint() * llt.solve(channels);
  // Symmetrize away factorization round-off.
  p.matrix = 0.5 * (p.matrix + p.matrix.adjoint().eval());
  return p;
}

VecC effective_noise(const NullProjector& projector, const VecC& raw) {
  if (raw.size() != projector.matrix.rows())
    throw std::invalid_argument("effective_noise: dimension mismatch");
  return projector.matrix * raw;
}

MatC effective_covariance(const NullProjector& projector, const MatC& raw_cov) {
  if ((raw_cov - raw_cov.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::domain_error("effective_covariance: input not Hermitian");
  return projector.matrix * raw_cov * projector.matrix.adjoint();
}

}  // namespace secisac
