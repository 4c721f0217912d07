#pragma once

// Scalar-generic cores of the operator stages. The double instantiation backs
// the public API; KreinModel reruns them in long double, where the chain
// xi -> spectral data -> model kernel keeps ~3 more digits for n near 12.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <complex>
#include <string>
#include <vector>

#include "dbk/errors.hpp"

namespace dbk::krein::detail {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Weighted basis diag(sqrt w) basis^T, re-orthonormalized in T. `coord_map`
/// takes original coordinates to coordinates of the returned columns.
template <class T>
Mat<T> orthonormal_weighted_basis(const Eigen::MatrixXd& basis, const std::vector<double>& weights,
                                  Mat<T>* coord_map) {
  const Eigen::Index n = basis.rows(), m = basis.cols();
  Mat<T> y(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < n; ++k) y(i, k) = std::sqrt(T(weights[i])) * T(basis(k, i));
  Eigen::HouseholderQR<Mat<T>> qr(y);
  Mat<T> q = qr.householderQ() * Mat<T>::Identity(m, n);
  Mat<T> r = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  // keep the diagonal positive so the map is a small perturbation of I
  for (Eigen::Index k = 0; k < n; ++k) {
    if (r(k, k) < T(0)) {
      r.row(k) *= T(-1);
      q.col(k) *= T(-1);
    }
  }
  if (coord_map) *coord_map = r;
  return q;
}

template <class T>
struct DomainSplit {
  Mat<T> compression;  // n x n
  Mat<T> domain;       // n x d
  Mat<T> complement;   // n x (n - d)
  std::vector<double> singular_values;
};

template <class T>
DomainSplit<T> split_domain(const Mat<T>& y, const std::vector<double>& points, double scale) {
  const Eigen::Index m = y.rows(), n = y.cols();
  Mat<T> ty = y;
  for (Eigen::Index i = 0; i < m; ++i) ty.row(i) *= T(points[i]);
  DomainSplit<T> out;
  out.compression = y.transpose() * ty;
  out.compression = (T(0.5) * (out.compression + out.compression.transpose())).eval();
  const Mat<T> outside = ty - y * out.compression;
  Eigen::JacobiSVD<Mat<T>> svd(outside, Eigen::ComputeFullV);
  std::vector<double> all(n, 0.0);
  for (Eigen::Index i = 0; i < svd.singularValues().size() && i < n; ++i)
    all[i] = static_cast<double>(svd.singularValues()[i]);
  int rank = 0;
  for (double s : all) {
    if (s > 1e-6 * scale) {
      ++rank;
    } else if (s > 1e-10 * scale) {
      throw IllConditionedError("mult_domain: singular value " + std::to_string(s) +
                                " inside the rank ambiguity window");
    }
  }
  out.singular_values = all;
  out.complement = svd.matrixV().leftCols(rank);
  out.domain = svd.matrixV().rightCols(n - rank);
  return out;
}

/// Unit xi spanning the complement of Ran(A - w), phase fixed so that its
/// largest coordinate is real positive. dims receive the complement
/// dimensions at w and conj(w).
template <class T>
Vec<std::complex<T>> deficiency_vector(const Mat<T>& compression, const Mat<T>& domain,
                                       std::complex<double> w, double scale, int& dim_w, int& dim_wbar) {
  using C = std::complex<T>;
  const Eigen::Index n = compression.rows();
  auto complement_of_range = [&](std::complex<double> z, int& dim) {
    const Mat<C> m = domain.transpose().template cast<C>() *
                     (compression.template cast<C>() - C(std::conj(z)) * Mat<C>::Identity(n, n));
    Eigen::JacobiSVD<Mat<C>> svd(m, Eigen::ComputeFullV);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (static_cast<double>(svd.singularValues()[i]) > 1e-10 * scale) ++rank;
    dim = static_cast<int>(n) - rank;
    return Vec<C>(svd.matrixV().col(n - 1));
  };
  Vec<C> xi = complement_of_range(w, dim_w);
  complement_of_range(std::conj(w), dim_wbar);
  xi.normalize();
  Eigen::Index imax = 0;
  xi.cwiseAbs().maxCoeff(&imax);
  xi *= std::conj(xi[imax]) / std::abs(xi[imax]);
  return xi;
}

template <class T>
Mat<T> extension_matrix(const Mat<T>& compression, const Mat<T>& domain, const Mat<T>& complement,
                        double theta) {
  const Eigen::Index n = compression.rows();
  Mat<T> q(n, n);
  q << domain, complement;
  Mat<T> local = q.transpose() * compression * q;
  local(n - 1, n - 1) = T(theta);
  Mat<T> ext = q * local * q.transpose();
  return (T(0.5) * (ext + ext.transpose())).eval();
}

}  // namespace dbk::krein::detail
