#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hollowfield/errors.hpp"
#include "hollowfield/solvers.hpp"

namespace hollowfield {
namespace {

constexpr int kMaxSweeps = 80;

// Replaces column `col` of `u` by a unit vector orthogonal to the columns
// listed in `keep`.
void complete_column(Eigen::MatrixXcd& u, Eigen::Index col, const std::vector<Eigen::Index>& keep) {
  const Eigen::Index rows = u.rows();
  for (Eigen::Index e = 0; e < rows; ++e) {
    Eigen::VectorXcd cand = Eigen::VectorXcd::Zero(rows);
    cand(e) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k : keep) cand -= u.col(k).dot(cand) * u.col(k);
    }
    const double norm = cand.norm();
    if (norm > 0.5) {
      u.col(col) = cand / norm;
      return;
    }
  }
}

SvdResult jacobi_square(const Eigen::MatrixXcd& r) {
  const Eigen::Index n = r.cols();
  Eigen::MatrixXcd a = r;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = eps * std::max<double>(1.0, static_cast<double>(n));
  const double fro = a.norm();
  const double tiny = std::max(std::numeric_limits<double>::min(), (eps * fro) * (eps * fro));

  int sweep = 0;
  double off = 0.0;
  bool converged = false;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    off = 0.0;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        if (alpha < tiny || beta < tiny) continue;
        const Complex gamma = a.col(p).dot(a.col(q));
        const double g = std::abs(gamma);
        const double scale = std::sqrt(alpha * beta);
        if (g <= tol * scale) continue;
        off = std::max(off, g / scale);
        rotated = true;

        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        const Complex e = gamma / g;

        // a_p <- c a_p - s conj(e) a_q ; a_q <- s e a_p + c a_q
        const Complex sp = s * std::conj(e);
        const Complex sq = s * e;
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex ap = a(i, p);
          const Complex aq = a(i, q);
          a(i, p) = c * ap - sp * aq;
          a(i, q) = sq * ap + c * aq;
          const Complex vp = v(i, p);
          const Complex vq = v(i, q);
          v(i, p) = c * vp - sp * vq;
          v(i, q) = sq * vp + c * vq;
        }
      }
    }
    if (!rotated) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericError("svd_decompose: Jacobi sweeps did not converge (max relative "
                       "off-diagonal " + std::to_string(off) + " after " +
                       std::to_string(kMaxSweeps) + " sweeps)");
  }

  Eigen::VectorXd sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) sigma(i) = a.col(i).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return sigma(x) > sigma(y); });

  SvdResult out;
  out.sweeps = sweep + 1;
  out.singular_values.resize(n);
  out.u.resize(n, n);
  out.v.resize(n, n);
  const double floor = std::sqrt(tiny);
  std::vector<Eigen::Index> good;
  std::vector<Eigen::Index> degenerate;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.v.col(k) = v.col(src);
    if (sigma(src) > floor) {
      out.singular_values(k) = sigma(src);
      out.u.col(k) = a.col(src) / sigma(src);
      good.push_back(k);
    } else {
      out.singular_values(k) = 0.0;
      degenerate.push_back(k);
    }
  }
  for (Eigen::Index k : degenerate) {
    complete_column(out.u, k, good);
    good.push_back(k);
  }
  return out;
}

}  // namespace

SvdResult svd_decompose(const Eigen::MatrixXcd& h) {
  if (!h.allFinite()) throw NumericError("svd_decompose: non-finite matrix entry");
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  if (m == 0 || n == 0) {
    SvdResult empty;
    empty.u.resize(m, 0);
    empty.v.resize(n, 0);
    return empty;
  }
  if (m < n) {
    SvdResult t = svd_decompose(h.adjoint());
    std::swap(t.u, t.v);
    return t;
  }

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(h);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  SvdResult inner = jacobi_square(r);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, n);
  inner.u = q * inner.u;
  return inner;
}

}  // namespace hollowfield
