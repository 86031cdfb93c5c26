#include "semigeo/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "semigeo/error.hpp"
#include "semigeo/linalg.hpp"

namespace semigeo {

namespace {

std::vector<double> to_vector(const Point& x) { return {x.data(), x.data() + x.size()}; }

std::string point_text(const Point& x) {
  std::string s = "(";
  for (Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

// Dense lookup of signed slots for every index tuple of a tube.
class SlotTable {
 public:
  explicit SlotTable(const TensorTube& t) : n_(t.dim()), first_(t.first_index()) {
    const auto tuples = t.all_tuples();
    refs_.reserve(tuples.size());
    for (const auto& idx : tuples) refs_.push_back(t.locate(idx));
  }
  TensorTube::SlotRef operator()(int a, int b) const {
    return refs_[static_cast<std::size_t>((a - first_) * range() + (b - first_))];
  }
  TensorTube::SlotRef operator()(int a, int b, int c) const {
    return refs_[static_cast<std::size_t>(((a - first_) * range() + (b - first_)) * range() +
                                          (c - first_))];
  }
  TensorTube::SlotRef operator()(int a, int b, int c, int d) const {
    return refs_[static_cast<std::size_t>(
        (((a - first_) * range() + (b - first_)) * range() + (c - first_)) * range() +
        (d - first_))];
  }

 private:
  int range() const { return n_ - first_ + 1; }
  int n_;
  int first_;
  std::vector<TensorTube::SlotRef> refs_;
};

inline double read(const Eigen::MatrixXd& data, Index node, TensorTube::SlotRef r) {
  return r.sign == 0 ? 0.0 : r.sign * data(node, r.slot);
}

// Derivative of every slot column along each axis; result[axis-1] is
// node_count x slot_count.
std::vector<Eigen::MatrixXd> slot_partials(const TensorTube& t) {
  std::vector<Eigen::MatrixXd> out;
  const TubeGrid& grid = t.grid();
  for (int axis = 1; axis <= grid.dim(); ++axis) {
    Eigen::MatrixXd d(t.data().rows(), t.data().cols());
    for (Index s = 0; s < t.slot_count(); ++s) {
      d.col(s) = fd_partial(t.data().col(s), axis, grid);
    }
    out.push_back(std::move(d));
  }
  return out;
}

void require_semigeodesic(const TensorTube& g, int e, double tol) {
  const SemigeodesicResidual r = semigeodesic_residual(g, e);
  if (r.g11 > tol || r.g1j > tol) {
    throw NotSemigeodesic("metric is not in semigeodesic form (|g11 - e| = " +
                          std::to_string(r.g11) + ", |g1j| = " + std::to_string(r.g1j) + ")");
  }
}

}  // namespace

ConnectionField::ConnectionField(TensorTube gamma) : n_(gamma.dim()), tube_(std::move(gamma)) {
  if (tube_->rank() != 3 || tube_->first_index() != 1) {
    throw InvalidSpec("connection tube must have rank 3 over 1..n");
  }
}

ConnectionField::ConnectionField(int n, Function fn) : n_(n), fn_(std::move(fn)) {}

double ConnectionField::operator()(int h, int i, int j, const Point& x) const {
  if (tube_) {
    const auto ref = tube_->locate({h, i, j});
    if (ref.sign == 0) return 0.0;
    return ref.sign * interpolate(tube_->data().col(ref.slot), tube_->grid(), x);
  }
  return fn_(h, i, j, x);
}

TensorTube ConnectionField::on_grid(const TubeGrid& grid) const {
  if (tube_ && tube_->grid() == grid) return *tube_;
  if (grid.dim() != n_) throw InvalidSpec("grid dimension does not match connection");
  TensorTube out = tube_ ? tube_->with_grid(grid) : make_connection_tube(grid);
  for (Index node = 0; node < grid.node_count(); ++node) {
    const Point x = grid.coords(node);
    for (Index s = 0; s < out.slot_count(); ++s) {
      const auto& idx = out.slot_tuples()[static_cast<std::size_t>(s)];
      out.data()(node, s) = (*this)(idx[0], idx[1], idx[2], x);
    }
  }
  return out;
}

MetricField::MetricField(TensorTube g, int e) : n_(g.dim()), e_(e), tube_(std::move(g)) {
  if (tube_->rank() != 2 || tube_->first_index() != 1) {
    throw InvalidSpec("metric tube must have rank 2 over 1..n");
  }
}

MetricField::MetricField(int n, int e, Function fn) : n_(n), e_(e), fn_(std::move(fn)) {}

double MetricField::operator()(int i, int j, const Point& x) const {
  if (tube_) {
    const auto ref = tube_->locate({i, j});
    return interpolate(tube_->data().col(ref.slot), tube_->grid(), x);
  }
  return fn_(i, j, x);
}

Eigen::MatrixXd MetricField::matrix(const Point& x) const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 1; i <= n_; ++i) {
    for (int j = i; j <= n_; ++j) m(i - 1, j - 1) = (*this)(i, j, x);
  }
  mirror_upper(m);
  return m;
}

TensorTube MetricField::on_grid(const TubeGrid& grid) const {
  if (tube_ && tube_->grid() == grid) return *tube_;
  if (grid.dim() != n_) throw InvalidSpec("grid dimension does not match metric");
  TensorTube out = make_metric_tube(grid);
  for (Index node = 0; node < grid.node_count(); ++node) {
    const Point x = grid.coords(node);
    for (Index s = 0; s < out.slot_count(); ++s) {
      const auto& idx = out.slot_tuples()[static_cast<std::size_t>(s)];
      out.data()(node, s) = (*this)(idx[0], idx[1], x);
    }
  }
  return out;
}

ChristoffelSymbols christoffel_from_metric(const MetricField& metric, const TubeGrid& grid,
                                           double det_tol) {
  const int n = grid.dim();
  const TensorTube g = metric.on_grid(grid);
  const auto dg = slot_partials(g);
  const SlotTable gs(g);

  TensorTube first("Gamma_first", grid, {Variance::Lower, Variance::Lower, Variance::Lower}, 1,
                   {{0, 1, PairKind::Symmetric}});
  TensorTube second = make_connection_tube(grid);
  Eigen::MatrixXd gm(n, n);
  Eigen::VectorXd lowered(n);
  for (Index node = 0; node < grid.node_count(); ++node) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) gm(i - 1, j - 1) = read(g.data(), node, gs(i, j));
    }
    const double det = small_determinant(gm);
    if (!(std::abs(det) >= det_tol)) {
      const Point x = grid.coords(node);
      throw DegenerateMetric("degenerate metric at node " + point_text(x), to_vector(x), det);
    }
    const Eigen::MatrixXd inv = small_inverse(gm, det);
    for (int i = 1; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
          const double v = 0.5 * (read(dg[static_cast<std::size_t>(i - 1)], node, gs(j, k)) +
                                  read(dg[static_cast<std::size_t>(j - 1)], node, gs(i, k)) -
                                  read(dg[static_cast<std::size_t>(k - 1)], node, gs(i, j)));
          first.set({i, j, k}, node, v);
          lowered[k - 1] = v;
        }
        for (int h = 1; h <= n; ++h) {
          second.set({h, i, j}, node, inv.row(h - 1).dot(lowered));
        }
      }
    }
  }
  return {std::move(first), ConnectionField(std::move(second))};
}

TensorTube curvature13(const ConnectionField& connection, const TubeGrid& grid) {
  const int n = grid.dim();
  const TensorTube gamma = connection.on_grid(grid);
  const auto dgamma = slot_partials(gamma);
  const SlotTable gs(gamma);
  TensorTube r = make_curvature13_tube(grid);
  const auto& G = gamma.data();
  for (Index node = 0; node < grid.node_count(); ++node) {
    for (int h = 1; h <= n; ++h) {
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          for (int k = j + 1; k <= n; ++k) {
            double v = read(dgamma[static_cast<std::size_t>(j - 1)], node, gs(h, i, k)) -
                       read(dgamma[static_cast<std::size_t>(k - 1)], node, gs(h, i, j));
            for (int m = 1; m <= n; ++m) {
              v += read(G, node, gs(m, i, k)) * read(G, node, gs(h, m, j)) -
                   read(G, node, gs(m, i, j)) * read(G, node, gs(h, m, k));
            }
            r.set({h, i, j, k}, node, v);
          }
        }
      }
    }
  }
  return r;
}

SemigeodesicResidual semigeodesic_residual(const TensorTube& g, int e) {
  SemigeodesicResidual out;
  const int n = g.dim();
  if (g.grid().node_count() == 0) return out;
  out.g11 = (g.component({1, 1}).array() - e).abs().maxCoeff();
  for (int j = 2; j <= n; ++j) {
    out.g1j = std::max(out.g1j, g.component({1, j}).cwiseAbs().maxCoeff());
  }
  return out;
}

TensorTube curvature04_semigeo(const MetricField& metric, const TubeGrid& grid,
                               double semigeodesic_tol, double det_tol) {
  const int n = grid.dim();
  const int m = n - 1;
  const TensorTube g = metric.on_grid(grid);
  require_semigeodesic(g, metric.e(), semigeodesic_tol);

  TensorTube out("R1ij1", grid, {Variance::Lower, Variance::Lower}, 2,
                 {{0, 1, PairKind::Symmetric}});
  // Transverse block columns, row-major over (i, j) with i, j ≥ 2.
  std::vector<Eigen::VectorXd> val(static_cast<std::size_t>(m * m));
  std::vector<Eigen::VectorXd> d1(static_cast<std::size_t>(m * m));
  std::vector<Eigen::VectorXd> d11(static_cast<std::size_t>(m * m));
  for (int i = 2; i <= n; ++i) {
    for (int j = 2; j <= n; ++j) {
      const auto p = static_cast<std::size_t>((i - 2) * m + (j - 2));
      val[p] = g.component({i, j});
      d1[p] = fd_partial(val[p], 1, grid);
      d11[p] = fd_second(val[p], 1, grid);
    }
  }
  Eigen::MatrixXd block(m, m), G(m, m);
  for (Index node = 0; node < grid.node_count(); ++node) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        block(a, b) = val[static_cast<std::size_t>(a * m + b)][node];
        G(a, b) = d1[static_cast<std::size_t>(a * m + b)][node];
      }
    }
    const double det = small_determinant(block);
    if (!(std::abs(det) >= det_tol)) {
      const Point x = grid.coords(node);
      throw DegenerateMetric("degenerate metric at node " + point_text(x), to_vector(x), det);
    }
    const Eigen::MatrixXd quad = G * small_inverse(block, det) * G;
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        const double v =
            0.5 * d11[static_cast<std::size_t>(a * m + b)][node] - 0.25 * quad(a, b);
        out.set({a + 2, b + 2}, node, v);
      }
    }
  }
  return out;
}

LoweredCurvature lower_and_check_identities(const MetricField& metric, const TensorTube& r13,
                                            double semigeodesic_tol) {
  const TubeGrid& grid = r13.grid();
  const int n = grid.dim();
  const int e = metric.e();
  const TensorTube g = metric.on_grid(grid);
  require_semigeodesic(g, e, semigeodesic_tol);
  const SlotTable gs(g);
  const SlotTable rs(r13);
  const auto& R = r13.data();
  const auto& gd = g.data();

  TensorTube out("R1ij1", grid, {Variance::Lower, Variance::Lower}, 2);
  double worst = 0.0;
  for (Index node = 0; node < grid.node_count(); ++node) {
    for (int i = 2; i <= n; ++i) {
      for (int j = 2; j <= n; ++j) {
        const double e1 = e * read(R, node, rs(1, i, j, 1));
        const double e2 = -e * read(R, node, rs(1, i, 1, j));
        double e3 = 0.0;
        double e4 = 0.0;
        for (int m = 1; m <= n; ++m) {
          const double gim = read(gd, node, gs(i, m));
          e3 += gim * read(R, node, rs(m, 1, 1, j));
          e4 -= gim * read(R, node, rs(m, 1, j, 1));
        }
        const double vals[4] = {e1, e2, e3, e4};
        for (int a = 0; a < 4; ++a) {
          for (int b = a + 1; b < 4; ++b) worst = std::max(worst, std::abs(vals[a] - vals[b]));
        }
        out.set({i, j}, node, e3);
      }
    }
  }
  return {std::move(out), worst};
}

}  // namespace semigeo
