#include "semigeo/tensor.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "semigeo/error.hpp"

namespace semigeo {

TensorTube::TensorTube(std::string name, TubeGrid grid,
                       std::vector<Variance> roles, int first_index,
                       std::vector<PairSymmetry> symmetries)
    : name_(std::move(name)),
      grid_(std::move(grid)),
      roles_(std::move(roles)),
      first_(first_index),
      symmetries_(std::move(symmetries)) {
  const int r = rank();
  for (const auto& s : symmetries_) {
    if (s.first < 0 || s.second >= r || s.first >= s.second) {
      throw InvalidSpec("bad index symmetry declaration");
    }
  }
  const int range = dim() - first_ + 1;
  if (range < 1) throw InvalidSpec("empty index range");
  Index total = 1;
  for (int i = 0; i < r; ++i) total *= range;
  table_.assign(static_cast<std::size_t>(total), SlotRef{});

  std::map<IndexTuple, Index> slot_of;
  IndexTuple idx(static_cast<std::size_t>(r), first_);
  for (Index f = 0; f < total; ++f) {
    IndexTuple canon = idx;
    int sign = 1;
    for (const auto& s : symmetries_) {
      auto& a = canon[static_cast<std::size_t>(s.first)];
      auto& b = canon[static_cast<std::size_t>(s.second)];
      if (s.kind == PairKind::Antisymmetric && a == b) sign = 0;
      if (a > b) {
        std::swap(a, b);
        if (s.kind == PairKind::Antisymmetric) sign = -sign;
      }
    }
    if (sign != 0) {
      auto [it, inserted] =
          slot_of.emplace(canon, static_cast<Index>(slot_tuples_.size()));
      if (inserted) slot_tuples_.push_back(canon);
      table_[static_cast<std::size_t>(f)] = SlotRef{it->second, sign};
    }
    for (int pos = r - 1; pos >= 0; --pos) {
      auto& v = idx[static_cast<std::size_t>(pos)];
      if (++v <= dim()) break;
      v = first_;
    }
  }
  data_ = Eigen::MatrixXd::Zero(grid_.node_count(), slot_count());
}

Index TensorTube::flat(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) {
    throw InvalidSpec("index tuple has wrong rank for tensor " + name_);
  }
  const int range = dim() - first_ + 1;
  Index f = 0;
  for (int v : idx) {
    if (v < first_ || v > dim()) {
      throw InvalidSpec("component index out of range for tensor " + name_);
    }
    f = f * range + (v - first_);
  }
  return f;
}

TensorTube::SlotRef TensorTube::locate(std::span<const int> idx) const {
  return table_[static_cast<std::size_t>(flat(idx))];
}

void TensorTube::set(std::span<const int> idx, Index node, double value) {
  const SlotRef r = locate(idx);
  if (r.sign == 0) {
    if (value != 0.0) throw InvalidSpec("component is structurally zero");
    return;
  }
  data_(node, r.slot) = r.sign * value;
}

Eigen::VectorXd TensorTube::component(std::span<const int> idx) const {
  const SlotRef r = locate(idx);
  if (r.sign == 0) return Eigen::VectorXd::Zero(grid_.node_count());
  return r.sign * data_.col(r.slot);
}

void TensorTube::assign(std::span<const int> idx, const Eigen::VectorXd& values) {
  const SlotRef r = locate(idx);
  if (values.size() != grid_.node_count()) {
    throw InvalidSpec("value count does not match the grid");
  }
  if (r.sign == 0) {
    if (values.cwiseAbs().maxCoeff() != 0.0) {
      throw InvalidSpec("component is structurally zero");
    }
    return;
  }
  data_.col(r.slot) = r.sign * values;
}

std::vector<IndexTuple> TensorTube::all_tuples() const {
  std::vector<IndexTuple> out;
  const int r = rank();
  IndexTuple idx(static_cast<std::size_t>(r), first_);
  const std::size_t total = table_.size();
  out.reserve(total);
  for (std::size_t f = 0; f < total; ++f) {
    out.push_back(idx);
    for (int pos = r - 1; pos >= 0; --pos) {
      auto& v = idx[static_cast<std::size_t>(pos)];
      if (++v <= dim()) break;
      v = first_;
    }
  }
  return out;
}

TensorTube TensorTube::with_grid(TubeGrid grid) const {
  return TensorTube(name_, std::move(grid), roles_, first_, symmetries_);
}

TensorTube TensorTube::slice_x1(Index first, Index last) const {
  TensorTube out = with_grid(grid_.slice_x1(first, last));
  const Index t = grid_.transverse_count();
  out.data_ = data_.middleRows(first * t, (last - first + 1) * t);
  return out;
}

TensorTube make_connection_tube(const TubeGrid& grid, std::string name) {
  return TensorTube(std::move(name), grid,
                    {Variance::Upper, Variance::Lower, Variance::Lower}, 1,
                    {{1, 2, PairKind::Symmetric}});
}

TensorTube make_metric_tube(const TubeGrid& grid, std::string name,
                            int first_index) {
  return TensorTube(std::move(name), grid, {Variance::Lower, Variance::Lower},
                    first_index, {{0, 1, PairKind::Symmetric}});
}

TensorTube make_curvature13_tube(const TubeGrid& grid, std::string name) {
  return TensorTube(
      std::move(name), grid,
      {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower}, 1,
      {{2, 3, PairKind::Antisymmetric}});
}

}  // namespace semigeo
