#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "semigeo/grid.hpp"

namespace semigeo {

enum class Variance { Upper, Lower };
enum class PairKind { Symmetric, Antisymmetric };

/// Declared (anti)symmetry between two index positions (0-based, disjoint).
struct PairSymmetry {
  int first;
  int second;
  PairKind kind;
};

using IndexTuple = std::vector<int>;

/// Tensor components sampled on a TubeGrid. Every index runs over
/// first_index()..n. Components related by a declared symmetry share a
/// single storage slot, so stored data respects the symmetry exactly.
class TensorTube {
 public:
  struct SlotRef {
    Index slot = -1;
    int sign = 0;  // 0 marks a structurally zero component
  };

  TensorTube() = default;
  TensorTube(std::string name, TubeGrid grid, std::vector<Variance> roles,
             int first_index = 1, std::vector<PairSymmetry> symmetries = {});

  const std::string& name() const { return name_; }
  const TubeGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  int rank() const { return static_cast<int>(roles_.size()); }
  int first_index() const { return first_; }
  const std::vector<Variance>& roles() const { return roles_; }
  const std::vector<PairSymmetry>& symmetries() const { return symmetries_; }

  Index slot_count() const { return static_cast<Index>(slot_tuples_.size()); }
  /// Canonical index tuple stored in each slot.
  const std::vector<IndexTuple>& slot_tuples() const { return slot_tuples_; }
  /// Every index tuple in lexicographic order.
  std::vector<IndexTuple> all_tuples() const;

  SlotRef locate(std::span<const int> idx) const;
  SlotRef locate(std::initializer_list<int> idx) const {
    return locate(std::span<const int>(idx.begin(), idx.size()));
  }

  double at(std::span<const int> idx, Index node) const {
    const SlotRef r = locate(idx);
    return r.sign == 0 ? 0.0 : r.sign * data_(node, r.slot);
  }
  double at(std::initializer_list<int> idx, Index node) const {
    return at(std::span<const int>(idx.begin(), idx.size()), node);
  }
  /// Writes through the symmetry; writing a structurally zero slot throws.
  void set(std::span<const int> idx, Index node, double value);
  void set(std::initializer_list<int> idx, Index node, double value) {
    set(std::span<const int>(idx.begin(), idx.size()), node, value);
  }

  Eigen::VectorXd component(std::span<const int> idx) const;
  Eigen::VectorXd component(std::initializer_list<int> idx) const {
    return component(std::span<const int>(idx.begin(), idx.size()));
  }
  void assign(std::span<const int> idx, const Eigen::VectorXd& values);
  void assign(std::initializer_list<int> idx, const Eigen::VectorXd& values) {
    assign(std::span<const int>(idx.begin(), idx.size()), values);
  }

  /// node_count x slot_count, one column per storage slot.
  Eigen::MatrixXd& data() { return data_; }
  const Eigen::MatrixXd& data() const { return data_; }

  /// Same shape and symmetries on another grid, zero filled.
  TensorTube with_grid(TubeGrid grid) const;

  /// Keep x1 samples first..last (inclusive).
  TensorTube slice_x1(Index first, Index last) const;

  double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Index flat(std::span<const int> idx) const;

  std::string name_;
  TubeGrid grid_;
  std::vector<Variance> roles_;
  int first_ = 1;
  std::vector<PairSymmetry> symmetries_;
  std::vector<SlotRef> table_;
  std::vector<IndexTuple> slot_tuples_;
  Eigen::MatrixXd data_;
};

/// Γ^h_ij: one upper, two symmetric lower indices.
TensorTube make_connection_tube(const TubeGrid& grid, std::string name = "Gamma");
/// g_ij over 1..n (first_index 1) or a transverse block (first_index 2).
TensorTube make_metric_tube(const TubeGrid& grid, std::string name = "g",
                            int first_index = 1);
/// R^h_ijk, antisymmetric in the last two indices.
TensorTube make_curvature13_tube(const TubeGrid& grid, std::string name = "R");

}  // namespace semigeo
