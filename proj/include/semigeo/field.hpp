#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "semigeo/expr.hpp"
#include "semigeo/grid.hpp"
#include "semigeo/tensor.hpp"

namespace semigeo {

/// A scalar function of (x1, ..., xn): an expression, grid samples with
/// multilinear interpolation, or an arbitrary callable.
class ScalarField {
 public:
  using Function = std::function<double(const Point&)>;

  ScalarField() : ScalarField(0.0) {}
  ScalarField(double constant);  // NOLINT(google-explicit-constructor)
  ScalarField(FieldExpr expr);   // NOLINT(google-explicit-constructor)
  static ScalarField sampled(Eigen::VectorXd values, TubeGrid grid);
  static ScalarField function(Function f);

  double operator()(const Point& x) const;

  const FieldExpr* expression() const { return expr_ ? &*expr_ : nullptr; }
  std::optional<double> constant_value() const { return constant_; }

 private:
  struct Samples {
    Eigen::VectorXd values;
    TubeGrid grid;
  };

  std::optional<double> constant_;
  std::optional<FieldExpr> expr_;
  std::shared_ptr<const Samples> samples_;
  Function fn_;
};

/// Tensor components given as scalar fields, keyed by index tuple.
/// Missing components read as zero.
class FieldSet {
 public:
  void set(IndexTuple idx, ScalarField field) { fields_[std::move(idx)] = std::move(field); }
  const ScalarField* find(const IndexTuple& idx) const {
    const auto it = fields_.find(idx);
    return it == fields_.end() ? nullptr : &it->second;
  }
  bool contains(const IndexTuple& idx) const { return fields_.count(idx) != 0; }
  double value(const IndexTuple& idx, const Point& x) const {
    const ScalarField* f = find(idx);
    return f ? (*f)(x) : 0.0;
  }
  const std::map<IndexTuple, ScalarField>& entries() const { return fields_; }
  bool empty() const { return fields_.empty(); }

 private:
  std::map<IndexTuple, ScalarField> fields_;
};

}  // namespace semigeo
