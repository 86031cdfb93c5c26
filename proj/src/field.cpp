#include "semigeo/field.hpp"

#include <span>

namespace semigeo {

ScalarField::ScalarField(double constant) : constant_(constant) {}

ScalarField::ScalarField(FieldExpr expr) : expr_(std::move(expr)) {}

ScalarField ScalarField::sampled(Eigen::VectorXd values, TubeGrid grid) {
  if (values.size() != grid.node_count()) {
    throw InvalidSpec("sampled field does not match its grid");
  }
  ScalarField f;
  f.constant_.reset();
  f.samples_ = std::make_shared<const Samples>(Samples{std::move(values), std::move(grid)});
  return f;
}

ScalarField ScalarField::function(Function fn) {
  ScalarField f;
  f.constant_.reset();
  f.fn_ = std::move(fn);
  return f;
}

double ScalarField::operator()(const Point& x) const {
  if (constant_) return *constant_;
  if (expr_) return (*expr_)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  if (samples_) return interpolate(samples_->values, samples_->grid, x);
  return fn_(x);
}

}  // namespace semigeo
