#pragma once

// Tensor grid dumps: comma-separated text with a mandatory header
//
//   x1,...,xn,tensor,index,value
//
// and one row per (node, component). The index tuple is quoted ("1,2,2").
// Reals are written in shortest round-trip form, so reading a dump back
// reproduces every value bit for bit.

#include <iosfwd>
#include <string>
#include <vector>

#include "semigeo/tensor.hpp"

namespace semigeo {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Rows in node order, components in lexicographic index order.
void write_dump(std::ostream& out, const std::vector<const TensorTube*>& tensors);
void write_dump(std::ostream& out, const TensorTube& tensor);

/// Fill a tube of the given shape from the rows named shape.name().
/// Mirror components must agree; every component must be present.
TensorTube read_dump(std::istream& in, const TensorTube& shape);

}  // namespace semigeo
