#include "semigeo/tensor_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "semigeo/error.hpp"

namespace semigeo {

std::string format_real(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string tuple_text(const IndexTuple& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx[i]);
  }
  return s;
}

std::string header(int n) {
  std::string h;
  for (int i = 1; i <= n; ++i) h += "x" + std::to_string(i) + ",";
  return h + "tensor,index,value";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InvalidSpec("unterminated quote in dump row");
  cells.push_back(cur);
  return cells;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidSpec("malformed real in dump: '" + s + "'");
  }
  return v;
}

}  // namespace

void write_dump(std::ostream& out, const std::vector<const TensorTube*>& tensors) {
  if (tensors.empty()) return;
  const int n = tensors.front()->dim();
  out << header(n) << '\n';
  for (const TensorTube* t : tensors) {
    const auto tuples = t->all_tuples();
    std::vector<std::string> labels;
    labels.reserve(tuples.size());
    for (const auto& idx : tuples) labels.push_back(tuple_text(idx));
    const TubeGrid& grid = t->grid();
    for (Index node = 0; node < grid.node_count(); ++node) {
      std::string prefix;
      const Point x = grid.coords(node);
      for (int i = 0; i < n; ++i) prefix += format_real(x[i]) + ",";
      for (std::size_t c = 0; c < tuples.size(); ++c) {
        out << prefix << t->name() << ",\"" << labels[c] << "\","
            << format_real(t->at(tuples[c], node)) << '\n';
      }
    }
  }
}

void write_dump(std::ostream& out, const TensorTube& tensor) {
  write_dump(out, std::vector<const TensorTube*>{&tensor});
}

TensorTube read_dump(std::istream& in, const TensorTube& shape) {
  TensorTube out = shape.with_grid(shape.grid());
  const TubeGrid& grid = out.grid();
  const int n = grid.dim();
  std::string line;
  if (!std::getline(in, line) || line != header(n)) {
    throw InvalidSpec("dump header missing or wrong dimension");
  }
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(out.data().rows(), out.data().cols());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != static_cast<std::size_t>(n + 3)) {
      throw InvalidSpec("dump row has wrong column count");
    }
    if (cells[static_cast<std::size_t>(n)] != out.name()) continue;
    Index node = 0;
    for (int axis = 1; axis <= n; ++axis) {
      const double v = parse_real(cells[static_cast<std::size_t>(axis - 1)]);
      const auto& nodes = grid.axis_nodes(axis);
      const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
      if (it == nodes.end() || *it != v) {
        throw InvalidSpec("dump coordinate is not a grid node");
      }
      node += static_cast<Index>(it - nodes.begin()) * grid.stride(axis);
    }
    IndexTuple idx;
    std::stringstream ss(cells[static_cast<std::size_t>(n + 1)]);
    std::string part;
    while (std::getline(ss, part, ',')) idx.push_back(std::stoi(part));
    const double value = parse_real(cells[static_cast<std::size_t>(n + 2)]);
    const auto ref = out.locate(idx);
    if (ref.sign == 0) {
      if (value != 0.0) throw InvalidSpec("nonzero value for a zero component");
      continue;
    }
    const double stored = ref.sign * value;
    if (seen(node, ref.slot) && out.data()(node, ref.slot) != stored) {
      throw InvalidSpec("mirror components disagree in dump");
    }
    out.data()(node, ref.slot) = stored;
    seen(node, ref.slot) = 1;
  }
  if (seen.size() && seen.minCoeff() == 0) {
    throw InvalidSpec("dump is missing components of " + out.name());
  }
  return out;
}

}  // namespace semigeo
