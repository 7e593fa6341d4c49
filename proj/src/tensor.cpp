#include "lstar/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "lstar/error.hpp"

namespace lstar {

namespace {

std::size_t product(const std::vector<std::size_t>& xs) {
  return std::accumulate(xs.begin(), xs.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_text(const std::vector<std::size_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

void same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape())
    throw EvalError(std::string(what) + ": shape " + shape_text(a.shape()) + " vs " +
                    shape_text(b.shape()));
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != product(shape_))
    throw EvalError("tensor of shape " + shape_text(shape_) + " needs " +
                    std::to_string(product(shape_)) + " entries, got " +
                    std::to_string(data_.size()));
}

Tensor Tensor::vector(std::vector<double> xs) {
  std::size_t n = xs.size();
  return Tensor({n}, std::move(xs));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> xs) {
  return Tensor({rows, cols}, std::move(xs));
}

std::size_t Tensor::offset(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) throw EvalError("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= shape_[i]) throw EvalError("index out of range");
    off = off * shape_[i] + idx[i];
  }
  return off;
}

double& Tensor::at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
double Tensor::at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  if (product(shape) != data_.size())
    throw EvalError("cannot reshape " + shape_text(shape_) + " to " + shape_text(shape));
  return Tensor(std::move(shape), data_);
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  same_shape(a, b, "addition");
  Tensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  same_shape(a, b, "subtraction");
  Tensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Tensor operator*(double s, const Tensor& a) {
  Tensor r = a;
  for (auto& x : r.data()) x *= s;
  return r;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<std::size_t> shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  Tensor r(shape);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  return r;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  same_shape(a, b, "elementwise product");
  Tensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= b[i];
  return r;
}

Tensor matvec(const Tensor& m, const Tensor& v) {
  if (m.rank() != 2 || v.rank() != 1 || m.shape()[1] != v.shape()[0])
    throw EvalError("matrix-vector product: shape " + shape_text(m.shape()) + " times " +
                    shape_text(v.shape()));
  std::size_t rows = m.shape()[0], cols = m.shape()[1];
  Tensor r({rows});
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += m[i * cols + j] * v[j];
    r[i] = s;
  }
  return r;
}

double dot(const Tensor& a, const Tensor& b) {
  same_shape(a, b, "inner product");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  same_shape(a, b, "comparison");
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- text format

std::string format_tensor(const Tensor& t) {
  std::string out = "shape";
  for (auto d : t.shape()) out += " " + std::to_string(d);
  out += "\n";
  // one row per last-axis run keeps matrices readable
  std::size_t row = t.rank() ? t.shape().back() : 1;
  if (row == 0) row = 1;
  char buf[40];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", t[i]);
    out += buf;
    out += ((i + 1) % row == 0) ? "\n" : " ";
  }
  return out;
}

Tensor parse_tensor(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream head(line);
  std::string word;
  if (!(head >> word) || word != "shape") throw DataError("tensor text must start with 'shape'");
  std::vector<std::size_t> shape;
  std::string tok;
  while (head >> tok) {
    try {
      std::size_t used = 0;
      long long d = std::stoll(tok, &used);
      if (used != tok.size() || d <= 0) throw std::invalid_argument(tok);
      shape.push_back(static_cast<std::size_t>(d));
    } catch (const std::exception&) {
      throw DataError("bad dimension '" + tok + "' in tensor header");
    }
  }
  std::vector<double> data;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      double x = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(x)) throw std::invalid_argument(tok);
      data.push_back(x);
    } catch (const std::exception&) {
      throw DataError("bad tensor entry '" + tok + "'");
    }
  }
  if (data.size() != product(shape))
    throw DataError("tensor header " + shape_text(shape) + " needs " +
                    std::to_string(product(shape)) + " entries, found " +
                    std::to_string(data.size()));
  return Tensor(shape, std::move(data));
}

Tensor load_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tensor file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_tensor(ss.str());
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_tensor(const Tensor& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << format_tensor(t);
}

// ---------------------------------------------------------------- modes and spaces

std::string CopyMode::name() const {
  switch (kind) {
    case Kind::Cogebra: return "cogebra";
    case Kind::CofreeK: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "cofree(k=%g)", k);
      return buf;
    }
    case Kind::Full: return "full";
    case Kind::FockGrouplike: return "fock";
  }
  return "?";
}

SpaceAssignment::SpaceAssignment(std::map<std::string, std::size_t> dims) {
  for (const auto& [a, d] : dims) set(a, d);
}

void SpaceAssignment::set(const std::string& atom, std::size_t d) {
  if (d == 0) throw DataError("dimension of " + atom + " must be positive");
  dims_[atom] = d;
}

std::size_t SpaceAssignment::atom_dim(const std::string& atom) const {
  auto it = dims_.find(atom);
  if (it == dims_.end()) throw EvalError("no dimension assigned to atom " + atom);
  return it->second;
}

std::vector<std::size_t> SpaceAssignment::legs(const ObjectTerm& o, const CopyMode& mode) const {
  using K = ObjectTerm::Kind;
  switch (o.kind()) {
    case K::Unit: return {};
    case K::Base: return {atom_dim(o.atom())};
    case K::Tensor:
    case K::HomR:
    case K::HomL: {
      std::vector<std::size_t> out;
      for (const auto& c : o.children()) {
        auto l = legs(c, mode);
        out.insert(out.end(), l.begin(), l.end());
      }
      return out;
    }
    case K::Bang: {
      if (mode.identity_comonad()) return legs(o.child(0), mode);
      std::size_t n = dim(o.child(0), mode);
      if (n > kFockCap)
        throw EvalError("Fock space over " + o.child(0).text() + " has base dimension " +
                        std::to_string(n) + ", above the cap of " + std::to_string(kFockCap));
      return {std::size_t{1} << n};
    }
  }
  return {};
}

std::size_t SpaceAssignment::dim(const ObjectTerm& o, const CopyMode& mode) const {
  return product(legs(o, mode));
}

SpaceAssignment parse_dims(std::string_view text) {
  SpaceAssignment s;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw DataError("dimension entry '" + item + "' is not atom=d");
    std::string atom = item.substr(0, eq);
    std::string num = item.substr(eq + 1);
    if (!valid_atom_name(atom)) throw DataError("bad atom name '" + atom + "'");
    std::size_t used = 0;
    long long d = 0;
    try {
      d = std::stoll(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || d <= 0) throw DataError("bad dimension for " + atom + ": '" + num + "'");
    s.set(atom, static_cast<std::size_t>(d));
  }
  return s;
}

// ---------------------------------------------------------------- copying

namespace {

void want_vector(const Tensor& v, const char* what) {
  if (v.rank() != 1) throw EvalError(std::string(what) + " expects a vector, got shape " + shape_text(v.shape()));
}

std::size_t fock_base_of(const Tensor& v) {
  std::size_t n = v.size();
  if (!std::has_single_bit(n)) throw EvalError("Fock element length " + std::to_string(n) + " is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(n));
}

}  // namespace

Tensor copy_delta(const Tensor& v, const CopyMode& mode) {
  want_vector(v, "copy_delta");
  const std::size_t d = v.size();
  Tensor out({d, d});
  switch (mode.kind) {
    case CopyMode::Kind::Cogebra:
    case CopyMode::Kind::FockGrouplike:
      if (mode.kind == CopyMode::Kind::FockGrouplike) fock_base_of(v);
      for (std::size_t i = 0; i < d; ++i) out[i * d + i] = v[i];
      break;
    case CopyMode::Kind::CofreeK:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = mode.k * (v[i] + v[j]);
      break;
    case CopyMode::Kind::Full:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = v[i] * v[j];
      break;
  }
  return out;
}

double counit_e(const Tensor& v, const CopyMode& mode) {
  want_vector(v, "counit_e");
  if (mode.kind == CopyMode::Kind::FockGrouplike) {
    fock_base_of(v);
    return v[0];
  }
  double s = 0;
  for (double x : v.data()) s += x;
  return s;
}

Tensor epsilon_counit(const Tensor& v, const CopyMode& mode) {
  want_vector(v, "epsilon_counit");
  if (mode.kind != CopyMode::Kind::FockGrouplike) return v;
  std::size_t n = fock_base_of(v);
  Tensor out({n});
  for (std::size_t i = 0; i < n; ++i) out[i] = v[std::size_t{1} << i];
  return out;
}

// ---------------------------------------------------------------- Fock space

std::size_t FockSpace::layer_dim(std::size_t degree) const {
  if (degree > base_dim) return 0;
  std::size_t c = 1;
  for (std::size_t i = 0; i < degree; ++i) c = c * (base_dim - i) / (i + 1);
  return c;
}

std::size_t FockSpace::degree(std::uint32_t mask) {
  return static_cast<std::size_t>(std::popcount(mask));
}

Tensor FockSpace::basis(std::uint32_t mask) const {
  if (mask >= dim()) throw EvalError("basis word outside the Fock space");
  Tensor t({dim()});
  t[mask] = 1.0;
  return t;
}

std::string FockSpace::word(std::uint32_t mask) const {
  if (mask == 0) return "1";
  std::string out;
  for (std::size_t i = 0; i < base_dim; ++i)
    if (mask & (1u << i)) out += (out.empty() ? "e" : "^e") + std::to_string(i + 1);
  return out;
}

FockSpace fock_build(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw EvalError("Fock base dimension " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  return FockSpace{n};
}

int wedge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  // inversions: pairs i in a, j in b with i > j
  std::size_t inv = 0;
  for (std::uint32_t bb = b; bb; bb &= bb - 1) {
    std::uint32_t j = static_cast<std::uint32_t>(std::countr_zero(bb));
    inv += static_cast<std::size_t>(std::popcount(a >> (j + 1)));
  }
  return (inv % 2) ? -1 : 1;
}

Tensor wedge(const Tensor& u, const Tensor& w) {
  want_vector(u, "wedge");
  want_vector(w, "wedge");
  if (u.size() != w.size()) throw EvalError("wedge of elements from different Fock spaces");
  fock_base_of(u);
  const std::size_t d = u.size();
  Tensor out({d});
  for (std::uint32_t a = 0; a < d; ++a) {
    if (u[a] == 0.0) continue;
    for (std::uint32_t b = 0; b < d; ++b) {
      int s = wedge_sign(a, b);
      if (s) out[a | b] += s * u[a] * w[b];
    }
  }
  return out;
}

}  // namespace lstar
