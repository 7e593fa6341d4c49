#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lstar/morphism.hpp"

namespace lstar {

// Dense row-major array of doubles. A rank-0 tensor holds one scalar.
class Tensor {
 public:
  Tensor() : data_(1, 0.0) {}
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double x) { return Tensor({}, {x}); }
  static Tensor vector(std::vector<double> xs);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> xs);

  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }
  double& at(const std::vector<std::size_t>& idx);
  double at(const std::vector<std::size_t>& idx) const;

  Tensor reshaped(std::vector<std::size_t> shape) const;

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t offset(const std::vector<std::size_t>& idx) const;

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(double s, const Tensor& a);
Tensor outer(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
// m (rows x cols) times v (cols)
Tensor matvec(const Tensor& m, const Tensor& v);
double dot(const Tensor& a, const Tensor& b);
double max_abs_diff(const Tensor& a, const Tensor& b);

// "shape d1 d2 ...", then the entries with 17 significant digits.
std::string format_tensor(const Tensor& t);
Tensor parse_tensor(std::string_view text);
Tensor load_tensor(const std::string& path);
void save_tensor(const Tensor& t, const std::string& path);

struct CopyMode {
  enum class Kind { Cogebra, CofreeK, Full, FockGrouplike };
  Kind kind = Kind::Cogebra;
  double k = 1.0;  // CofreeK padding constant

  static CopyMode cogebra() { return {Kind::Cogebra, 1.0}; }
  static CopyMode cofree(double k = 1.0) { return {Kind::CofreeK, k}; }
  static CopyMode full() { return {Kind::Full, 1.0}; }
  static CopyMode fock() { return {Kind::FockGrouplike, 1.0}; }

  bool linear() const { return kind != Kind::Full; }
  bool identity_comonad() const { return kind != Kind::FockGrouplike; }
  std::string name() const;
};

inline constexpr std::size_t kFockCap = 12;

// Atom dimensions, and the leg profile of any object under a copy mode:
// Unit -> [], Base -> [d], Tensor and both homs -> concatenation, Bang -> the body's legs
// for identity comonads, one leg of size 2^dim(body) for the Fock space.
class SpaceAssignment {
 public:
  SpaceAssignment() = default;
  explicit SpaceAssignment(std::map<std::string, std::size_t> dims);

  void set(const std::string& atom, std::size_t d);
  bool has(const std::string& atom) const { return dims_.count(atom) != 0; }
  std::size_t atom_dim(const std::string& atom) const;
  const std::map<std::string, std::size_t>& dims() const { return dims_; }

  std::vector<std::size_t> legs(const ObjectTerm& o, const CopyMode& mode) const;
  std::size_t dim(const ObjectTerm& o, const CopyMode& mode) const;

 private:
  std::map<std::string, std::size_t> dims_;
};

// "NP=3,S=2"
SpaceAssignment parse_dims(std::string_view text);

// Comultiplication on a vector, returned as a d x d matrix.
Tensor copy_delta(const Tensor& v, const CopyMode& mode);
// Comonoid counit: coordinate sum, or the degree-0 coefficient in the Fock space.
double counit_e(const Tensor& v, const CopyMode& mode);
// Comonad counit: identity, or the degree-1 layer of a Fock element as a base vector.
Tensor epsilon_counit(const Tensor& v, const CopyMode& mode);

// Exterior algebra over R^n. Basis elements are subsets of {0..n-1} stored as bitmasks,
// e_{i1} ^ ... ^ e_{ik} with i1 < ... < ik.
struct FockSpace {
  std::size_t base_dim = 0;

  std::size_t dim() const { return std::size_t{1} << base_dim; }
  std::size_t layer_dim(std::size_t degree) const;
  static std::size_t degree(std::uint32_t mask);
  Tensor basis(std::uint32_t mask) const;
  std::string word(std::uint32_t mask) const;  // "1", "e1", "e1^e3"
};

FockSpace fock_build(std::size_t n, std::size_t cap = kFockCap);
// Sign of concatenating the sorted words a and b, zero when they share an index.
int wedge_sign(std::uint32_t a, std::uint32_t b);
Tensor wedge(const Tensor& u, const Tensor& w);

// Evaluates the term on one input tensor per domain factor, each shaped as that factor's
// leg profile. The result is shaped as the concatenated codomain legs.
Tensor eval_morphism(const TypedMorphism& m, const std::vector<Tensor>& inputs,
                     const CopyMode& mode, const SpaceAssignment& spaces);

}  // namespace lstar
