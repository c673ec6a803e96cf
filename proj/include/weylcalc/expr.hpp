#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace weyl {

/// Raised by ScalarField::parse; `offset` is the byte position in the input.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"),
        offset(off) {}
};

/// Raised when evaluation hits a domain problem (division by zero, ln of a
/// non-positive argument, fractional power of a non-positive base).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class EvalCache;

/// Immutable symbolic scalar field over n named coordinates.
///
/// Supports exact partial differentiation and point evaluation. Nodes are
/// shared (the tree is really a DAG), which keeps derivatives of large
/// composite fields cheap to evaluate with an EvalCache.
class ScalarField {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Sin, Cos };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  using NamesPtr = std::shared_ptr<const std::vector<std::string>>;

  struct Node {
    Kind kind;
    double value = 0.0;  // Const payload; Pow exponent
    int var = -1;        // Var index
    NodePtr a, b;
  };

  ScalarField() = default;

  static ScalarField parse(const std::string& text,
                           const std::vector<std::string>& coordinate_names);
  static ScalarField constant(double c, NamesPtr names);
  static ScalarField coordinate(int index, NamesPtr names);
  static NamesPtr make_names(std::vector<std::string> names);

  bool valid() const { return root_ != nullptr; }
  int nvars() const { return static_cast<int>(names_->size()); }
  const std::vector<std::string>& names() const { return *names_; }
  const NamesPtr& names_ptr() const { return names_; }
  const NodePtr& root() const { return root_; }

  /// True if the field is structurally the constant c.
  bool is_constant(double c) const {
    return root_ && root_->kind == Kind::Const && root_->value == c;
  }

  ScalarField differentiate(int i) const;
  double evaluate(const std::vector<double>& point) const;
  double evaluate(const std::vector<double>& point, EvalCache& cache) const;
  std::string print() const;

  friend ScalarField operator+(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&, const ScalarField&);
  friend ScalarField operator*(const ScalarField&, const ScalarField&);
  friend ScalarField operator/(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&);
  ScalarField pow(double exponent) const;

  friend ScalarField exp(const ScalarField&);
  friend ScalarField ln(const ScalarField&);
  friend ScalarField sin(const ScalarField&);
  friend ScalarField cos(const ScalarField&);

  ScalarField(NodePtr root, NamesPtr names)
      : root_(std::move(root)), names_(std::move(names)) {}

 private:
  NodePtr root_;
  NamesPtr names_;
};

/// Per-point memo for evaluating many fields that share subexpressions.
/// Bind one cache to one point; never reuse across points. Keys are owning
/// pointers: the cache must keep nodes alive, otherwise a freed node's
/// address can be reused by a later field and alias a stale entry.
class EvalCache {
 public:
  std::unordered_map<ScalarField::NodePtr, double> memo;
};

/// FNV-1a digest of the printed form (used in report metadata).
std::uint64_t field_digest(const ScalarField& f);

/// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

}  // namespace weyl
