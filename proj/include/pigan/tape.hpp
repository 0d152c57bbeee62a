#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pigan/kernels.hpp"
#include "pigan/matrix.hpp"

namespace pigan::ad {

enum class Op : std::uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kSquare,
  kExp,
  kLog,
  kTanh,
  kMatMul,
  kAffine,
  kSum,
  kMean,
  kLogSigmoid,
  kSoftplus,
  kClamp,
  kConcatCols,
};

class Tape;

// Handle into a Tape. Cheap to copy; invalidated by Tape::reset().
struct Value {
  Tape* tape = nullptr;
  std::uint32_t id = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  bool requires_grad = false;

  std::size_t size() const { return std::size_t(rows) * cols; }
};

// Records an eager compute graph over row-major double matrices and replays
// it in reverse for adjoints. Values live in one bump arena; reset() keeps
// the capacity so a tape can be reused across training steps. Binary
// elementwise ops broadcast 1x1 operands against any shape.
class Tape {
 public:
  explicit Tape(const kernels::Backend& backend = kernels::active());

  Value leaf(const Matrix& m, bool requires_grad = false);
  Value leaf(const double* data, std::size_t rows, std::size_t cols,
             bool requires_grad = false);
  Value scalar(double v);
  Value constant(std::size_t rows, std::size_t cols, double fill);

  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);
  Value div(Value a, Value b);
  Value neg(Value a);
  Value square(Value a);
  Value exp(Value a);
  Value log(Value a);
  Value tanh(Value a);
  Value matmul(Value a, Value b);
  // x:(m x in), w:(out x in), bias:(out x 1) -> (m x out), rows share bias
  Value affine(Value x, Value w, Value bias);
  Value sum(Value a);
  Value mean(Value a);
  Value log_sigmoid(Value a);
  Value softplus(Value a);
  Value clamp(Value a, double lo, double hi);
  Value concat_cols(Value a, Value b);

  // Seeds d(loss)/d(loss) = 1 and accumulates adjoints for every node with
  // requires_grad. loss must be 1x1.
  void backward(Value loss);

  std::span<const double> value(Value v) const;
  std::span<double> value_mut(Value v);
  std::span<const double> grad(Value v) const;
  double item(Value v) const;
  Matrix matrix(Value v) const;

  void reset();
  std::size_t node_count() const { return nodes_.size(); }
  const kernels::Backend& backend() const { return *bk_; }

 private:
  struct Node {
    Op op;
    bool rg;
    std::uint32_t a, b, c;
    std::uint32_t rows, cols;
    std::size_t voff;
    std::size_t aoff;
    double lo, hi;
  };

  static constexpr std::size_t kNoAdj = std::numeric_limits<std::size_t>::max();

  Value push(Op op, std::uint32_t rows, std::uint32_t cols, Value a, Value b,
             Value c, bool rg);
  Value binary_ew(Op op, Value a, Value b);
  Value unary_ew(Op op, Value a);
  double* scratch(std::vector<double>& buf, std::size_t n);
  void backward_node(std::uint32_t id);

  const double* vptr(std::uint32_t id) const { return val_.data() + nodes_[id].voff; }
  double* vptr(std::uint32_t id) { return val_.data() + nodes_[id].voff; }
  double* aptr(std::uint32_t id) { return adj_.data() + nodes_[id].aoff; }
  bool has_adj(std::uint32_t id) const { return nodes_[id].aoff != kNoAdj; }
  static bool is_scalar_shape(const Node& n) { return n.rows == 1 && n.cols == 1; }

  const kernels::Backend* bk_;
  std::vector<Node> nodes_;
  std::vector<double> val_;
  std::vector<double> adj_;
  std::size_t adj_size_ = 0;
  std::vector<double> s1_, s2_;
};

Value square(Value a);
Value exp(Value a);
Value log(Value a);
Value tanh(Value a);
Value matmul(Value a, Value b);
Value affine(Value x, Value w, Value bias);
Value sum(Value a);
Value mean(Value a);
Value log_sigmoid(Value a);
Value softplus(Value a);
Value clamp(Value a, double lo, double hi);
Value concat_cols(Value a, Value b);

inline Value operator+(Value a, Value b) { return a.tape->add(a, b); }
inline Value operator-(Value a, Value b) { return a.tape->sub(a, b); }
inline Value operator*(Value a, Value b) { return a.tape->mul(a, b); }
inline Value operator/(Value a, Value b) { return a.tape->div(a, b); }
inline Value operator-(Value a) { return a.tape->neg(a); }
inline Value operator+(double a, Value b) { return b.tape->add(b.tape->scalar(a), b); }
inline Value operator+(Value a, double b) { return a.tape->add(a, a.tape->scalar(b)); }
inline Value operator-(double a, Value b) { return b.tape->sub(b.tape->scalar(a), b); }
inline Value operator-(Value a, double b) { return a.tape->sub(a, a.tape->scalar(b)); }
inline Value operator*(double a, Value b) { return b.tape->mul(b.tape->scalar(a), b); }
inline Value operator*(Value a, double b) { return a.tape->mul(a, a.tape->scalar(b)); }
inline Value operator/(Value a, double b) { return a.tape->div(a, a.tape->scalar(b)); }
inline Value operator/(double a, Value b) { return b.tape->div(b.tape->scalar(a), b); }

inline Value square(Value a) { return a.tape->square(a); }
inline Value exp(Value a) { return a.tape->exp(a); }
inline Value log(Value a) { return a.tape->log(a); }
inline Value tanh(Value a) { return a.tape->tanh(a); }
inline Value matmul(Value a, Value b) { return a.tape->matmul(a, b); }
inline Value affine(Value x, Value w, Value bias) { return x.tape->affine(x, w, bias); }
inline Value sum(Value a) { return a.tape->sum(a); }
inline Value mean(Value a) { return a.tape->mean(a); }
inline Value log_sigmoid(Value a) { return a.tape->log_sigmoid(a); }
inline Value softplus(Value a) { return a.tape->softplus(a); }
inline Value clamp(Value a, double lo, double hi) { return a.tape->clamp(a, lo, hi); }
inline Value concat_cols(Value a, Value b) { return a.tape->concat_cols(a, b); }

}  // namespace pigan::ad
