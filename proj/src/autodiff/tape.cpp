#include "pigan/tape.hpp"

#include <cmath>
#include <cstring>

#include "pigan/check.hpp"

namespace pigan::ad {

namespace {

inline double stable_softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

Tape::Tape(const kernels::Backend& backend) : bk_(&backend) {}

Value Tape::push(Op op, std::uint32_t rows, std::uint32_t cols, Value a, Value b,
                 Value c, bool rg) {
  Node n;
  n.op = op;
  n.rg = rg;
  n.a = a.id;
  n.b = b.id;
  n.c = c.id;
  n.rows = rows;
  n.cols = cols;
  n.voff = val_.size();
  n.lo = 0.0;
  n.hi = 0.0;
  val_.resize(n.voff + std::size_t(rows) * cols);  // new slots start at 0
  if (rg) {
    n.aoff = adj_size_;
    adj_size_ += std::size_t(rows) * cols;
  } else {
    n.aoff = kNoAdj;
  }
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  return Value{this, id, rows, cols, rg};
}

Value Tape::leaf(const Matrix& m, bool requires_grad) {
  return leaf(m.data.data(), m.rows, m.cols, requires_grad);
}

Value Tape::leaf(const double* data, std::size_t rows, std::size_t cols,
                 bool requires_grad) {
  for (std::size_t i = 0; i < rows * cols; ++i)
    if (!std::isfinite(data[i]))
      throw std::invalid_argument("tape leaf rejects non-finite values");
  Value v = push(Op::kLeaf, static_cast<std::uint32_t>(rows),
                 static_cast<std::uint32_t>(cols), {}, {}, {}, requires_grad);
  std::memcpy(vptr(v.id), data, rows * cols * sizeof(double));
  return v;
}

Value Tape::scalar(double v) { return leaf(&v, 1, 1, false); }

Value Tape::constant(std::size_t rows, std::size_t cols, double fill) {
  Value v = push(Op::kLeaf, static_cast<std::uint32_t>(rows),
                 static_cast<std::uint32_t>(cols), {}, {}, {}, false);
  double* p = vptr(v.id);
  for (std::size_t i = 0; i < rows * cols; ++i) p[i] = fill;
  return v;
}

Value Tape::binary_ew(Op op, Value a, Value b) {
  PIGAN_CHECK(a.tape == this && b.tape == this, "operands from another tape");
  const bool sa = a.rows == 1 && a.cols == 1;
  const bool sb = b.rows == 1 && b.cols == 1;
  PIGAN_CHECK(sa || sb || (a.rows == b.rows && a.cols == b.cols),
              "shape mismatch in elementwise op");
  const std::uint32_t r = sa ? b.rows : a.rows;
  const std::uint32_t c = sa ? b.cols : a.cols;
  Value out = push(op, r, c, a, b, {}, a.requires_grad || b.requires_grad);
  const double* pa = vptr(a.id);
  const double* pb = vptr(b.id);
  double* po = vptr(out.id);
  const std::size_t n = out.size();
  if (op == Op::kDiv) {
    for (std::size_t i = 0, dn = b.size(); i < dn; ++i)
      if (pb[i] == 0.0) throw std::domain_error("tape div: division by zero");
  }
  if (a.size() == b.size()) {
    switch (op) {
      case Op::kAdd: bk_->ew_add(pa, pb, po, n); break;
      case Op::kSub: bk_->ew_sub(pa, pb, po, n); break;
      case Op::kMul: bk_->ew_mul(pa, pb, po, n); break;
      case Op::kDiv: bk_->ew_div(pa, pb, po, n); break;
      default: PIGAN_CHECK(false, "not a binary elementwise op");
    }
  } else if (sb) {
    const double s = pb[0];
    switch (op) {
      case Op::kAdd: bk_->ew_adds(pa, s, po, n); break;
      case Op::kSub: bk_->ew_adds(pa, -s, po, n); break;
      case Op::kMul: bk_->scale(s, pa, po, n); break;
      case Op::kDiv: bk_->ew_divs(pa, s, po, n); break;
      default: PIGAN_CHECK(false, "not a binary elementwise op");
    }
  } else {
    const double s = pa[0];
    switch (op) {
      case Op::kAdd: bk_->ew_adds(pb, s, po, n); break;
      case Op::kSub: bk_->ew_rsubs(pb, s, po, n); break;
      case Op::kMul: bk_->scale(s, pb, po, n); break;
      case Op::kDiv: bk_->ew_rdivs(pb, s, po, n); break;
      default: PIGAN_CHECK(false, "not a binary elementwise op");
    }
  }
  return out;
}

Value Tape::add(Value a, Value b) { return binary_ew(Op::kAdd, a, b); }
Value Tape::sub(Value a, Value b) { return binary_ew(Op::kSub, a, b); }
Value Tape::mul(Value a, Value b) { return binary_ew(Op::kMul, a, b); }
Value Tape::div(Value a, Value b) { return binary_ew(Op::kDiv, a, b); }

Value Tape::unary_ew(Op op, Value a) {
  PIGAN_CHECK(a.tape == this, "operand from another tape");
  Value out = push(op, a.rows, a.cols, a, {}, {}, a.requires_grad);
  const double* pa = vptr(a.id);
  double* po = vptr(out.id);
  const std::size_t n = out.size();
  switch (op) {
    case Op::kNeg: bk_->ew_neg(pa, po, n); break;
    case Op::kSquare: bk_->ew_square(pa, po, n); break;
    case Op::kExp: bk_->ew_exp(pa, po, n); break;
    case Op::kTanh: bk_->ew_tanh(pa, po, n); break;
    case Op::kLog:
      for (std::size_t i = 0; i < n; ++i) {
        if (!(pa[i] > 0.0)) throw std::domain_error("tape log: non-positive input");
        po[i] = std::log(pa[i]);
      }
      break;
    case Op::kLogSigmoid:
      for (std::size_t i = 0; i < n; ++i) po[i] = -stable_softplus(-pa[i]);
      break;
    case Op::kSoftplus:
      for (std::size_t i = 0; i < n; ++i) po[i] = stable_softplus(pa[i]);
      break;
    default: PIGAN_CHECK(false, "not a unary elementwise op");
  }
  return out;
}

Value Tape::neg(Value a) { return unary_ew(Op::kNeg, a); }
Value Tape::square(Value a) { return unary_ew(Op::kSquare, a); }
Value Tape::exp(Value a) { return unary_ew(Op::kExp, a); }
Value Tape::log(Value a) { return unary_ew(Op::kLog, a); }
Value Tape::tanh(Value a) { return unary_ew(Op::kTanh, a); }
Value Tape::log_sigmoid(Value a) { return unary_ew(Op::kLogSigmoid, a); }
Value Tape::softplus(Value a) { return unary_ew(Op::kSoftplus, a); }

Value Tape::clamp(Value a, double lo, double hi) {
  PIGAN_CHECK(a.tape == this, "operand from another tape");
  PIGAN_CHECK(lo <= hi, "clamp bounds out of order");
  Value out = push(Op::kClamp, a.rows, a.cols, a, {}, {}, a.requires_grad);
  nodes_[out.id].lo = lo;
  nodes_[out.id].hi = hi;
  const double* pa = vptr(a.id);
  double* po = vptr(out.id);
  for (std::size_t i = 0, n = out.size(); i < n; ++i)
    po[i] = std::min(std::max(pa[i], lo), hi);
  return out;
}

Value Tape::matmul(Value a, Value b) {
  PIGAN_CHECK(a.tape == this && b.tape == this, "operands from another tape");
  PIGAN_CHECK(a.cols == b.rows, "matmul inner dimensions differ");
  Value out = push(Op::kMatMul, a.rows, b.cols, a, b, {},
                   a.requires_grad || b.requires_grad);
  bk_->gemm_nn_acc(vptr(a.id), vptr(b.id), vptr(out.id), a.rows, a.cols, b.cols);
  return out;
}

Value Tape::affine(Value x, Value w, Value bias) {
  PIGAN_CHECK(x.tape == this && w.tape == this && bias.tape == this,
              "operands from another tape");
  PIGAN_CHECK(x.cols == w.cols, "affine: input width != weight fan-in");
  PIGAN_CHECK(bias.rows == w.rows && bias.cols == 1, "affine: bias shape");
  Value out = push(Op::kAffine, x.rows, w.rows, x, w, bias,
                   x.requires_grad || w.requires_grad || bias.requires_grad);
  double* po = vptr(out.id);
  const double* pb = vptr(bias.id);
  for (std::uint32_t i = 0; i < x.rows; ++i)
    std::memcpy(po + std::size_t(i) * w.rows, pb, w.rows * sizeof(double));
  bk_->gemm_nt(vptr(x.id), vptr(w.id), po, x.rows, x.cols, w.rows, true);
  return out;
}

Value Tape::sum(Value a) {
  PIGAN_CHECK(a.tape == this, "operand from another tape");
  Value out = push(Op::kSum, 1, 1, a, {}, {}, a.requires_grad);
  *vptr(out.id) = bk_->sum(vptr(a.id), a.size());
  return out;
}

Value Tape::mean(Value a) {
  PIGAN_CHECK(a.tape == this, "operand from another tape");
  PIGAN_CHECK(a.size() > 0, "mean of empty value");
  Value out = push(Op::kMean, 1, 1, a, {}, {}, a.requires_grad);
  *vptr(out.id) = bk_->sum(vptr(a.id), a.size()) / double(a.size());
  return out;
}

Value Tape::concat_cols(Value a, Value b) {
  PIGAN_CHECK(a.tape == this && b.tape == this, "operands from another tape");
  PIGAN_CHECK(a.rows == b.rows, "concat_cols: row counts differ");
  Value out = push(Op::kConcatCols, a.rows, a.cols + b.cols, a, b, {},
                   a.requires_grad || b.requires_grad);
  const double* pa = vptr(a.id);
  const double* pb = vptr(b.id);
  double* po = vptr(out.id);
  for (std::uint32_t i = 0; i < a.rows; ++i) {
    std::memcpy(po, pa + std::size_t(i) * a.cols, a.cols * sizeof(double));
    po += a.cols;
    std::memcpy(po, pb + std::size_t(i) * b.cols, b.cols * sizeof(double));
    po += b.cols;
  }
  return out;
}

std::span<const double> Tape::value(Value v) const {
  return {vptr(v.id), v.size()};
}

std::span<double> Tape::value_mut(Value v) { return {vptr(v.id), v.size()}; }

std::span<const double> Tape::grad(Value v) const {
  PIGAN_CHECK(v.requires_grad, "grad() on a node without requires_grad");
  return {adj_.data() + nodes_[v.id].aoff, v.size()};
}

double Tape::item(Value v) const {
  PIGAN_CHECK(v.size() == 1, "item() on a non-scalar value");
  return *vptr(v.id);
}

Matrix Tape::matrix(Value v) const {
  Matrix m(v.rows, v.cols);
  std::memcpy(m.data.data(), vptr(v.id), v.size() * sizeof(double));
  return m;
}

void Tape::reset() {
  nodes_.clear();
  val_.clear();
  adj_size_ = 0;
}

double* Tape::scratch(std::vector<double>& buf, std::size_t n) {
  if (buf.size() < n) buf.resize(n);
  return buf.data();
}

void Tape::backward(Value loss) {
  PIGAN_CHECK(loss.tape == this, "loss from another tape");
  PIGAN_CHECK(loss.size() == 1, "backward() needs a scalar loss");
  adj_.assign(adj_size_, 0.0);
  if (!loss.requires_grad) return;  // every differentiable leaf gets zero
  adj_[nodes_[loss.id].aoff] = 1.0;
  for (std::uint32_t id = loss.id + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (!n.rg || n.op == Op::kLeaf) continue;
    backward_node(id);
  }
}

void Tape::backward_node(std::uint32_t id) {
  const Node n = nodes_[id];
  const double* go = adj_.data() + n.aoff;
  const double* out = vptr(id);
  const std::size_t sz = std::size_t(n.rows) * n.cols;

  const auto acc_scaled = [&](std::uint32_t arg, double alpha, const double* src,
                              std::size_t len) {
    if (has_adj(arg)) bk_->axpy(alpha, src, aptr(arg), len);
  };

  switch (n.op) {
    case Op::kAdd:
    case Op::kSub: {
      const Node& na = nodes_[n.a];
      const Node& nb = nodes_[n.b];
      const double sb = n.op == Op::kSub ? -1.0 : 1.0;
      if (has_adj(n.a)) {
        if (is_scalar_shape(na) && sz > 1)
          *aptr(n.a) += bk_->sum(go, sz);
        else
          bk_->axpy(1.0, go, aptr(n.a), sz);
      }
      if (has_adj(n.b)) {
        if (is_scalar_shape(nb) && sz > 1)
          *aptr(n.b) += sb * bk_->sum(go, sz);
        else
          bk_->axpy(sb, go, aptr(n.b), sz);
      }
      break;
    }
    case Op::kMul: {
      const Node& na = nodes_[n.a];
      const Node& nb = nodes_[n.b];
      const bool sa = is_scalar_shape(na) && sz > 1;
      const bool sb = is_scalar_shape(nb) && sz > 1;
      if (has_adj(n.a)) {
        if (sa)
          *aptr(n.a) += bk_->dot(go, vptr(n.b), sz);
        else if (sb)
          bk_->axpy(*vptr(n.b), go, aptr(n.a), sz);
        else
          bk_->ew_acc_mul(go, vptr(n.b), aptr(n.a), sz);
      }
      if (has_adj(n.b)) {
        if (sb)
          *aptr(n.b) += bk_->dot(go, vptr(n.a), sz);
        else if (sa)
          bk_->axpy(*vptr(n.a), go, aptr(n.b), sz);
        else
          bk_->ew_acc_mul(go, vptr(n.a), aptr(n.b), sz);
      }
      break;
    }
    case Op::kDiv: {
      const Node& na = nodes_[n.a];
      const Node& nb = nodes_[n.b];
      const bool sb = is_scalar_shape(nb) && sz > 1;
      const bool sa = is_scalar_shape(na) && sz > 1;
      if (sb) {
        const double b0 = *vptr(n.b);
        if (has_adj(n.a)) bk_->axpy(1.0 / b0, go, aptr(n.a), sz);
        if (has_adj(n.b)) *aptr(n.b) -= bk_->dot(go, out, sz) / b0;
      } else {
        // d/da = go / b, d/db = -(go / b) * out
        double* t = scratch(s1_, sz);
        bk_->ew_div(go, vptr(n.b), t, sz);
        if (has_adj(n.a)) {
          if (sa)
            *aptr(n.a) += bk_->sum(t, sz);
          else
            bk_->axpy(1.0, t, aptr(n.a), sz);
        }
        if (has_adj(n.b)) {
          double* t2 = scratch(s2_, sz);
          bk_->ew_mul(t, out, t2, sz);
          bk_->axpy(-1.0, t2, aptr(n.b), sz);
        }
      }
      break;
    }
    case Op::kNeg:
      acc_scaled(n.a, -1.0, go, sz);
      break;
    case Op::kSquare: {
      if (has_adj(n.a)) {
        double* t = scratch(s1_, sz);
        bk_->ew_mul(vptr(n.a), go, t, sz);
        bk_->axpy(2.0, t, aptr(n.a), sz);
      }
      break;
    }
    case Op::kExp:
      if (has_adj(n.a)) bk_->ew_acc_mul(out, go, aptr(n.a), sz);
      break;
    case Op::kLog: {
      if (has_adj(n.a)) {
        double* t = scratch(s1_, sz);
        bk_->ew_div(go, vptr(n.a), t, sz);
        bk_->axpy(1.0, t, aptr(n.a), sz);
      }
      break;
    }
    case Op::kTanh: {
      if (has_adj(n.a)) {
        double* t = scratch(s1_, sz);
        bk_->ew_square(out, t, sz);
        bk_->ew_rsubs(t, 1.0, t, sz);
        bk_->ew_acc_mul(t, go, aptr(n.a), sz);
      }
      break;
    }
    case Op::kLogSigmoid: {
      if (has_adj(n.a)) {
        const double* pa = vptr(n.a);
        double* da = aptr(n.a);
        for (std::size_t i = 0; i < sz; ++i) da[i] += go[i] / (1.0 + std::exp(pa[i]));
      }
      break;
    }
    case Op::kSoftplus: {
      if (has_adj(n.a)) {
        const double* pa = vptr(n.a);
        double* da = aptr(n.a);
        for (std::size_t i = 0; i < sz; ++i) da[i] += go[i] / (1.0 + std::exp(-pa[i]));
      }
      break;
    }
    case Op::kClamp: {
      if (has_adj(n.a)) {
        const double* pa = vptr(n.a);
        double* da = aptr(n.a);
        for (std::size_t i = 0; i < sz; ++i)
          if (pa[i] >= n.lo && pa[i] <= n.hi) da[i] += go[i];
      }
      break;
    }
    case Op::kMatMul: {
      const Node& na = nodes_[n.a];
      // out(m x p) = A(m x k) B(k x p)
      if (has_adj(n.a))
        bk_->gemm_nt(go, vptr(n.b), aptr(n.a), n.rows, n.cols, na.cols, true);
      if (has_adj(n.b))
        bk_->gemm_tn_acc(vptr(n.a), go, aptr(n.b), na.rows, na.cols, n.cols);
      break;
    }
    case Op::kAffine: {
      const Node& nx = nodes_[n.a];
      // out(m x o) = X(m x i) W(o x i)^T + bias
      if (has_adj(n.a))
        bk_->gemm_nn_acc(go, vptr(n.b), aptr(n.a), n.rows, n.cols, nx.cols);
      if (has_adj(n.b))
        bk_->gemm_tn_acc(go, vptr(n.a), aptr(n.b), n.rows, n.cols, nx.cols);
      if (has_adj(n.c)) bk_->colsum_acc(go, aptr(n.c), n.rows, n.cols);
      break;
    }
    case Op::kSum: {
      const Node& na = nodes_[n.a];
      if (has_adj(n.a)) {
        double* da = aptr(n.a);
        bk_->ew_adds(da, go[0], da, std::size_t(na.rows) * na.cols);
      }
      break;
    }
    case Op::kMean: {
      const Node& na = nodes_[n.a];
      if (has_adj(n.a)) {
        const std::size_t len = std::size_t(na.rows) * na.cols;
        double* da = aptr(n.a);
        bk_->ew_adds(da, go[0] / double(len), da, len);
      }
      break;
    }
    case Op::kConcatCols: {
      const Node& na = nodes_[n.a];
      const Node& nb = nodes_[n.b];
      for (std::uint32_t i = 0; i < n.rows; ++i) {
        const double* gr = go + std::size_t(i) * n.cols;
        if (has_adj(n.a)) {
          double* da = aptr(n.a) + std::size_t(i) * na.cols;
          for (std::uint32_t j = 0; j < na.cols; ++j) da[j] += gr[j];
        }
        if (has_adj(n.b)) {
          double* db = aptr(n.b) + std::size_t(i) * nb.cols;
          for (std::uint32_t j = 0; j < nb.cols; ++j) db[j] += gr[na.cols + j];
        }
      }
      break;
    }
    case Op::kLeaf:
      break;
  }
}

}  // namespace pigan::ad
