#include "gcause/tape.hpp"

#include <cmath>

namespace gcause {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  // log(1 + e^x) = max(x, 0) + log1p(e^{-|x|})
  return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Tape::Node& Tape::node(Var v) {
  require(v.id >= 0 && v.id < static_cast<int>(nodes_.size()),
          Error::Kind::invalid_argument, "invalid tape variable");
  return nodes_[static_cast<std::size_t>(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
  require(v.id >= 0 && v.id < static_cast<int>(nodes_.size()),
          Error::Kind::invalid_argument, "invalid tape variable");
  return nodes_[static_cast<std::size_t>(v.id)];
}

Var Tape::leaf(Array value, bool requires_grad) {
  Node n;
  n.op = Op::leaf;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  return Var{push(std::move(n))};
}

const Array& Tape::val(Var v) const { return node(v).value; }

Array Tape::grad(Var v) const {
  const Node& n = node(v);
  if (n.grad.size() == n.value.size() && !n.grad.shape.empty()) return n.grad;
  return Array::zeros(n.value.shape);
}

Array& Tape::grad_buffer(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.shape.empty()) n.grad = Array::zeros(n.value.shape);
  return n.grad;
}

void Tape::zero_grads() {
  for (Node& n : nodes_) n.grad = Array();
}

Var Tape::add(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  require(na.value.same_shape(nb.value), Error::Kind::invalid_argument,
          "add: shape mismatch");
  Node n;
  n.op = Op::add;
  n.a = a.id;
  n.b = b.id;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.value = na.value;
  const double* pb = nb.value.data.data();
  double* pv = n.value.data.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) pv[i] += pb[i];
  return Var{push(std::move(n))};
}

Var Tape::sub(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  require(na.value.same_shape(nb.value), Error::Kind::invalid_argument,
          "sub: shape mismatch");
  Node n;
  n.op = Op::sub;
  n.a = a.id;
  n.b = b.id;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.value = na.value;
  const double* pb = nb.value.data.data();
  double* pv = n.value.data.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) pv[i] -= pb[i];
  return Var{push(std::move(n))};
}

Var Tape::mul(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  require(na.value.same_shape(nb.value), Error::Kind::invalid_argument,
          "mul: shape mismatch");
  Node n;
  n.op = Op::mul;
  n.a = a.id;
  n.b = b.id;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.value = na.value;
  const double* pb = nb.value.data.data();
  double* pv = n.value.data.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) pv[i] *= pb[i];
  return Var{push(std::move(n))};
}

namespace {

// C[m x n] += A[m x k] * B[k x n]; ikj order keeps the inner loop contiguous.
void matmul_acc(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[m x k] += A[m x n] * B^T where B is [k x n].
void matmul_bt_acc(const double* a, const double* b, double* c, int m, int n, int k) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * n;
    double* crow = c + static_cast<std::size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double* brow = b + static_cast<std::size_t>(p) * n;
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += arow[j] * brow[j];
      crow[p] += acc;
    }
  }
}

// C[k x n] += A^T * B where A is [m x k], B is [m x n].
void matmul_at_acc(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    const double* brow = b + static_cast<std::size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      double* crow = c + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace

Var Tape::matmul(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  require(na.value.shape.size() == 2 && nb.value.shape.size() == 2,
          Error::Kind::invalid_argument, "matmul: expected 2-D arrays");
  require(na.value.cols() == nb.value.rows(), Error::Kind::invalid_argument,
          "matmul: inner dimension mismatch");
  int m = na.value.rows(), k = na.value.cols(), nn = nb.value.cols();
  Node n;
  n.op = Op::matmul;
  n.a = a.id;
  n.b = b.id;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.value = Array::zeros({m, nn});
  matmul_acc(na.value.data.data(), nb.value.data.data(), n.value.data.data(), m, k, nn);
  return Var{push(std::move(n))};
}

Var Tape::concat_cols(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  require(na.value.shape.size() == 2 && nb.value.shape.size() == 2,
          Error::Kind::invalid_argument, "concat_cols: expected 2-D arrays");
  require(na.value.rows() == nb.value.rows(), Error::Kind::invalid_argument,
          "concat_cols: row count mismatch");
  int rows = na.value.rows(), ca = na.value.cols(), cb = nb.value.cols();
  Node n;
  n.op = Op::concat_cols;
  n.a = a.id;
  n.b = b.id;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.value = Array::zeros({rows, ca + cb});
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < ca; ++j) n.value.at(i, j) = na.value.at(i, j);
    for (int j = 0; j < cb; ++j) n.value.at(i, ca + j) = nb.value.at(i, j);
  }
  return Var{push(std::move(n))};
}

Var Tape::slice_rows(Var a, int start, int count) {
  const Node& na = node(a);
  require(na.value.shape.size() == 2, Error::Kind::invalid_argument,
          "slice_rows: expected 2-D array");
  require(start >= 0 && count >= 0 && start + count <= na.value.rows(),
          Error::Kind::invalid_argument, "slice_rows: out of range");
  int cols = na.value.cols();
  Node n;
  n.op = Op::slice_rows;
  n.a = a.id;
  n.c = static_cast<double>(start);
  n.extent = count;
  n.requires_grad = na.requires_grad;
  n.value = Array::zeros({count, cols});
  const double* src = na.value.data.data() + static_cast<std::size_t>(start) * cols;
  std::copy(src, src + static_cast<std::size_t>(count) * cols, n.value.data.begin());
  return Var{push(std::move(n))};
}

Var Tape::broadcast_rows(Var row, int rows) {
  const Node& na = node(row);
  require(na.value.shape.size() == 2 && na.value.rows() == 1,
          Error::Kind::invalid_argument, "broadcast_rows: expected 1 x n array");
  require(rows >= 1, Error::Kind::invalid_argument, "broadcast_rows: rows < 1");
  int cols = na.value.cols();
  Node n;
  n.op = Op::broadcast_rows;
  n.a = row.id;
  n.extent = rows;
  n.requires_grad = na.requires_grad;
  n.value = Array::zeros({rows, cols});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) n.value.at(i, j) = na.value.data[static_cast<std::size_t>(j)];
  return Var{push(std::move(n))};
}

Var Tape::sum(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::sum;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  double acc = 0.0;
  for (double v : na.value.data) acc += v;
  n.value = Array::scalar(acc);
  return Var{push(std::move(n))};
}

Var Tape::mean(Var a) {
  const Node& na = node(a);
  require(na.value.size() > 0, Error::Kind::invalid_argument, "mean: empty array");
  Node n;
  n.op = Op::mean;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  double acc = 0.0;
  for (double v : na.value.data) acc += v;
  n.value = Array::scalar(acc / static_cast<double>(na.value.size()));
  return Var{push(std::move(n))};
}

Var Tape::scale(Var a, double c) {
  const Node& na = node(a);
  Node n;
  n.op = Op::scale;
  n.a = a.id;
  n.c = c;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v *= c;
  return Var{push(std::move(n))};
}

Var Tape::exp(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::exp;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::exp(v);
  return Var{push(std::move(n))};
}

Var Tape::log(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::log;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::log(v);
  return Var{push(std::move(n))};
}

Var Tape::sigmoid(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::sigmoid;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = stable_sigmoid(v);
  return Var{push(std::move(n))};
}

Var Tape::tanh(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::tanh;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = std::tanh(v);
  return Var{push(std::move(n))};
}

Var Tape::softplus(Var a) {
  const Node& na = node(a);
  Node n;
  n.op = Op::softplus;
  n.a = a.id;
  n.requires_grad = na.requires_grad;
  n.value = na.value;
  for (double& v : n.value.data) v = stable_softplus(v);
  return Var{push(std::move(n))};
}

void Tape::backward(Var output) {
  Node& out = node(output);
  require(out.value.is_scalar(), Error::Kind::invalid_argument,
          "backward: output must be scalar");
  grad_buffer(output.id).data[0] += 1.0;
  for (int id = output.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.grad.shape.empty()) continue;
    backprop(id);
  }
}

void Tape::backprop(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  const Array& g = n.grad;
  auto parent_needs = [&](int pid) {
    return pid >= 0 && nodes_[static_cast<std::size_t>(pid)].requires_grad;
  };
  switch (n.op) {
    case Op::leaf:
      break;
    case Op::add: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i];
      }
      if (parent_needs(n.b)) {
        double* pb = grad_buffer(n.b).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pb[i] += g.data[i];
      }
      break;
    }
    case Op::sub: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i];
      }
      if (parent_needs(n.b)) {
        double* pb = grad_buffer(n.b).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pb[i] -= g.data[i];
      }
      break;
    }
    case Op::mul: {
      const Array& av = nodes_[static_cast<std::size_t>(n.a)].value;
      const Array& bv = nodes_[static_cast<std::size_t>(n.b)].value;
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i] * bv.data[i];
      }
      if (parent_needs(n.b)) {
        double* pb = grad_buffer(n.b).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pb[i] += g.data[i] * av.data[i];
      }
      break;
    }
    case Op::matmul: {
      const Array& av = nodes_[static_cast<std::size_t>(n.a)].value;
      const Array& bv = nodes_[static_cast<std::size_t>(n.b)].value;
      int m = av.rows(), k = av.cols(), nn = bv.cols();
      if (parent_needs(n.a)) {
        // dA = dC * B^T
        matmul_bt_acc(g.data.data(), bv.data.data(), grad_buffer(n.a).data.data(), m, nn, k);
      }
      if (parent_needs(n.b)) {
        // dB = A^T * dC
        matmul_at_acc(av.data.data(), g.data.data(), grad_buffer(n.b).data.data(), m, k, nn);
      }
      break;
    }
    case Op::concat_cols: {
      const Array& av = nodes_[static_cast<std::size_t>(n.a)].value;
      int rows = av.rows(), ca = av.cols();
      int cb = n.value.cols() - ca;
      if (parent_needs(n.a)) {
        Array& ga = grad_buffer(n.a);
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < ca; ++j) ga.at(i, j) += g.at(i, j);
      }
      if (parent_needs(n.b)) {
        Array& gb = grad_buffer(n.b);
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cb; ++j) gb.at(i, j) += g.at(i, ca + j);
      }
      break;
    }
    case Op::slice_rows: {
      if (parent_needs(n.a)) {
        Array& ga = grad_buffer(n.a);
        int start = static_cast<int>(n.c);
        int cols = n.value.cols();
        double* dst = ga.data.data() + static_cast<std::size_t>(start) * cols;
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g.data[i];
      }
      break;
    }
    case Op::broadcast_rows: {
      if (parent_needs(n.a)) {
        Array& ga = grad_buffer(n.a);
        int rows = n.extent, cols = n.value.cols();
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j)
            ga.data[static_cast<std::size_t>(j)] += g.at(i, j);
      }
      break;
    }
    case Op::sum: {
      if (parent_needs(n.a)) {
        Array& ga = grad_buffer(n.a);
        double gv = g.data[0];
        for (double& v : ga.data) v += gv;
      }
      break;
    }
    case Op::mean: {
      if (parent_needs(n.a)) {
        Array& ga = grad_buffer(n.a);
        double gv = g.data[0] / static_cast<double>(ga.size());
        for (double& v : ga.data) v += gv;
      }
      break;
    }
    case Op::scale: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i] * n.c;
      }
      break;
    }
    case Op::exp: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i] * n.value.data[i];
      }
      break;
    }
    case Op::log: {
      if (parent_needs(n.a)) {
        const Array& av = nodes_[static_cast<std::size_t>(n.a)].value;
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) pa[i] += g.data[i] / av.data[i];
      }
      break;
    }
    case Op::sigmoid: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          double s = n.value.data[i];
          pa[i] += g.data[i] * s * (1.0 - s);
        }
      }
      break;
    }
    case Op::tanh: {
      if (parent_needs(n.a)) {
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          double t = n.value.data[i];
          pa[i] += g.data[i] * (1.0 - t * t);
        }
      }
      break;
    }
    case Op::softplus: {
      if (parent_needs(n.a)) {
        const Array& av = nodes_[static_cast<std::size_t>(n.a)].value;
        double* pa = grad_buffer(n.a).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
          pa[i] += g.data[i] * stable_sigmoid(av.data[i]);
      }
      break;
    }
  }
}

}  // namespace gcause
