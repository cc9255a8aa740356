#ifndef GCAUSE_TAPE_HPP
#define GCAUSE_TAPE_HPP

#include <vector>

#include "gcause/array.hpp"

namespace gcause {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over dense arrays. A tape records one dynamic forward
// graph; backward() accumulates gradients for every node that (transitively)
// depends on a grad-requiring leaf. Single-threaded per instance; distinct
// tapes may live on distinct threads.
class Tape {
 public:
  Var leaf(Array value, bool requires_grad);
  Var constant(Array value) { return leaf(std::move(value), false); }
  Var constant(double v) { return leaf(Array::scalar(v), false); }

  const Array& val(Var v) const;
  // Gradient accumulated by the last backward(); zeros if the node was not
  // reached or does not require grad.
  Array grad(Var v) const;

  // Seeds d(output)/d(output) = 1 and accumulates into every grad-requiring
  // node. `output` must be scalar (size 1).
  void backward(Var output);
  void zero_grads();

  std::size_t num_nodes() const { return nodes_.size(); }

  // Elementwise; shapes must match exactly.
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);

  // 2-D matrix product (m x k) * (k x n).
  Var matmul(Var a, Var b);
  // Embedding lookup with one-hot matmul semantics: gradients flow into the
  // one-hot argument as well as the table.
  Var gather_rows(Var one_hot, Var table) { return matmul(one_hot, table); }

  // 2-D column-wise concatenation (b x m) ++ (b x n) -> (b x (m+n)).
  Var concat_cols(Var a, Var b);
  // Contiguous 2-D row slice [start, start+count).
  Var slice_rows(Var a, int start, int count);
  // Replicate a (1 x n) row vector to (rows x n).
  Var broadcast_rows(Var row, int rows);

  Var sum(Var a);
  Var mean(Var a);
  Var scale(Var a, double c);

  Var exp(Var a);
  Var log(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var softplus(Var a);

 private:
  enum class Op {
    leaf,
    add,
    sub,
    mul,
    matmul,
    concat_cols,
    slice_rows,
    broadcast_rows,
    sum,
    mean,
    scale,
    exp,
    log,
    sigmoid,
    tanh,
    softplus,
  };

  struct Node {
    Op op = Op::leaf;
    int a = -1;
    int b = -1;
    double c = 0.0;  // scale factor / slice start (reused per op)
    int extent = 0;  // slice count / broadcast rows
    Array value;
    Array grad;  // allocated lazily, same shape as value
    bool requires_grad = false;
  };

  int push(Node node);
  Node& node(Var v);
  const Node& node(Var v) const;
  Array& grad_buffer(int id);
  void backprop(int id);

  std::vector<Node> nodes_;
};

// Scalar helpers shared with non-tape code paths.
double stable_sigmoid(double x);
double stable_softplus(double x);

}  // namespace gcause

#endif  // GCAUSE_TAPE_HPP
