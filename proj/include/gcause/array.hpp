#ifndef GCAUSE_ARRAY_HPP
#define GCAUSE_ARRAY_HPP

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "gcause/error.hpp"

namespace gcause {

// Dense row-major array of doubles. Mostly used as 2-D matrices; a scalar is
// shape {1}.
struct Array {
  std::vector<int> shape;
  std::vector<double> data;

  Array() = default;
  Array(std::vector<int> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {
    require(static_cast<std::size_t>(count(shape)) == data.size(),
            Error::Kind::invalid_argument, "array data does not match shape");
  }

  static long long count(const std::vector<int>& s) {
    long long n = 1;
    for (int d : s) {
      require(d >= 0, Error::Kind::invalid_argument, "negative dimension");
      n *= d;
    }
    return n;
  }

  static Array zeros(std::vector<int> s) {
    auto n = count(s);
    return Array(std::move(s), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  static Array full(std::vector<int> s, double v) {
    auto n = count(s);
    return Array(std::move(s), std::vector<double>(static_cast<std::size_t>(n), v));
  }

  static Array scalar(double v) { return Array({1}, {v}); }

  std::size_t size() const { return data.size(); }
  bool is_scalar() const { return data.size() == 1; }

  int rows() const {
    require(shape.size() == 2, Error::Kind::invalid_argument, "expected 2-D array");
    return shape[0];
  }
  int cols() const {
    require(shape.size() == 2, Error::Kind::invalid_argument, "expected 2-D array");
    return shape[1];
  }

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * shape[1] + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * shape[1] + c]; }

  bool same_shape(const Array& other) const { return shape == other.shape; }
};

}  // namespace gcause

#endif  // GCAUSE_ARRAY_HPP
