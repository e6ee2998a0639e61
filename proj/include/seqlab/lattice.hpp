#pragma once

// Index arithmetic for the p-dimensional lattice with side^p points, shared by
// the multivariate isotonic body and the packing constructions.

#include <cmath>
#include <utility>
#include <vector>

#include "seqlab/errors.hpp"

namespace seqlab::lattice {

struct Grid {
  int p = 2;
  int side = 2;
  int n = 4;

  static Grid make(int p, int n) {
    if (p < 2) throw InvalidSpecError("lattice order p must be >= 2");
    const int side = static_cast<int>(std::llround(std::pow(double(n), 1.0 / p)));
    long long total = 1;
    for (int i = 0; i < p; ++i) total *= side;
    if (side < 1 || total != n)
      throw InvalidSpecError("lattice size n must satisfy n^(1/p) integral");
    return Grid{p, side, n};
  }

  // Row-major: dim 0 is the fastest varying coordinate, values in [0, side).
  int coord(int index, int dim) const {
    for (int i = 0; i < dim; ++i) index /= side;
    return index % side;
  }

  std::vector<int> coords(int index) const {
    std::vector<int> c(p);
    for (int i = 0; i < p; ++i) {
      c[i] = index % side;
      index /= side;
    }
    return c;
  }

  int index(const std::vector<int>& c) const {
    int idx = 0;
    for (int i = p - 1; i >= 0; --i) idx = idx * side + c[i];
    return idx;
  }

  bool leq(int a, int b) const {
    for (int i = 0; i < p; ++i) {
      if (coord(a, i) > coord(b, i)) return false;
    }
    return true;
  }

  // Cover relations of the partial order: (j, k) with mu_j <= mu_k required.
  std::vector<std::pair<int, int>> cover_edges() const {
    std::vector<std::pair<int, int>> edges;
    int stride = 1;
    for (int d = 0; d < p; ++d) {
      for (int j = 0; j < n; ++j) {
        if (coord(j, d) + 1 < side) edges.emplace_back(j, j + stride);
      }
      stride *= side;
    }
    return edges;
  }
};

}  // namespace seqlab::lattice
