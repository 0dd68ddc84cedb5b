#pragma once

#include <utility>
#include <vector>

#include "dldl/matrix.hpp"

namespace dldl {

// kNN hypergraph over training samples: one hyperedge per sample, whose
// members are the sample (centroid) and its k nearest neighbors. Incidence
// entries are exp(-(dist/sigma)^2) for members, 0 otherwise.
struct Hypergraph {
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  Matrix incidence;                  // n_vertices x n_edges
  std::vector<double> edge_weights;  // diagonal of W, all > 0
  std::vector<double> vertex_degrees;
  std::vector<double> edge_degrees;
  double sigma = 0.0;  // distance scale used by the knn builder (1 when all points coincide)

  // Wraps a hand-built incidence matrix, computing degrees exactly and
  // validating: entries in [0,1], no empty hyperedge, no isolated vertex,
  // positive weights.
  static Hypergraph from_incidence(Matrix h, std::vector<double> weights);
};

struct Laplacian {
  Matrix delta;  // n x n, symmetric, PSD
};

// features is dim x n, one sample per column; 1 <= k <= n-1. Neighbor ties
// break toward the smaller sample index.
Hypergraph build_knn_hypergraph(const Matrix& features, std::size_t k);

// delta = I - Dv^(-1/2) H W De^(-1) H^T Dv^(-1/2). Throws
// DegenerateHypergraphError on any zero degree.
Laplacian compute_laplacian(const Hypergraph& g);

// Laplacian of the binary hypergraph with one two-vertex hyperedge per
// listed pair (unit weights). Degree-2 hyperedges make this coincide with a
// simple-graph normalized Laplacian, which the tests exploit.
Laplacian graph_laplacian_of_edges(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                   std::size_t n);

}  // namespace dldl
