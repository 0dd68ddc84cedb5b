#include "dldl/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dldl/kernels.hpp"

namespace dldl {

namespace {

std::vector<double> column_sums(const Matrix& h) {
  std::vector<double> s(h.cols(), 0.0);
  for (std::size_t v = 0; v < h.rows(); ++v)
    for (std::size_t e = 0; e < h.cols(); ++e) s[e] += h(v, e);
  return s;
}

std::vector<double> weighted_row_sums(const Matrix& h, const std::vector<double>& w) {
  std::vector<double> s(h.rows(), 0.0);
  for (std::size_t v = 0; v < h.rows(); ++v)
    for (std::size_t e = 0; e < h.cols(); ++e) s[v] += w[e] * h(v, e);
  return s;
}

}  // namespace

Hypergraph Hypergraph::from_incidence(Matrix h, std::vector<double> weights) {
  if (weights.size() != h.cols()) {
    throw std::invalid_argument("Hypergraph: one weight per hyperedge required");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("Hypergraph: edge weights must be positive");
    }
  }
  for (double x : h.data()) {
    if (x < 0.0 || x > 1.0) {
      throw std::invalid_argument("Hypergraph: incidence entries must lie in [0, 1]");
    }
  }
  std::vector<double> edge_deg = column_sums(h);
  std::vector<double> vertex_deg = weighted_row_sums(h, weights);
  for (double d : edge_deg) {
    if (d <= 0.0) throw std::invalid_argument("Hypergraph: empty hyperedge");
  }
  for (double d : vertex_deg) {
    if (d <= 0.0) throw std::invalid_argument("Hypergraph: isolated vertex");
  }
  return Hypergraph{h.rows(),          h.cols(),
                    std::move(h),      std::move(weights),
                    std::move(vertex_deg), std::move(edge_deg),
                    0.0};
}

Hypergraph build_knn_hypergraph(const Matrix& features, std::size_t k) {
  features.require_finite("build_knn_hypergraph features");
  const std::size_t n = features.cols();
  if (n < 2) {
    throw std::invalid_argument("build_knn_hypergraph: need at least 2 samples");
  }
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("build_knn_hypergraph: k must satisfy 1 <= k <= n-1, got k=" +
                                std::to_string(k) + " with n=" + std::to_string(n));
  }

  const Matrix sq = pairwise_squared_distances(features);

  // Hyperedge i = {i} + the k nearest neighbors of i, ties to smaller index.
  std::vector<std::vector<std::size_t>> members(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.emplace_back(sq(i, j), j);
    }
    std::sort(order.begin(), order.end());
    members[i].push_back(i);
    for (std::size_t r = 0; r < k; ++r) members[i].push_back(order[r].second);
  }

  // sigma = mean member-to-centroid distance over the whole hypergraph
  // (the centroid itself contributes a zero). Falls back to 1 when all
  // member distances vanish, e.g. coincident points.
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v : members[i]) dist_sum += std::sqrt(sq(i, v));
  }
  double sigma = dist_sum / (static_cast<double>(n) * static_cast<double>(k + 1));
  if (sigma < 1e-12) sigma = 1.0;

  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v : members[i]) {
      const double d = std::sqrt(sq(i, v)) / sigma;
      h(v, i) = std::exp(-d * d);
    }
  }

  Hypergraph g = Hypergraph::from_incidence(std::move(h), std::vector<double>(n, 1.0));
  g.sigma = sigma;
  return g;
}

Laplacian compute_laplacian(const Hypergraph& g) {
  const std::size_t n = g.n_vertices;
  const std::size_t m = g.n_edges;
  for (double d : g.vertex_degrees) {
    if (d <= 0.0) throw DegenerateHypergraphError("compute_laplacian: zero vertex degree");
  }
  for (double d : g.edge_degrees) {
    if (d <= 0.0) throw DegenerateHypergraphError("compute_laplacian: zero edge degree");
  }

  // delta = I - G G^T with G = Dv^(-1/2) H (W/De)^(1/2); forming it as a
  // product with itself keeps the result exactly symmetric.
  Matrix scaled(n, m);
  for (std::size_t e = 0; e < m; ++e) {
    const double col_scale = std::sqrt(g.edge_weights[e] / g.edge_degrees[e]);
    for (std::size_t v = 0; v < n; ++v) {
      scaled(v, e) = g.incidence(v, e) * col_scale / std::sqrt(g.vertex_degrees[v]);
    }
  }
  Matrix smoother = multiply_nt(scaled, scaled);
  Laplacian lap{Matrix(n, n)};
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      lap.delta(u, v) = (u == v ? 1.0 : 0.0) - smoother(u, v);
    }
  }
  return lap;
}

Laplacian graph_laplacian_of_edges(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                   std::size_t n) {
  if (edges.empty()) {
    throw DegenerateHypergraphError("graph_laplacian_of_edges: no edges, all vertices isolated");
  }
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("graph_laplacian_of_edges: vertex index out of range");
    }
    if (u == v) {
      throw std::invalid_argument("graph_laplacian_of_edges: self-pairs are not allowed");
    }
  }
  Matrix h(n, edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    h(edges[e].first, e) = 1.0;
    h(edges[e].second, e) = 1.0;
  }
  try {
    const Hypergraph g =
        Hypergraph::from_incidence(std::move(h), std::vector<double>(edges.size(), 1.0));
    return compute_laplacian(g);
  } catch (const std::invalid_argument& err) {
    // A vertex touched by no edge surfaces here.
    throw DegenerateHypergraphError(err.what());
  }
}

}  // namespace dldl
