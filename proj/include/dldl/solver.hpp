#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dldl/hypergraph.hpp"
#include "dldl/matrix.hpp"

namespace dldl {

struct HyperParams {
  double alpha = 0.0625;  // sparsity weight (2^-4)
  double beta = 0.0625;   // label-term weight (2^-4)
  double delta = 4.0;     // code-smoothness weight (2^2)
  std::size_t dict_size = 200;
  std::size_t knn = 10;
  std::size_t max_iter = 100;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

// One-hot columns for labeled samples, all-0.5 columns for unlabeled ones.
struct LabelPrior {
  Matrix values;  // n_classes x n
  std::vector<bool> labeled_mask;
  std::size_t n_classes = 0;
  std::size_t n_labeled = 0;
};

struct SolverNotes {
  std::size_t dead_atoms = 0;             // zero update direction, column kept
  std::size_t zero_code_denominators = 0; // code entry forced to 0
  std::size_t kept_columns = 0;           // column update rejected by the descent guard
  bool label_update_skipped = false;      // beta == 0
};

struct ModelState {
  Matrix dictionary;   // dim x K, columns on the unit sphere
  Matrix codes;        // K x n
  Matrix classifier;   // n_classes x K
  Matrix soft_labels;  // n_classes x n
  std::vector<bool> labeled_mask;  // copied from the prior; lets a saved model
                                   // restrict transductive prediction
  std::vector<double> loss_history;
  std::optional<double> initial_loss;
  SolverNotes notes;
};

// Alternating minimization of
//   ||X - D S||_F^2 + 2 alpha ||S||_1 + delta tr(L S^T S)
//   + beta ||F - B S||_F^2 + beta ||F - O||_F^2 + tr(L F^T F)
// over unit-ball-constrained dictionary D, codes S, classifier B and soft
// labels F, with L the hypergraph Laplacian. The trailing smoothness term
// carries weight 1 so the closed-form label solve is its exact minimizer.
//
// The fixed-label variant drops F and fits beta ||E - B S_l||_F^2 on the
// labeled columns only.
class DldlSolver {
 public:
  DldlSolver(Matrix features, LabelPrior prior, Laplacian laplacian, HyperParams hp);

  const HyperParams& params() const { return hp_; }
  const Matrix& features() const { return features_; }
  const LabelPrior& prior() const { return prior_; }
  const Matrix& laplacian() const { return lap_; }

  // Seeded start: dictionary columns are distinct normalized training
  // samples (unit Gaussian columns when there are fewer samples than
  // atoms), codes and classifier are zero, soft labels copy the prior.
  ModelState initial_state() const;

  double objective(const ModelState& state) const;
  double fixed_label_objective(const ModelState& state) const;

  // One Gauss-Seidel sweep / block pass each. Every one of these leaves the
  // corresponding objective no larger than before.
  void update_codes(ModelState& state) const;
  void update_dictionary(ModelState& state) const;
  void update_classifier(ModelState& state) const;
  void update_soft_labels(ModelState& state) const;

  ModelState fit() const;
  ModelState fit(ModelState state) const;

  ModelState fit_fixed_label() const;
  ModelState fit_fixed_label(ModelState state) const;

 private:
  void sweep_codes(ModelState& state, bool fixed_label) const;
  void update_classifier_fixed(ModelState& state) const;
  const CholeskyFactor& label_factor() const;
  Matrix labeled_codes(const Matrix& codes) const;

  Matrix features_;
  LabelPrior prior_;
  Matrix lap_;
  HyperParams hp_;
  std::vector<std::size_t> labeled_idx_;
  std::vector<int> labels_;                 // class per labeled column, -1 otherwise
  std::optional<Matrix> one_hot_labeled_;   // n_classes x n_labeled
  mutable std::unique_ptr<CholeskyFactor> label_factor_;
};

}  // namespace dldl
