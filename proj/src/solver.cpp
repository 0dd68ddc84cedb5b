#include "dldl/solver.hpp"

#include <cmath>
#include <string>

#include "dldl/kernels.hpp"
#include "dldl/rng.hpp"

namespace dldl {

namespace {

std::vector<double> random_unit_column(std::mt19937_64& rng, std::size_t dim) {
  std::vector<double> col(dim);
  do {
    for (double& x : col) x = standard_normal(rng);
  } while (!unit_normalize(col));
  return col;
}

// One Gauss-Seidel pass of closed-form column updates for
// min ||target - blocks * codes||_F^2 over unit-norm columns of `blocks`:
//   u_k = target codes^T e_k - blocks~k (codes codes^T) e_k
//   column k <- u_k / ||u_k||
// with blocks~k the current blocks with column k zeroed. Dead directions
// (||u_k|| ~ 0, e.g. an atom no sample uses) keep the old column. A
// candidate that would worsen its own column subproblem is rejected; on the
// unit sphere the normalized direction is the exact minimizer, so this can
// only trigger while the old column is strictly inside the ball, e.g. the
// all-zero classifier start.
void bcd_column_sweep(Matrix& blocks, const Matrix& target, const Matrix& codes,
                      SolverNotes& notes) {
  const Matrix code_gram = multiply_nt(codes, codes);      // K x K
  const Matrix target_codes = multiply_nt(target, codes);  // rows x K
  const std::size_t rows = blocks.rows();
  const std::size_t katoms = blocks.cols();
  std::vector<double> u(rows);
  for (std::size_t k = 0; k < katoms; ++k) {
    const double ckk = code_gram(k, k);
    double norm_sq = 0.0;
    double old_dot = 0.0;
    double old_norm_sq = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double s = target_codes(i, k);
      const double* brow = blocks.row_ptr(i);
      for (std::size_t j = 0; j < katoms; ++j) s -= brow[j] * code_gram(j, k);
      s += brow[k] * ckk;
      u[i] = s;
      norm_sq += s * s;
      old_dot += brow[k] * s;
      old_norm_sq += brow[k] * brow[k];
    }
    const double norm = std::sqrt(norm_sq);
    if (norm <= kEpsilonNorm) {
      ++notes.dead_atoms;
      continue;
    }
    // Column subproblem value at v, constants dropped: ckk ||v||^2 - 2 v.u
    const double g_new = ckk - 2.0 * norm;
    const double g_old = ckk * old_norm_sq - 2.0 * old_dot;
    if (g_new <= g_old + 1e-12 * (1.0 + std::abs(g_old))) {
      for (std::size_t i = 0; i < rows; ++i) blocks(i, k) = u[i] / norm;
    } else {
      ++notes.kept_columns;
    }
  }
}

}  // namespace

void HyperParams::validate() const {
  const bool weights_ok = std::isfinite(alpha) && alpha >= 0.0 && std::isfinite(beta) &&
                          beta >= 0.0 && std::isfinite(delta) && delta >= 0.0;
  if (!weights_ok) {
    throw std::invalid_argument("HyperParams: alpha, beta, delta must be finite and >= 0");
  }
  if (dict_size < 1) throw std::invalid_argument("HyperParams: dict_size must be >= 1");
  if (knn < 1) throw std::invalid_argument("HyperParams: knn must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("HyperParams: max_iter must be >= 1");
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw std::invalid_argument("HyperParams: rel_tol must be positive");
  }
}

DldlSolver::DldlSolver(Matrix features, LabelPrior prior, Laplacian laplacian, HyperParams hp)
    : features_(std::move(features)),
      prior_(std::move(prior)),
      lap_(std::move(laplacian.delta)),
      hp_(hp) {
  hp_.validate();
  features_.require_finite("DldlSolver features");
  const std::size_t n = features_.cols();
  if (prior_.values.cols() != n) {
    throw std::invalid_argument("DldlSolver: prior and features disagree on sample count");
  }
  if (prior_.n_classes < 1 || prior_.values.rows() != prior_.n_classes) {
    throw std::invalid_argument("DldlSolver: prior class count is inconsistent");
  }
  if (prior_.labeled_mask.size() != n) {
    throw std::invalid_argument("DldlSolver: labeled mask length must equal sample count");
  }
  if (lap_.rows() != n || lap_.cols() != n) {
    throw std::invalid_argument("DldlSolver: Laplacian must be n x n over the samples");
  }

  labels_.assign(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    if (!prior_.labeled_mask[j]) continue;
    labeled_idx_.push_back(j);
    std::size_t best = 0;
    for (std::size_t c = 1; c < prior_.n_classes; ++c) {
      if (prior_.values(c, j) > prior_.values(best, j)) best = c;
    }
    labels_[j] = static_cast<int>(best);
  }
  if (labeled_idx_.size() != prior_.n_labeled) {
    throw std::invalid_argument("DldlSolver: n_labeled does not match the mask");
  }
  if (!labeled_idx_.empty()) {
    Matrix one_hot(prior_.n_classes, labeled_idx_.size());
    for (std::size_t p = 0; p < labeled_idx_.size(); ++p) {
      one_hot(static_cast<std::size_t>(labels_[labeled_idx_[p]]), p) = 1.0;
    }
    one_hot_labeled_ = std::move(one_hot);
  }
}

ModelState DldlSolver::initial_state() const {
  const std::size_t dim = features_.rows();
  const std::size_t n = features_.cols();
  const std::size_t katoms = hp_.dict_size;
  std::mt19937_64 rng(hp_.seed);

  Matrix dict(dim, katoms);
  if (n >= katoms) {
    const auto picked = sample_without_replacement(rng, n, katoms);
    for (std::size_t k = 0; k < katoms; ++k) {
      std::vector<double> col = features_.column(picked[k]);
      if (!unit_normalize(col)) col = random_unit_column(rng, dim);
      dict.set_column(k, col);
    }
  } else {
    for (std::size_t k = 0; k < katoms; ++k) {
      dict.set_column(k, random_unit_column(rng, dim));
    }
  }

  return ModelState{std::move(dict),
                    Matrix(katoms, n),
                    Matrix(prior_.n_classes, katoms),
                    prior_.values,
                    prior_.labeled_mask,
                    {},
                    std::nullopt,
                    {}};
}

double DldlSolver::objective(const ModelState& state) const {
  const Matrix recon = subtract(features_, multiply(state.dictionary, state.codes));
  double obj = frobenius_sq(recon) + 2.0 * hp_.alpha * l1_norm(state.codes);
  if (hp_.delta > 0.0) obj += hp_.delta * trace_quadratic(lap_, state.codes);
  if (hp_.beta > 0.0) {
    const Matrix fit_gap = subtract(state.soft_labels, multiply(state.classifier, state.codes));
    obj += hp_.beta * frobenius_sq(fit_gap);
    obj += hp_.beta * frobenius_sq(subtract(state.soft_labels, prior_.values));
  }
  obj += trace_quadratic(lap_, state.soft_labels);
  return obj;
}

double DldlSolver::fixed_label_objective(const ModelState& state) const {
  const Matrix recon = subtract(features_, multiply(state.dictionary, state.codes));
  double obj = frobenius_sq(recon) + 2.0 * hp_.alpha * l1_norm(state.codes);
  if (hp_.beta > 0.0 && one_hot_labeled_) {
    const Matrix gap =
        subtract(*one_hot_labeled_, multiply(state.classifier, labeled_codes(state.codes)));
    obj += hp_.beta * frobenius_sq(gap);
  }
  if (hp_.delta > 0.0) obj += hp_.delta * trace_quadratic(lap_, state.codes);
  return obj;
}

Matrix DldlSolver::labeled_codes(const Matrix& codes) const {
  Matrix sub(codes.rows(), labeled_idx_.size());
  for (std::size_t k = 0; k < codes.rows(); ++k) {
    for (std::size_t p = 0; p < labeled_idx_.size(); ++p) {
      sub(k, p) = codes(k, labeled_idx_[p]);
    }
  }
  return sub;
}

void DldlSolver::sweep_codes(ModelState& state, bool fixed_label) const {
  Matrix& codes = state.codes;
  const std::size_t katoms = codes.rows();
  const std::size_t n = codes.cols();
  const double alpha = hp_.alpha;
  const double beta = hp_.beta;
  const double smooth_w = hp_.delta;
  const bool use_lap = smooth_w > 0.0;

  Matrix gram = multiply_tn(state.dictionary, state.dictionary);  // K x K
  Matrix lin = multiply_tn(state.dictionary, features_);          // K x n

  std::optional<Matrix> cls_gram;  // fixed-label coupling, labeled columns only
  if (beta > 0.0) {
    if (!fixed_label) {
      add_scaled(gram, multiply_tn(state.classifier, state.classifier), beta);
      add_scaled(lin, multiply_tn(state.classifier, state.soft_labels), beta);
    } else if (!labeled_idx_.empty()) {
      cls_gram = multiply_tn(state.classifier, state.classifier);
    }
  }

  // Fixed sweep order (atom-major, then sample) with freshest values.
  for (std::size_t k = 0; k < katoms; ++k) {
    for (std::size_t col = 0; col < n; ++col) {
      double denom = gram(k, k);
      double numer = lin(k, col);
      double cross = -gram(k, k) * codes(k, col);
      for (std::size_t l = 0; l < katoms; ++l) cross += gram(k, l) * codes(l, col);
      numer -= cross;
      if (cls_gram && prior_.labeled_mask[col]) {
        const Matrix& bb = *cls_gram;
        double cb = -bb(k, k) * codes(k, col);
        for (std::size_t l = 0; l < katoms; ++l) cb += bb(k, l) * codes(l, col);
        numer += beta * (state.classifier(static_cast<std::size_t>(labels_[col]), k) - cb);
        denom += beta * bb(k, k);
      }
      if (use_lap) {
        double smooth = -lap_(col, col) * codes(k, col);
        const double* lrow = lap_.row_ptr(col);
        const double* crow = codes.row_ptr(k);
        for (std::size_t r = 0; r < n; ++r) smooth += lrow[r] * crow[r];
        numer -= smooth_w * smooth;
        denom += smooth_w * lap_(col, col);
      }
      if (denom <= kEpsilonNorm) {
        codes(k, col) = 0.0;
        ++state.notes.zero_code_denominators;
      } else {
        codes(k, col) = soft_threshold(numer, alpha) / denom;
      }
    }
  }
}

void DldlSolver::update_codes(ModelState& state) const { sweep_codes(state, false); }

void DldlSolver::update_dictionary(ModelState& state) const {
  bcd_column_sweep(state.dictionary, features_, state.codes, state.notes);
}

void DldlSolver::update_classifier(ModelState& state) const {
  bcd_column_sweep(state.classifier, state.soft_labels, state.codes, state.notes);
}

void DldlSolver::update_classifier_fixed(ModelState& state) const {
  if (!one_hot_labeled_) return;
  const Matrix sub = labeled_codes(state.codes);
  bcd_column_sweep(state.classifier, *one_hot_labeled_, sub, state.notes);
}

const CholeskyFactor& DldlSolver::label_factor() const {
  if (!label_factor_) {
    Matrix m = lap_;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += 2.0 * hp_.beta;
    label_factor_ = std::make_unique<CholeskyFactor>(m);
  }
  return *label_factor_;
}

void DldlSolver::update_soft_labels(ModelState& state) const {
  if (hp_.beta <= 0.0) {
    state.notes.label_update_skipped = true;
    return;
  }
  const std::size_t n = features_.cols();
  const std::size_t n_classes = prior_.n_classes;
  const Matrix scores = multiply(state.classifier, state.codes);
  // Solve (L + 2 beta I) F^T = beta (B S + O)^T; the system matrix acts on
  // the sample axis and is constant across iterations, so its factorization
  // is cached.
  Matrix rhs(n, n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      rhs(j, c) = hp_.beta * (scores(c, j) + prior_.values(c, j));
    }
  }
  const Matrix z = label_factor().solve(rhs);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t j = 0; j < n; ++j) state.soft_labels(c, j) = z(j, c);
  }
}

namespace {

double relative_drop(double prev, double cur) { return (prev - cur) / std::max(prev, 1e-12); }

void check_monotone(double prev, double cur, const char* where) {
  if (cur > prev + 1e-9 * (1.0 + std::abs(prev))) {
    throw InternalConsistencyError(std::string(where) + ": objective increased from " +
                                   std::to_string(prev) + " to " + std::to_string(cur));
  }
}

}  // namespace

ModelState DldlSolver::fit(ModelState state) const {
  double prev = objective(state);
  state.initial_loss = prev;
  state.loss_history.clear();
  for (std::size_t it = 0; it < hp_.max_iter; ++it) {
    update_codes(state);
    update_dictionary(state);
    update_classifier(state);
    update_soft_labels(state);
    const double cur = objective(state);
    check_monotone(prev, cur, "fit");
    state.loss_history.push_back(cur);
    const double rel = relative_drop(prev, cur);
    prev = cur;
    if (rel < hp_.rel_tol) break;
  }
  return state;
}

ModelState DldlSolver::fit() const { return fit(initial_state()); }

ModelState DldlSolver::fit_fixed_label(ModelState state) const {
  if (labeled_idx_.empty()) {
    throw std::invalid_argument("fit_fixed_label: at least one labeled sample required");
  }
  double prev = fixed_label_objective(state);
  state.initial_loss = prev;
  state.loss_history.clear();
  for (std::size_t it = 0; it < hp_.max_iter; ++it) {
    sweep_codes(state, true);
    update_dictionary(state);
    update_classifier_fixed(state);
    const double cur = fixed_label_objective(state);
    check_monotone(prev, cur, "fit_fixed_label");
    state.loss_history.push_back(cur);
    const double rel = relative_drop(prev, cur);
    prev = cur;
    if (rel < hp_.rel_tol) break;
  }
  // There is no soft-label block in this variant; the classifier response to
  // each training sample is the model's label estimate, stored so that
  // transductive prediction reads both variants the same way.
  state.soft_labels = multiply(state.classifier, state.codes);
  return state;
}

ModelState DldlSolver::fit_fixed_label() const { return fit_fixed_label(initial_state()); }

}  // namespace dldl
