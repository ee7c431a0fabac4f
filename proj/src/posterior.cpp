#include "gppde/posterior.hpp"

#include <cmath>

#include "gppde/errors.hpp"
#include "gppde/rng.hpp"

namespace gppde {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double PriorFunction::operator()(const Point& z) const {
  const int m = feature_count();
  const double scale = signal * std::sqrt(2.0 / m);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sum += amplitudes[i] * std::cos(frequencies.row(i).dot(z) + phases[i]);
  }
  return scale * sum;
}

PriorFunction sample_prior(const KernelParams& kernel, int feature_count,
                           std::uint64_t seed) {
  kernel.validate();
  if (feature_count < 1) throw Error("prior needs at least one feature");
  const int d = kernel.dim();
  Rng rng(seed);
  PriorFunction fn;
  fn.signal = kernel.signal;
  fn.frequencies.resize(feature_count, d);
  fn.phases.resize(feature_count);
  fn.amplitudes.resize(feature_count);
  for (int i = 0; i < feature_count; ++i) {
    for (int r = 0; r < d; ++r) {
      fn.frequencies(i, r) = rng.normal() / kernel.lengthscales[r];
    }
    fn.phases[i] = rng.uniform(0.0, kTwoPi);
    fn.amplitudes[i] = rng.normal();
  }
  return fn;
}

double prior_apply(const PriorFunction& fn, const OperatorSpec& op,
                   const Point& z) {
  const int m = fn.feature_count();
  const double scale = fn.signal * std::sqrt(2.0 / m);
  double total = 0.0;
  for (const OperatorTerm& term : op.terms()) {
    int order = 0;
    for (int o : term.orders) order += o;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      double factor = 1.0;
      for (std::size_t r = 0; r < term.orders.size(); ++r) {
        for (int rep = 0; rep < term.orders[r]; ++rep) {
          factor *= fn.frequencies(i, static_cast<int>(r));
        }
      }
      const double theta = fn.frequencies.row(i).dot(z) + fn.phases[i];
      // Each derivative advances the cosine phase by pi/2.
      double trig;
      switch (order % 4) {
        case 0: trig = std::cos(theta); break;
        case 1: trig = -std::sin(theta); break;
        case 2: trig = -std::cos(theta); break;
        default: trig = std::sin(theta); break;
      }
      sum += fn.amplitudes[i] * factor * trig;
    }
    total += term.coeff * sum;
  }
  return scale * total;
}

double PosteriorSampleFunction::operator()(const Point& z) const {
  const Eigen::VectorXd a =
      cross_vector(system_->colset(), system_->kernel(), z);
  return fn_(z) + a.dot(combined_);
}

PosteriorModel::PosteriorModel(std::shared_ptr<const GramSystem> system,
                               RepresenterWeights weights, VarianceMode mode,
                               SDDConfig sample_solver)
    : system_(std::move(system)),
      weights_(std::move(weights)),
      mode_(mode),
      sample_solver_(sample_solver) {
  if (system_ == nullptr) throw Error("posterior model needs a system");
  if (static_cast<std::size_t>(weights_.values.size()) != system_->size())
    throw DimensionMismatchError(static_cast<int>(system_->size()),
                                 static_cast<int>(weights_.values.size()));
  prior_kernel_ = system_->kernel();
}

PosteriorModel::PosteriorModel(KernelParams kernel)
    : system_(nullptr), mode_(VarianceMode::Exact),
      prior_kernel_(std::move(kernel)) {
  prior_kernel_.validate();
}

const KernelParams& PosteriorModel::kernel() const {
  return system_ ? system_->kernel() : prior_kernel_;
}

double PosteriorModel::mean(const Point& z) const {
  if (!system_) return 0.0;
  const Eigen::VectorXd a = cross_vector(system_->colset(), kernel(), z);
  return a.dot(weights_.values);
}

void PosteriorModel::ensure_factorization() const {
  if (llt_) return;
  if (!system_ || !system_->has_dense())
    throw Error("exact variance needs the dense factorization; use Monte "
                "Carlo mode");
  Eigen::MatrixXd reg = system_->dense();
  reg.diagonal().array() += system_->lambda();
  auto llt = std::make_unique<Eigen::LLT<Eigen::MatrixXd>>(reg);
  if (llt->info() != Eigen::Success)
    throw IllConditionedSystemError(-1);
  llt_ = std::move(llt);
}

double PosteriorModel::variance_exact(const Point& z) const {
  const double prior = kernel_eval(kernel(), z, z);
  if (!system_ || system_->size() == 0) return prior;
  std::lock_guard<std::mutex> lock(*mutex_);
  ensure_factorization();
  const Eigen::VectorXd a = cross_vector(system_->colset(), kernel(), z);
  const double reduction = a.dot(llt_->solve(a));
  double v = prior - reduction;
  if (v < 0.0) {
    ++clamp_count_;
    v = 0.0;
  }
  return std::min(v, prior);
}

Eigen::VectorXd PosteriorModel::variance_exact_batch(
    const std::vector<Point>& zs) const {
  const std::size_t q = zs.size();
  Eigen::VectorXd out(q);
  if (!system_ || system_->size() == 0) {
    for (std::size_t i = 0; i < q; ++i) out[i] = kernel_eval(kernel(), zs[i], zs[i]);
    return out;
  }
  std::lock_guard<std::mutex> lock(*mutex_);
  ensure_factorization();
  const std::size_t n = system_->size();
  Eigen::MatrixXd a_mat(n, q);
  for (std::size_t i = 0; i < q; ++i) {
    a_mat.col(i) = cross_vector(system_->colset(), kernel(), zs[i]);
  }
  // L X = A, then variance_i = k(z_i, z_i) - ||X_i||^2.
  const Eigen::MatrixXd x = llt_->matrixL().solve(a_mat);
  for (std::size_t i = 0; i < q; ++i) {
    const double prior = kernel_eval(kernel(), zs[i], zs[i]);
    double v = prior - x.col(i).squaredNorm();
    if (v < 0.0) {
      ++clamp_count_;
      v = 0.0;
    }
    out[i] = std::min(v, prior);
  }
  return out;
}

Eigen::VectorXd PosteriorModel::solve_regularized(
    const Eigen::VectorXd& rhs) const {
  if (system_->has_dense()) {
    ensure_factorization();
    return llt_->solve(rhs);
  }
  // Matrix-free path: reuse the stochastic solver against a synthetic
  // right-hand side by temporarily treating `rhs` as the target vector.
  // The dual objective only touches g through dot products with rows, so
  // we solve with a copy of the collocation set carrying rhs as targets.
  CollocationSet cs;
  const CollocationSet& orig = system_->colset();
  for (std::size_t i = 0; i < orig.n_interior(); ++i) {
    CollocationEntry e = orig.interior()[i];
    e.target = rhs[static_cast<Eigen::Index>(i)];
    cs.add_interior(std::move(e));
  }
  for (std::size_t i = 0; i < orig.n_boundary(); ++i) {
    CollocationEntry e = orig.boundary()[i];
    e.target = rhs[static_cast<Eigen::Index>(orig.n_interior() + i)];
    cs.add_boundary(std::move(e));
  }
  GramSystem shadow = GramSystem::matrix_free(std::move(cs), system_->kernel(),
                                              system_->lambda());
  return solve_sdd(shadow, sample_solver_).values;
}

PosteriorSampleFunction PosteriorModel::pathwise_sample(
    const PriorFunction& fn, std::uint64_t noise_seed) const {
  if (!system_) throw Error("pathwise sampling needs a conditioned model");
  const std::size_t n = system_->size();
  Rng rng(noise_seed);
  const double noise_sd = std::sqrt(system_->lambda());
  Eigen::VectorXd obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CollocationEntry& e = system_->colset().entry(i);
    obs[i] = prior_apply(fn, e.op, e.point) + noise_sd * rng.normal();
  }
  Eigen::VectorXd beta;
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    beta = solve_regularized(obs);
  }
  return PosteriorSampleFunction(system_, fn, weights_.values - beta);
}

double PosteriorModel::variance_mc(int sample_count, const Point& z,
                                   std::uint64_t seed) const {
  if (sample_count < 2) throw Error("Monte Carlo variance needs at least 2 samples");
  std::shared_ptr<std::vector<PosteriorSampleFunction>> ensemble;
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto& slot = ensemble_cache_[{sample_count, seed}];
    ensemble = slot;
  }
  if (!ensemble) {
    auto built = std::make_shared<std::vector<PosteriorSampleFunction>>();
    built->reserve(sample_count);
    for (int s = 0; s < sample_count; ++s) {
      const std::uint64_t fn_seed = seed * 2654435761u + 2 * s;
      const PriorFunction fn =
          sample_prior(kernel(), prior_features_, fn_seed);
      built->push_back(pathwise_sample(fn, fn_seed + 1));
    }
    std::lock_guard<std::mutex> lock(*mutex_);
    ensemble_cache_[{sample_count, seed}] = built;
    ensemble = built;
  }
  double sum = 0.0, sumsq = 0.0;
  for (const PosteriorSampleFunction& f : *ensemble) {
    const double v = f(z);
    sum += v;
    sumsq += v * v;
  }
  const double s = static_cast<double>(sample_count);
  return (sumsq - sum * sum / s) / (s - 1.0);
}

}  // namespace gppde
