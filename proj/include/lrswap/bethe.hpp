#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "configuration.hpp"
#include "errors.hpp"
#include "pair_matrix.hpp"
#include "permutation.hpp"
#include "rule.hpp"
#include "scalar.hpp"
#include "scatter.hpp"
#include "series_oracle.hpp"
#include "words.hpp"

namespace lrswap {

inline constexpr int kMaxBetheParticles = 3;
inline constexpr std::size_t kMaxTableRows = 100'000;
inline constexpr double kImagTolerance = 1e-8;

/// Product trapezoid rule on circles |xi_d| = radius with `nodes` points each.
///
/// The admissible radius depends on the rule. Under DropPushType the circles
/// must enclose the poles at xi = 1 (radius > 1); under TasepType the scattering
/// factor's pole at xi = 1 must stay outside, so 0 < radius < 1.
struct QuadratureConfig {
  double radius = 1.5;
  int nodes = 64;
  bool convergence_check = false;
  unsigned threads = 1;

  static QuadratureConfig defaults(RuleType rule, int particles) {
    QuadratureConfig c;
    c.radius = rule == RuleType::TasepType ? 0.5 : 1.5;
    c.nodes = particles <= 2 ? 64 : 32;
    return c;
  }

  void validate(RuleType rule) const {
    require_integrable(rule);
    require(nodes >= 8 && (nodes & (nodes - 1)) == 0, ErrorKind::InvalidParameter,
            "nodes per circle must be a power of two >= 8");
    require(std::isfinite(radius) && radius > 0.0, ErrorKind::InvalidParameter, "radius must be positive");
    if (rule == RuleType::DropPushType)
      require(radius > 1.0, ErrorKind::InvalidParameter, "drop-push contours need radius > 1");
    else
      require(radius < 1.0, ErrorKind::InvalidParameter, "tasep contours need radius < 1");
    require(threads >= 1, ErrorKind::InvalidParameter, "threads must be >= 1");
  }
};

namespace detail {

/// Computes columns A_sigma e_nu by pushing the basis vector through the
/// two-site factors of each sigma's reduced word.
class ColumnEvaluator {
 public:
  ColumnEvaluator(int particles, int species, RuleType rule, std::optional<Permutation> only = std::nullopt)
      : n_(particles), pm_(build_pair_matrices(species, rule)), space_(species, particles) {
    space_.require_within_cap();
    if (only) {
      require(only->size() == particles, ErrorKind::InvalidParameter, "permutation size mismatch");
      perms_.push_back(*only);
    } else {
      perms_ = all_permutations(particles);
    }
    for (const auto& s : perms_) steps_.push_back(scatter_steps(particles, s.reduced_word()));
    for (int site = 1; site < particles; ++site) {
      strides_.emplace_back(space_.stride(site - 1), space_.stride(site));
    }
  }

  int particles() const { return n_; }
  const WordSpace& space() const { return space_; }
  const std::vector<Permutation>& perms() const { return perms_; }

  /// out[s] = A_{perms()[s]} e_nu at the spectral point xi.
  void columns(const std::vector<Complex>& xi, std::size_t nu, std::vector<std::vector<Complex>>& out) const {
    // R_{beta alpha} for beta > alpha, indexed beta * n + alpha (0-based labels)
    std::vector<std::optional<TensorOperator<Complex>>> local(static_cast<std::size_t>(n_ * n_));
    out.assign(perms_.size(), std::vector<Complex>());
    std::vector<Complex> tmp(space_.size());
    for (std::size_t s = 0; s < perms_.size(); ++s) {
      std::vector<Complex> v(space_.size(), Complex(0.0, 0.0));
      v[nu] = 1.0;
      for (const auto& st : steps_[s]) {
        auto& r = local[static_cast<std::size_t>((st.beta - 1) * n_ + (st.alpha - 1))];
        if (!r) r = r_matrix(xi[static_cast<std::size_t>(st.alpha - 1)], xi[static_cast<std::size_t>(st.beta - 1)], pm_);
        apply_two_site(*r, st.site, v, tmp);
        v.swap(tmp);
      }
      out[s] = std::move(v);
    }
  }

 private:
  void apply_two_site(const TensorOperator<Complex>& r, int site, const std::vector<Complex>& v,
                      std::vector<Complex>& out) const {
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    const auto [sl, sr] = strides_[static_cast<std::size_t>(site - 1)];
    const std::size_t N = static_cast<std::size_t>(space_.species());
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c] == Complex(0.0, 0.0)) continue;
      const std::size_t a = (c / sl) % N;
      const std::size_t b = (c / sr) % N;
      const std::size_t base = c - a * sl - b * sr;
      for (const auto& e : r.column(a * N + b)) out[base + (e.row / N) * sl + (e.row % N) * sr] += e.value * v[c];
    }
  }

  int n_;
  PairMatrices pm_;
  WordSpace space_;
  std::vector<Permutation> perms_;
  std::vector<std::vector<ScatterStep>> steps_;
  std::vector<std::pair<std::size_t, std::size_t>> strides_;
};

/// One contour integral over the product torus: for every target shape X the
/// vector over final words pi of
///   sum_sigma (A_sigma)_{pi,nu} prod_i xi_{sigma(i)}^{x_i - y_{sigma(i)} - 1} prod_i e^{(1/xi_i - 1) t}.
struct QuadratureJob {
  Positions initial;
  std::size_t nu = 0;
  double time = 0.0;
  std::vector<Positions> targets;
};

class TorusQuadrature {
 public:
  TorusQuadrature(const ColumnEvaluator& eval, const QuadratureConfig& cfg, const QuadratureJob& job)
      : eval_(eval), cfg_(cfg), job_(job), n_(eval.particles()), M_(cfg.nodes) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    // distinct offsets keep the nodes of different circles apart
    for (int d = 0; d < n_; ++d) offsets_.push_back((d + 0.5) / n_);
    for (int d = 0; d < n_; ++d) {
      std::vector<double> ang;
      for (int k = 0; k < M_; ++k) ang.push_back(two_pi * (k + offsets_[static_cast<std::size_t>(d)]) / M_);
      angles_.push_back(std::move(ang));
    }
    long long sum_y = 0;
    for (auto y : job_.initial) sum_y += y;
    for (const auto& x : job_.targets) {
      long long sum_x = 0;
      for (auto v : x) sum_x += v;
      // |prod xi_d| * |power factor| = r^{sum x - sum y}; the 1/M^n weight joins it
      magnitudes_.push_back(std::pow(cfg_.radius, static_cast<double>(sum_x - sum_y)) / std::pow(M_, n_));
    }
    exponents_.resize(job_.targets.size());
    for (std::size_t j = 0; j < job_.targets.size(); ++j)
      for (const auto& sigma : eval_.perms()) {
        std::vector<double> e(static_cast<std::size_t>(n_));
        for (int i = 1; i <= n_; ++i)
          e[static_cast<std::size_t>(sigma(i) - 1)] =
              static_cast<double>(job_.targets[j][static_cast<std::size_t>(i - 1)] -
                                  job_.initial[static_cast<std::size_t>(sigma(i) - 1)] - 1);
        exponents_[j].push_back(std::move(e));  // exponent carried by xi_d, indexed by d
      }
    chunks_ = 1;
    for (int d = 0; d + 1 < n_; ++d) chunks_ *= static_cast<std::size_t>(M_);
  }

  std::size_t width() const { return job_.targets.size() * eval_.space().size(); }

  std::vector<Complex> run() const {
    int spawn_depth = 0;
    while ((1u << spawn_depth) < cfg_.threads) ++spawn_depth;
    return tree_sum(0, chunks_, spawn_depth);
  }

 private:
  // Fixed binary tree over chunk indices, so the rounding pattern does not
  // depend on how many workers evaluate the leaves.
  std::vector<Complex> tree_sum(std::size_t lo, std::size_t hi, int spawn_depth) const {
    if (hi - lo == 1) return chunk(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<Complex> left, right;
    if (spawn_depth > 0) {
      auto fut = std::async(std::launch::async, [&] { return tree_sum(lo, mid, spawn_depth - 1); });
      right = tree_sum(mid, hi, spawn_depth - 1);
      left = fut.get();
    } else {
      left = tree_sum(lo, mid, 0);
      right = tree_sum(mid, hi, 0);
    }
    for (std::size_t k = 0; k < left.size(); ++k) left[k] += right[k];
    return left;
  }

  std::vector<Complex> chunk(std::size_t c) const {
    std::vector<int> idx(static_cast<std::size_t>(n_), 0);
    for (int d = n_ - 2; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>(c % static_cast<std::size_t>(M_));
      c /= static_cast<std::size_t>(M_);
    }
    const std::size_t D = eval_.space().size();
    std::vector<Complex> acc(width(), Complex(0.0, 0.0));
    std::vector<Complex> xi(static_cast<std::size_t>(n_));
    std::vector<double> theta(static_cast<std::size_t>(n_));
    std::vector<std::vector<Complex>> cols;
    for (int k = 0; k < M_; ++k) {
      idx[static_cast<std::size_t>(n_ - 1)] = k;
      double theta_sum = 0.0;
      Complex energy(0.0, 0.0);
      for (int d = 0; d < n_; ++d) {
        const double a = angles_[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        theta[static_cast<std::size_t>(d)] = a;
        theta_sum += a;
        xi[static_cast<std::size_t>(d)] = std::polar(cfg_.radius, a);
        energy += (std::polar(1.0 / cfg_.radius, -a) - 1.0) * job_.time;
      }
      const Complex time_factor = std::exp(energy);
      eval_.columns(xi, job_.nu, cols);
      for (std::size_t j = 0; j < job_.targets.size(); ++j) {
        Complex* out = acc.data() + j * D;
        for (std::size_t s = 0; s < cols.size(); ++s) {
          double phase = theta_sum;
          const auto& e = exponents_[j][s];
          for (int d = 0; d < n_; ++d) phase += e[static_cast<std::size_t>(d)] * theta[static_cast<std::size_t>(d)];
          const Complex f = std::polar(magnitudes_[j], phase) * time_factor;
          const auto& col = cols[s];
          for (std::size_t p = 0; p < D; ++p)
            if (col[p] != Complex(0.0, 0.0)) out[p] += f * col[p];
        }
      }
    }
    return acc;
  }

  const ColumnEvaluator& eval_;
  const QuadratureConfig& cfg_;
  const QuadratureJob& job_;
  int n_;
  int M_;
  std::vector<double> offsets_;
  std::vector<std::vector<double>> angles_;
  std::vector<double> magnitudes_;
  std::vector<std::vector<std::vector<double>>> exponents_;
  std::size_t chunks_ = 1;
};

inline void check_bethe_size(int particles) {
  require(particles >= 1, ErrorKind::InvalidParameter, "need at least one particle");
  require(particles <= kMaxBetheParticles, ErrorKind::ResourceLimit,
          "contour quadrature is limited to n <= 3 (cost M^n n!)");
}

}  // namespace detail

/// The integrand at one spectral point, summed over all permutations.
inline Complex integrand_entry(const SpectralPoint<Complex>& xi, const TransitionQuery& q) {
  q.validate();
  const int n = q.particles();
  require(xi.size() == n, ErrorKind::InvalidParameter, "spectral point has wrong length");
  xi.require_nonzero();
  const detail::ColumnEvaluator eval(n, q.species(), q.rule);
  std::vector<std::vector<Complex>> cols;
  eval.columns(xi.values, eval.space().index(q.initial.word), cols);
  const std::size_t pi = eval.space().index(q.final_state.word);
  Complex energy(0.0, 0.0);
  for (const auto& v : xi.values) energy += (1.0 / v - 1.0) * q.time;
  Complex total(0.0, 0.0);
  for (std::size_t s = 0; s < cols.size(); ++s) {
    const auto& sigma = eval.perms()[s];
    Complex term = cols[s][pi];
    for (int i = 1; i <= n; ++i) {
      const auto x = q.final_state.positions[static_cast<std::size_t>(i - 1)];
      const auto y = q.initial.positions[static_cast<std::size_t>(sigma(i) - 1)];
      term *= std::pow(xi[sigma(i)], static_cast<int>(x - y - 1));
    }
    total += term;
  }
  return total * std::exp(energy);
}

struct BetheResult {
  double probability = 0.0;
  double imag_residual = 0.0;
  std::optional<double> convergence_delta;
  bool imag_warning = false;   // |imag| above kImagTolerance
  bool out_of_range = false;   // outside [-1e-8, 1 + 1e-8]
  std::vector<std::string> warnings;
};

namespace detail {

inline void annotate(BetheResult& r) {
  r.imag_warning = std::abs(r.imag_residual) > kImagTolerance;
  r.out_of_range = r.probability < -kImagTolerance || r.probability > 1.0 + kImagTolerance;
  if (r.imag_warning)
    r.warnings.push_back(std::string(to_string(ErrorKind::NumericalInconsistency)) + ": imaginary residual " +
                         to_text(r.imag_residual));
  if (r.out_of_range) r.warnings.push_back("probability outside [0,1]: " + to_text(r.probability));
}

}  // namespace detail

/// P_{(Y,nu)}(X,pi;t) by product trapezoid quadrature of the contour integral.
inline BetheResult transition_probability(const TransitionQuery& q, const QuadratureConfig& cfg) {
  q.validate();
  detail::check_bethe_size(q.particles());
  cfg.validate(q.rule);
  BetheResult r;
  if (!q.same_content()) return r;
  const detail::ColumnEvaluator eval(q.particles(), q.species(), q.rule);
  const detail::QuadratureJob job{q.initial.positions, eval.space().index(q.initial.word), q.time,
                                  {q.final_state.positions}};
  const std::size_t pi = eval.space().index(q.final_state.word);
  const Complex v = detail::TorusQuadrature(eval, cfg, job).run()[pi];
  r.probability = v.real();
  r.imag_residual = v.imag();
  if (cfg.convergence_check) {
    QuadratureConfig fine = cfg;
    fine.nodes *= 2;
    r.convergence_delta = std::abs(detail::TorusQuadrature(eval, fine, job).run()[pi].real() - r.probability);
  }
  detail::annotate(r);
  return r;
}

/// Largest |single-sigma integral| over all (pi, nu) at t = 0. Vanishes for
/// sigma != id whenever y_i <= x_i.
inline double vanishing_check(const Permutation& sigma, const Positions& final_positions,
                              const Positions& initial_positions, int species, RuleType rule,
                              const QuadratureConfig& cfg) {
  const int n = sigma.size();
  detail::check_bethe_size(n);
  cfg.validate(rule);
  require(static_cast<int>(final_positions.size()) == n && static_cast<int>(initial_positions.size()) == n,
          ErrorKind::InvalidParameter, "position vectors must have length n");
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (i + 1 < n)
      require(final_positions[k] < final_positions[k + 1] && initial_positions[k] < initial_positions[k + 1],
              ErrorKind::InvalidParameter, "positions must be strictly increasing");
    require(initial_positions[k] <= final_positions[k], ErrorKind::InvalidParameter, "need y_i <= x_i");
  }
  const detail::ColumnEvaluator eval(n, species, rule, sigma);
  double worst = 0.0;
  for (std::size_t nu = 0; nu < eval.space().size(); ++nu) {
    const detail::QuadratureJob job{initial_positions, nu, 0.0, {final_positions}};
    for (const auto& v : detail::TorusQuadrature(eval, cfg, job).run()) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

/// Smallest window W with P(Poisson(n t) > W) < tol. The rightmost particle
/// advances by at most one site per event and nobody moves left of y_1, so
/// [y_1, y_n + W] carries all but tol of the mass.
inline int poisson_window(int particles, double t, double tol) {
  return static_cast<int>(poisson_weights(particles * t, tol).weights.size()) - 1;
}

struct TableRow {
  Configuration state;
  double probability = 0.0;
  double imag_residual = 0.0;
  std::optional<double> convergence_delta;
};

struct ProbabilityTable {
  Configuration initial;
  double time = 0.0;
  int window = 0;
  RuleType rule = RuleType::DropPushType;
  QuadratureConfig cfg;
  std::vector<TableRow> rows;
  double total_mass = 0.0;
  double deficit = 0.0;
  double max_imag = 0.0;
};

/// All (X, pi) with X inside [y_1, y_n + window] and pi a rearrangement of nu.
inline std::vector<Positions> window_shapes(const Positions& initial, int window) {
  const int n = static_cast<int>(initial.size());
  const Position lo = initial.front();
  const Position hi = initial.back() + window;
  std::vector<Positions> out;
  Positions cur;
  auto rec = [&](auto&& self, Position from) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      require(out.size() <= kMaxTableRows, ErrorKind::ResourceLimit, "probability table exceeds 1e5 states");
      return;
    }
    for (Position x = from; x <= hi - (n - 1 - static_cast<Position>(cur.size())); ++x) {
      cur.push_back(x);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, lo);
  return out;
}

inline ProbabilityTable probability_table(const Configuration& initial, double t, int window, RuleType rule,
                                          const QuadratureConfig& cfg) {
  initial.validate();
  detail::check_bethe_size(initial.size());
  cfg.validate(rule);
  require(window >= 1, ErrorKind::InvalidParameter, "window must be positive");
  require(t >= 0.0, ErrorKind::InvalidParameter, "time must be nonnegative");
  const auto shapes = window_shapes(initial.positions, window);
  std::vector<Word> words;
  Word w = species_content(initial.word);
  do words.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  require(shapes.size() * words.size() <= kMaxTableRows, ErrorKind::ResourceLimit,
          "probability table exceeds 1e5 states");

  const detail::ColumnEvaluator eval(initial.size(), max_letter(initial.word), rule);
  const detail::QuadratureJob job{initial.positions, eval.space().index(initial.word), t, shapes};
  const auto coarse = detail::TorusQuadrature(eval, cfg, job).run();
  std::vector<Complex> fine;
  if (cfg.convergence_check) {
    QuadratureConfig f = cfg;
    f.nodes *= 2;
    fine = detail::TorusQuadrature(eval, f, job).run();
  }

  ProbabilityTable table{initial, t, window, rule, cfg, {}, 0.0, 0.0, 0.0};
  const std::size_t D = eval.space().size();
  for (std::size_t j = 0; j < shapes.size(); ++j)
    for (const auto& pi : words) {
      const std::size_t k = j * D + eval.space().index(pi);
      TableRow row{Configuration(shapes[j], pi), coarse[k].real(), coarse[k].imag(), std::nullopt};
      if (!fine.empty()) row.convergence_delta = std::abs(fine[k].real() - row.probability);
      table.total_mass += row.probability;
      table.max_imag = std::max(table.max_imag, std::abs(row.imag_residual));
      table.rows.push_back(std::move(row));
    }
  table.deficit = 1.0 - table.total_mass;
  return table;
}

}  // namespace lrswap
