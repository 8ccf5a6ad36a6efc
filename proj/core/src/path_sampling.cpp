#include "hpimc/path_sampling.hpp"

#include "hpimc/tcf.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hpimc {

namespace {

void check_tables(const StepTables& tables, const UniformGrid& grid) {
  const Index d = grid.size();
  if (tables.forward.rows() != d || tables.forward.cols() != d || tables.backward.rows() != d ||
      tables.backward.cols() != d) {
    throw std::invalid_argument("element tables do not match grid dimension");
  }
  if (tables.steps < 1) {
    throw std::invalid_argument("element tables need N >= 1");
  }
}

std::vector<double> closed_positions(std::span<const Index> beads, const UniformGrid& grid) {
  std::vector<double> x;
  x.reserve(beads.size() + 1);
  for (const Index b : beads) {
    x.push_back(grid.position(b));
  }
  x.push_back(grid.position(beads.front()));
  return x;
}

bool is_unit(const InfluenceHook& influence) {
  const auto* fn = influence.target<Complex (*)(std::span<const double>)>();
  return fn != nullptr && *fn == &unit_influence;
}

}  // namespace

Complex unit_influence(std::span<const double> /*positions*/) { return Complex(1.0, 0.0); }

Complex unit_phase(Complex theta) {
  const double mag = std::abs(theta);
  return mag > 0.0 ? theta / mag : Complex(1.0, 0.0);
}

Complex theta_weight(std::span<const Index> beads, const StepTables& tables) {
  const auto n = static_cast<std::size_t>(tables.steps);
  if (beads.size() != 2 * n) {
    throw std::invalid_argument("path must carry 2N beads");
  }
  Complex forward(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    forward *= tables.forward(beads[k + 1], beads[k]);
  }
  Complex backward(1.0, 0.0);
  for (std::size_t k = n; k < 2 * n; ++k) {
    const Index next = k + 1 == 2 * n ? beads[0] : beads[k + 1];
    backward *= tables.backward(next, beads[k]);
  }
  return backward * forward;
}

PathSample make_path_sample(std::vector<Index> beads, const StepTables& tables) {
  for (const Index b : beads) {
    if (b < 0 || b >= tables.dimension()) {
      throw std::invalid_argument("bead index out of range");
    }
  }
  const Complex theta = theta_weight(beads, tables);
  return PathSample{std::move(beads), theta, unit_phase(theta)};
}

EnumeratedPaths enumerate_paths(const StepTables& tables, const UniformGrid& grid,
                                const Eigen::VectorXd& a_diag, const Eigen::VectorXd& b_diag,
                                const InfluenceHook& influence, std::int64_t limit) {
  check_tables(tables, grid);
  const Index d = grid.size();
  const int beads = 2 * tables.steps;
  const double total = std::pow(static_cast<double>(d), beads);
  if (total > static_cast<double>(limit)) {
    throw std::invalid_argument("path space too large to enumerate");
  }
  const bool unit = is_unit(influence);
  std::vector<Index> path(static_cast<std::size_t>(beads), 0);
  EnumeratedPaths out{0.0, Complex{}};
  const auto count = static_cast<std::int64_t>(total);
  for (std::int64_t id = 0; id < count; ++id) {
    std::int64_t rest = id;
    for (auto& b : path) {
      b = static_cast<Index>(rest % d);
      rest /= d;
    }
    Complex w = theta_weight(path, tables);
    if (!unit) {
      w *= influence(closed_positions(path, grid));
    }
    out.f += std::abs(w);
    out.sum += a_diag[path[static_cast<std::size_t>(tables.steps)]] * b_diag[path[0]] * w;
  }
  return out;
}

double path_distribution_f(const StepTables& tables, const UniformGrid& grid,
                           const InfluenceHook& influence, std::int64_t limit) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.size());
  return enumerate_paths(tables, grid, ones, ones, influence, limit).f;
}

namespace {

struct ChainResult {
  std::vector<Complex> batch_means;
  double f_sum = 0.0;
  double f_sq_sum = 0.0;
  std::int64_t f_draws = 0;
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
};

ChainResult run_chain(const StepTables& tables, const UniformGrid& grid,
                      const Eigen::VectorXd& a_diag, const Eigen::VectorXd& b_diag,
                      const SamplerConfig& config, const InfluenceHook& influence, int chain,
                      bool estimate_f) {
  const Index d = grid.size();
  const int n = tables.steps;
  const int beads = 2 * n;
  const int window = config.window > 0 ? config.window : static_cast<int>(std::max<Index>(1, d / 8));
  const bool unit = is_unit(influence);

  std::seed_seq seq{static_cast<std::uint64_t>(config.seed),
                    static_cast<std::uint64_t>(chain)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> step(1, 2 * window);
  std::uniform_int_distribution<Index> site(0, d - 1);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const auto weight = [&](std::span<const Index> path) {
    Complex w = theta_weight(path, tables);
    if (!unit) {
      w *= influence(closed_positions(path, grid));
    }
    return w;
  };

  // Start from the constant path with the largest weight.
  std::vector<Index> path(static_cast<std::size_t>(beads), 0);
  Complex current{};
  for (Index q = 0; q < d; ++q) {
    std::vector<Index> trial(static_cast<std::size_t>(beads), q);
    const Complex w = weight(trial);
    if (std::abs(w) > std::abs(current)) {
      current = w;
      path = trial;
    }
  }

  const auto burn_in = static_cast<std::int64_t>(
      std::ceil(config.burn_in_fraction * static_cast<double>(config.iterations)));
  const std::int64_t per_batch = std::max<std::int64_t>(1, config.iterations / config.batches);
  const std::int64_t measured = per_batch * config.batches;

  ChainResult out;
  out.batch_means.reserve(static_cast<std::size_t>(config.batches));
  Complex batch_sum{};
  std::int64_t batch_accepted = 0;
  std::vector<Index> proposal = path;
  std::vector<Index> random_path(static_cast<std::size_t>(beads));

  for (std::int64_t it = 0; it < burn_in + measured; ++it) {
    for (int b = 0; b < beads; ++b) {
      const int shift = step(rng);
      const int displacement = shift <= window ? shift : window - shift;
      proposal = path;
      auto& bead = proposal[static_cast<std::size_t>(b)];
      bead = ((bead + displacement) % d + d) % d;
      const Complex w = weight(proposal);
      const double old_mag = std::abs(current);
      const double new_mag = std::abs(w);
      const bool accept = old_mag == 0.0 ? new_mag > 0.0 : uniform(rng) * old_mag < new_mag;
      ++out.proposed;
      if (accept) {
        path.swap(proposal);
        current = w;
        ++out.accepted;
        ++batch_accepted;
      }
    }
    if (it < burn_in) {
      continue;
    }
    batch_sum += a_diag[path[static_cast<std::size_t>(n)]] * b_diag[path[0]] * unit_phase(current);
    if (estimate_f) {
      for (auto& r : random_path) {
        r = site(rng);
      }
      const double mag = std::abs(weight(random_path));
      out.f_sum += mag;
      out.f_sq_sum += mag * mag;
      ++out.f_draws;
    }
    if ((it - burn_in + 1) % per_batch == 0) {
      if (batch_accepted == 0) {
        std::ostringstream os;
        os << "sampler stuck: no accepted moves in batch " << out.batch_means.size()
           << " of chain " << chain << " (|Theta| = " << std::abs(current)
           << ", window = " << window << ")";
        throw SamplerStuckError(os.str());
      }
      out.batch_means.push_back(batch_sum / static_cast<double>(per_batch));
      batch_sum = Complex{};
      batch_accepted = 0;
    }
  }
  return out;
}

}  // namespace

McResult mc_tcf(const StepTables& tables, const UniformGrid& grid, const Eigen::VectorXd& a_diag,
                const Eigen::VectorXd& b_diag, double partition_function,
                const SamplerConfig& config, const InfluenceHook& influence) {
  check_tables(tables, grid);
  if (config.iterations < 1 || config.batches < 2 || config.chains < 1) {
    throw std::invalid_argument("sampler needs iterations >= 1, batches >= 2, chains >= 1");
  }
  if (config.iterations < config.batches) {
    throw std::invalid_argument("sampler needs at least one sweep per batch");
  }
  if (!(partition_function > 0.0)) {
    throw std::invalid_argument("partition function must be positive");
  }
  const Index d = grid.size();
  if (a_diag.size() != d || b_diag.size() != d) {
    throw std::invalid_argument("observable length does not match grid");
  }

  const double space = std::pow(static_cast<double>(d), 2 * tables.steps);
  const bool f_exact = space <= static_cast<double>(config.enumeration_limit);
  const double f_enumerated =
      f_exact ? path_distribution_f(tables, grid, influence, config.enumeration_limit) : 0.0;

  std::vector<ChainResult> chains(static_cast<std::size_t>(config.chains));
  parallel_for(config.chains, config.threads, [&](int c) {
    chains[static_cast<std::size_t>(c)] =
        run_chain(tables, grid, a_diag, b_diag, config, influence, c, !f_exact);
  });

  // Deterministic merge in chain order.
  std::vector<Complex> means;
  double f_sum = 0.0;
  double f_sq = 0.0;
  std::int64_t f_draws = 0;
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
  for (const auto& c : chains) {
    means.insert(means.end(), c.batch_means.begin(), c.batch_means.end());
    f_sum += c.f_sum;
    f_sq += c.f_sq_sum;
    f_draws += c.f_draws;
    accepted += c.accepted;
    proposed += c.proposed;
  }
  Complex mean{};
  for (const auto& m : means) {
    mean += m;
  }
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (const auto& m : means) {
    var += std::norm(m - mean);
  }
  var /= static_cast<double>(means.size() - 1);
  const double se_mean = std::sqrt(var / static_cast<double>(means.size()));

  double f = f_enumerated;
  double f_se = 0.0;
  if (!f_exact) {
    const double avg = f_sum / static_cast<double>(f_draws);
    const double avg_sq = f_sq / static_cast<double>(f_draws);
    f = space * avg;
    f_se = space * std::sqrt(std::max(0.0, avg_sq - avg * avg) / static_cast<double>(f_draws));
  }
  const double scale = f / partition_function;
  return McResult{scale * mean,
                  scale * se_mean,
                  f,
                  f_se,
                  f_exact,
                  static_cast<double>(accepted) / static_cast<double>(proposed),
                  config.iterations * config.chains};
}

}  // namespace hpimc
