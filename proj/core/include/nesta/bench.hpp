#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nesta/linear_map.hpp"
#include "nesta/solver.hpp"

namespace nesta {

/// s-sparse signal with nonzeros +-10^(alpha u), u uniform in [0,1) and
/// alpha = dynamic_range_db / 20: magnitudes log-uniform over the dynamic
/// range.
Vec gen_sparse_signal(Index n, Index s, double dynamic_range_db,
                      std::uint64_t seed);

/// Compressible signal: magnitudes i^(-decay_p), random signs, randomly
/// permuted positions.
Vec gen_compressible_signal(Index n, double decay_p, std::uint64_t seed);

struct Square {
  Index row = 0;
  Index col = 0;
  Index size = 0;
  double amplitude = 0.0;
};

/// Axis-aligned squares with log-uniform amplitudes in [1, 10^(db/20)].
std::vector<Square> gen_squares(Index side, double dynamic_range_db,
                                std::uint64_t seed, int count = 30);

/// Sum of the squares over a zero background; piecewise constant.
Vec render_squares(Index side, const std::vector<Square>& squares);

Vec gen_squares_image(Index side, double dynamic_range_db, std::uint64_t seed,
                      int count = 30);

/// Crit. 1: l1 norm no worse than the reference and residual within 5%.
/// Inclusive comparisons.
bool crit1_met(const Vec& x_hat, const Vec& x_ref, const LinearMap& a,
               const Vec& b);

/// Crit. 2: composite objective lambda ||x||_1 + 1/2 ||b - A x||^2 no worse
/// than the reference's. Inclusive.
bool crit2_met(const Vec& x_hat, const Vec& x_ref, const LinearMap& a,
               const Vec& b, double lambda);

enum class StopRule { Crit1, Crit2 };
enum class SolverId { Nesta, NestaCt, Fista };

std::string solver_name(SolverId id);

struct ExperimentSpec {
  Index n = 4096;
  Index m = 512;
  Index s = 102;  // dense-support preset s = m/5; sparse-support uses m/100
  double dynamic_range_db = 20.0;
  double sigma = 0.1;
  MapKind operator_kind = MapKind::SubsampledDct;
  std::uint64_t seed = 1;
  std::vector<SolverId> roster{SolverId::NestaCt};
  int trials = 1;
  StopRule stop_rule = StopRule::Crit1;

  double mu = 0.02;
  double delta = 1e-7;
  int max_iter = 10000;
  int continuation_steps = 4;
  std::int64_t dnc_calls = 20000;
};

struct TrialRecord {
  int trial = 0;
  std::string solver;
  std::int64_t calls_a = 0;
  double rel_l1_err = 0.0;  // (||x||_1 - ||x_ref||_1) / ||x_ref||_1
  double linf_err = 0.0;    // ||x - x_ref||_inf
  bool converged = false;
  double wall_time = 0.0;  // seconds; excluded from determinism guarantees
};

struct SolverSummary {
  std::string solver;
  double mean_calls = 0.0;
  std::int64_t min_calls = 0;
  std::int64_t max_calls = 0;
  int dnc_count = 0;
  int trials = 0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<SolverSummary> summary;
};

/// The comparison protocol, per trial: build the instance, pair lambda and
/// epsilon with the two-step handshake, run the NESTA reference, then run
/// the remaining roster against the stopping criterion or until calls_A
/// would exceed dnc_calls. Errors and accuracy are measured against the
/// handshake's long-run FISTA solution. Trials run concurrently up to
/// `jobs`, each on its own derived PRNG stream.
ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs = 1);

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& recs);

/// Summary table in "mean (min-max)" cell format, one row per solver.
void write_summary(std::ostream& os, const std::vector<SolverSummary>& summary);

}  // namespace nesta
