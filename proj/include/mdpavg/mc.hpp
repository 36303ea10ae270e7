#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mdpavg/mdp.hpp"
#include "mdpavg/models.hpp"

namespace mdpavg {

/// Constant out-degree model plus the player-1 probability used by to_mdp.
/// Targets are the ones the degree spec fixes.
struct ConstDegModel {
  DegreeSpec degrees;
  double player1_prob = 0.5;
  bool operator==(const ConstDegModel&) const = default;
};

/// Deterministic family from gen_worst_case.
struct WorstCaseModel {
  std::size_t stages = 1;
  bool operator==(const WorstCaseModel&) const = default;
};

using ModelSpec = std::variant<ConstDegModel, GnpSpec, WorstCaseModel>;

/// "const-deg", "gnp" or "worst-case".
std::string model_name(const ModelSpec& model);
/// Degree string, edge probability or stage count.
std::string model_param(const ModelSpec& model);
std::size_t model_vertices(const ModelSpec& model);
/// Number of distinct out-degrees; 1 for the other families.
std::size_t model_degree_classes(const ModelSpec& model);
/// Throws SpecError / InputError on bad parameters.
void validate_model(const ModelSpec& model);

/// The MDP of one trial. The graph uses derive_seed(seed, 0), the partition
/// and target draw derive_seed(seed, 1).
Mdp sample_mdp(const ModelSpec& model, std::uint64_t seed);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::string model;
  std::size_t n = 0;
  std::string param;
  /// derive_seed(master, trial).
  std::uint64_t seed_stream = 0;
  /// Size of the first reverse reachable set.
  std::size_t size_s = 0;
  std::size_t iterations = 0;
  std::size_t removed = 0;
  std::uint64_t work = 0;
  std::uint64_t edges = 0;
  std::uint64_t wall_ns = 0;

  /// Equal up to wall time.
  bool same_outcome(const TrialRecord& o) const;
};

TrialRecord run_trial(const ModelSpec& model, std::uint64_t master_seed, std::uint64_t trial);

inline constexpr const char* kCsvHeader = "trial,model,n,param,seed_stream,size_s,iterations,removed,work,wall_ns";

/// `# key=value` provenance lines, then the header, then one row per record.
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records,
               const std::vector<std::pair<std::string, std::string>>& provenance);
std::string csv_row(const TrialRecord& r);

/// Integer accumulators only, so add/merge are exact and order-free.
struct ExperimentSummary {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t sum_iterations = 0;
  unsigned __int128 sum_iterations_sq = 0;
  std::uint64_t multi_iteration = 0;
  unsigned __int128 sum_work = 0;
  unsigned __int128 sum_work_sq = 0;
  std::uint64_t sum_removed = 0;
  std::uint64_t sum_wall_ns = 0;
  std::map<std::size_t, std::uint64_t> size_counts;

  void add(const TrialRecord& r);
  void merge(const ExperimentSummary& other);
  /// Equal up to wall time.
  bool same_statistics(const ExperimentSummary& o) const;

  double mean_iterations() const;
  /// Unbiased sample variance; 0 for one trial.
  double var_iterations() const;
  /// Normal approximation, mean +- z sd / sqrt(trials).
  std::pair<double, double> iterations_ci(double z = 1.96) const;
  double multi_iteration_fraction() const;
  /// Wald interval clipped to [0, 1].
  std::pair<double, double> multi_iteration_ci(double z = 1.96) const;
  double mean_work() const;
  double mean_work_per_vertex() const;
  double var_work_per_vertex() const;
  std::pair<double, double> work_per_vertex_ci(double z = 1.96) const;
  double mean_removed() const;
  double mean_wall_ns() const;
};

struct ExperimentResult {
  ExperimentSummary summary;
  /// Indexed by trial; empty when records were not kept.
  std::vector<TrialRecord> records;
};

/// Runs trials 0..trials-1 on `jobs` threads (0: hardware concurrency).
/// Throws InputError for trials = 0.
ExperimentResult run_experiment(const ModelSpec& model, std::uint64_t trials, std::uint64_t master_seed,
                                unsigned jobs = 1, bool keep_records = true);

/// Structured `key=value` report.
std::string format_summary(const ExperimentSummary& s, const ModelSpec& model, std::uint64_t master_seed);

struct SizeBin {
  std::size_t k = 0;
  std::uint64_t count = 0;
  double fraction = 0.0;
  double std_error = 0.0;
  /// Clopper-Pearson interval.
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct SizeDistribution {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  double confidence = 0.95;
  /// Observed sizes only, ascending.
  std::vector<SizeBin> bins;
  /// [ceil(30 x ln n), n - 1]; empty when lo > hi.
  std::size_t middle_lo = 0;
  std::size_t middle_hi = 0;
  std::uint64_t middle_count = 0;
  double middle_fraction = 0.0;
  double middle_ci_hi = 0.0;
  bool middle_flagged() const { return middle_count > 0; }
  /// 0 for sizes never observed.
  double fraction_of(std::size_t k) const;
};

/// Clopper-Pearson interval for `count` successes out of `trials`.
std::pair<double, double> clopper_pearson(std::uint64_t count, std::uint64_t trials, double confidence = 0.95);

SizeDistribution estimate_size_distribution(const ModelSpec& model, std::uint64_t trials, std::uint64_t seed,
                                            unsigned jobs = 1, double confidence = 0.95);
SizeDistribution size_distribution_from(const ExperimentSummary& summary, std::size_t degree_classes,
                                        double confidence = 0.95);

struct ScalingRow {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  double mean_work = 0.0;
  double mean_iterations = 0.0;
  double max_iterations = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  /// Least-squares slope and intercept of ln(mean work) on ln(n).
  double slope = 0.0;
  double intercept = 0.0;
};

using ModelFamily = std::function<ModelSpec(std::size_t)>;

ModelFamily const_deg_family(std::uint32_t degree, std::size_t targets, double player1_prob = 0.5);
/// p = c ln(n) / n.
ModelFamily gnp_family(double c, std::size_t targets = 1, double player1_prob = 0.5);
/// The grid holds stage counts.
ModelFamily worst_case_family();

/// Needs at least 4 grid points (InputError). Size n uses master seed
/// derive_seed(seed, n).
ScalingTable scaling_study(const ModelFamily& family, const std::vector<std::size_t>& grid,
                           std::uint64_t trials_per_n, std::uint64_t seed, unsigned jobs = 1);

/// Least-squares slope and intercept of y on x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mdpavg
