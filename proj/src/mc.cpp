#include "mdpavg/mc.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/beta.hpp>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "mdpavg/core.hpp"
#include "mdpavg/error.hpp"
#include "mdpavg/rng.hpp"

namespace mdpavg {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double to_double(unsigned __int128 v) { return static_cast<double>(v); }

// Unbiased variance from integer sums; exact until the final division.
double variance(unsigned __int128 sum, unsigned __int128 sum_sq, std::uint64_t count) {
  if (count < 2) return 0.0;
  const long double c = static_cast<long double>(count);
  const long double s = static_cast<long double>(sum);
  const long double v = (static_cast<long double>(sum_sq) - s * s / c) / (c - 1);
  return v > 0 ? static_cast<double>(v) : 0.0;
}

}  // namespace

std::string model_name(const ModelSpec& model) {
  return std::visit(overloaded{[](const ConstDegModel&) { return std::string("const-deg"); },
                               [](const GnpSpec&) { return std::string("gnp"); },
                               [](const WorstCaseModel&) { return std::string("worst-case"); }},
                    model);
}

std::string model_param(const ModelSpec& model) {
  return std::visit(overloaded{[](const ConstDegModel& m) { return m.degrees.to_string(); },
                               [](const GnpSpec& m) { return num(m.edge_prob); },
                               [](const WorstCaseModel& m) { return std::to_string(m.stages); }},
                    model);
}

std::size_t model_vertices(const ModelSpec& model) {
  return std::visit(overloaded{[](const ConstDegModel& m) { return m.degrees.vertices; },
                               [](const GnpSpec& m) { return m.vertices; },
                               [](const WorstCaseModel& m) { return 3 * m.stages + 1; }},
                    model);
}

std::size_t model_degree_classes(const ModelSpec& model) {
  if (const auto* m = std::get_if<ConstDegModel>(&model)) return m->degrees.distinct_degrees();
  return 1;
}

void validate_model(const ModelSpec& model) {
  std::visit(overloaded{[](const ConstDegModel& m) {
                          m.degrees.validate();
                          if (!(m.player1_prob >= 0 && m.player1_prob <= 1))
                            throw InputError("player-1 probability must lie in [0, 1]");
                        },
                        [](const GnpSpec& m) { m.validate(); },
                        [](const WorstCaseModel& m) {
                          if (m.stages < 1) throw InputError("worst-case family needs at least one stage");
                        }},
             model);
}

Mdp sample_mdp(const ModelSpec& model, std::uint64_t seed) {
  return std::visit(overloaded{[&](const ConstDegModel& m) {
                                 auto g = sample_constant_outdegree(m.degrees, derive_seed(seed, 0));
                                 return to_mdp(g.graph, m.player1_prob, TargetChoice(std::move(g.targets)),
                                               derive_seed(seed, 1));
                               },
                               [&](const GnpSpec& m) {
                                 const auto g = sample_gnp(m, derive_seed(seed, 0));
                                 return to_mdp(g, m.player1_prob, TargetChoice(m.target_count), derive_seed(seed, 1));
                               },
                               [](const WorstCaseModel& m) { return gen_worst_case(m.stages); }},
                    model);
}

bool TrialRecord::same_outcome(const TrialRecord& o) const {
  return trial == o.trial && model == o.model && n == o.n && param == o.param && seed_stream == o.seed_stream &&
         size_s == o.size_s && iterations == o.iterations && removed == o.removed && work == o.work &&
         edges == o.edges;
}

TrialRecord run_trial(const ModelSpec& model, std::uint64_t master_seed, std::uint64_t trial) {
  TrialRecord r;
  r.trial = trial;
  r.model = model_name(model);
  r.n = model_vertices(model);
  r.param = model_param(model);
  r.seed_stream = derive_seed(master_seed, trial);

  const auto start = std::chrono::steady_clock::now();
  const Mdp mdp = sample_mdp(model, r.seed_stream);
  const SolveResult res = classical_buchi(mdp);
  const auto stop = std::chrono::steady_clock::now();

  r.size_s = res.first_reach_size;
  r.iterations = res.iterations;
  for (const auto& step : res.removals) r.removed += step.size();
  r.work = res.work;
  r.edges = mdp.edge_count();
  r.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return r;
}

std::string csv_row(const TrialRecord& r) {
  std::ostringstream os;
  // Degree strings contain commas.
  const bool quote = r.param.find(',') != std::string::npos;
  os << r.trial << ',' << r.model << ',' << r.n << ',' << (quote ? "\"" : "") << r.param << (quote ? "\"" : "") << ','
     << r.seed_stream << ',' << r.size_s << ',' << r.iterations << ',' << r.removed << ',' << r.work << ','
     << r.wall_ns;
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records,
               const std::vector<std::pair<std::string, std::string>>& provenance) {
  for (const auto& [k, v] : provenance) out << "# " << k << '=' << v << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

void ExperimentSummary::add(const TrialRecord& r) {
  n = std::max(n, r.n);
  ++trials;
  sum_iterations += r.iterations;
  sum_iterations_sq += static_cast<unsigned __int128>(r.iterations) * r.iterations;
  if (r.iterations > 1) ++multi_iteration;
  sum_work += r.work;
  sum_work_sq += static_cast<unsigned __int128>(r.work) * r.work;
  sum_removed += r.removed;
  sum_wall_ns += r.wall_ns;
  ++size_counts[r.size_s];
}

void ExperimentSummary::merge(const ExperimentSummary& o) {
  n = std::max(n, o.n);
  trials += o.trials;
  sum_iterations += o.sum_iterations;
  sum_iterations_sq += o.sum_iterations_sq;
  multi_iteration += o.multi_iteration;
  sum_work += o.sum_work;
  sum_work_sq += o.sum_work_sq;
  sum_removed += o.sum_removed;
  sum_wall_ns += o.sum_wall_ns;
  for (const auto& [k, c] : o.size_counts) size_counts[k] += c;
}

bool ExperimentSummary::same_statistics(const ExperimentSummary& o) const {
  return n == o.n && trials == o.trials && sum_iterations == o.sum_iterations &&
         sum_iterations_sq == o.sum_iterations_sq && multi_iteration == o.multi_iteration && sum_work == o.sum_work &&
         sum_work_sq == o.sum_work_sq && sum_removed == o.sum_removed && size_counts == o.size_counts;
}

double ExperimentSummary::mean_iterations() const {
  return trials ? static_cast<double>(sum_iterations) / trials : 0.0;
}

double ExperimentSummary::var_iterations() const { return variance(sum_iterations, sum_iterations_sq, trials); }

std::pair<double, double> ExperimentSummary::iterations_ci(double z) const {
  const double m = mean_iterations();
  const double h = trials ? z * std::sqrt(var_iterations() / trials) : 0.0;
  return {m - h, m + h};
}

double ExperimentSummary::multi_iteration_fraction() const {
  return trials ? static_cast<double>(multi_iteration) / trials : 0.0;
}

std::pair<double, double> ExperimentSummary::multi_iteration_ci(double z) const {
  const double f = multi_iteration_fraction();
  const double h = trials ? z * std::sqrt(f * (1 - f) / trials) : 0.0;
  return {std::max(0.0, f - h), std::min(1.0, f + h)};
}

double ExperimentSummary::mean_work() const { return trials ? to_double(sum_work) / trials : 0.0; }

double ExperimentSummary::mean_work_per_vertex() const { return n ? mean_work() / n : 0.0; }

double ExperimentSummary::var_work_per_vertex() const {
  return n ? variance(sum_work, sum_work_sq, trials) / (static_cast<double>(n) * n) : 0.0;
}

std::pair<double, double> ExperimentSummary::work_per_vertex_ci(double z) const {
  const double m = mean_work_per_vertex();
  const double h = trials ? z * std::sqrt(var_work_per_vertex() / trials) : 0.0;
  return {m - h, m + h};
}

double ExperimentSummary::mean_removed() const {
  return trials ? static_cast<double>(sum_removed) / trials : 0.0;
}

double ExperimentSummary::mean_wall_ns() const { return trials ? static_cast<double>(sum_wall_ns) / trials : 0.0; }

ExperimentResult run_experiment(const ModelSpec& model, std::uint64_t trials, std::uint64_t master_seed,
                                unsigned jobs, bool keep_records) {
  if (trials == 0) throw InputError("an experiment needs at least one trial");
  validate_model(model);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, trials));

  ExperimentResult result;
  if (keep_records) result.records.resize(trials);
  std::vector<ExperimentSummary> partial(jobs);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&](unsigned id) {
    try {
      for (std::uint64_t i; !failed && (i = next.fetch_add(1)) < trials;) {
        TrialRecord r = run_trial(model, master_seed, i);
        partial[id].add(r);
        if (keep_records) result.records[i] = std::move(r);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Integer sums make the merge order irrelevant.
  for (const auto& p : partial) result.summary.merge(p);
  result.summary.n = model_vertices(model);
  return result;
}

std::string format_summary(const ExperimentSummary& s, const ModelSpec& model, std::uint64_t master_seed) {
  std::ostringstream os;
  os.precision(12);
  os << "model=" << model_name(model) << '\n'
     << "n=" << model_vertices(model) << '\n'
     << "param=" << model_param(model) << '\n'
     << "master_seed=" << master_seed << '\n'
     << "trials=" << s.trials << '\n';
  const auto [ilo, ihi] = s.iterations_ci();
  os << "mean_iterations=" << s.mean_iterations() << '\n'
     << "var_iterations=" << s.var_iterations() << '\n'
     << "mean_iterations_ci95=" << ilo << ',' << ihi << '\n';
  const auto [mlo, mhi] = s.multi_iteration_ci();
  os << "multi_iteration_count=" << s.multi_iteration << '\n'
     << "multi_iteration_fraction=" << s.multi_iteration_fraction() << '\n'
     << "multi_iteration_ci95=" << mlo << ',' << mhi << '\n';
  const auto [wlo, whi] = s.work_per_vertex_ci();
  os << "mean_work=" << s.mean_work() << '\n'
     << "mean_work_per_vertex=" << s.mean_work_per_vertex() << '\n'
     << "var_work_per_vertex=" << s.var_work_per_vertex() << '\n'
     << "work_per_vertex_ci95=" << wlo << ',' << whi << '\n'
     << "mean_removed=" << s.mean_removed() << '\n'
     << "mean_wall_ns=" << s.mean_wall_ns() << '\n';
  for (const auto& [k, c] : s.size_counts) os << "size_s." << k << '=' << c << '\n';
  return os.str();
}

double SizeDistribution::fraction_of(std::size_t k) const {
  for (const auto& b : bins)
    if (b.k == k) return b.fraction;
  return 0.0;
}

std::pair<double, double> clopper_pearson(std::uint64_t count, std::uint64_t trials, double confidence) {
  if (trials == 0) throw InputError("Clopper-Pearson interval needs at least one trial");
  if (count > trials) throw InputError("success count exceeds trial count");
  const double a = (1 - confidence) / 2;
  const double x = static_cast<double>(count), m = static_cast<double>(trials);
  double lo = 0.0, hi = 1.0;
  if (count > 0) lo = boost::math::quantile(boost::math::beta_distribution<>(x, m - x + 1), a);
  if (count < trials) hi = boost::math::quantile(boost::math::beta_distribution<>(x + 1, m - x), 1 - a);
  return {lo, hi};
}

SizeDistribution size_distribution_from(const ExperimentSummary& summary, std::size_t degree_classes,
                                        double confidence) {
  if (summary.trials == 0) throw InputError("size distribution needs at least one trial");
  SizeDistribution d;
  d.n = summary.n;
  d.trials = summary.trials;
  d.confidence = confidence;
  const double m = static_cast<double>(summary.trials);
  for (const auto& [k, c] : summary.size_counts) {
    SizeBin b;
    b.k = k;
    b.count = c;
    b.fraction = c / m;
    b.std_error = std::sqrt(b.fraction * (1 - b.fraction) / m);
    std::tie(b.ci_lo, b.ci_hi) = clopper_pearson(c, summary.trials, confidence);
    d.bins.push_back(b);
  }
  const double lo = 30.0 * degree_classes * std::log(static_cast<double>(std::max<std::size_t>(d.n, 1)));
  d.middle_lo = static_cast<std::size_t>(std::ceil(lo));
  d.middle_hi = d.n > 0 ? d.n - 1 : 0;
  for (const auto& b : d.bins)
    if (b.k >= d.middle_lo && b.k <= d.middle_hi) d.middle_count += b.count;
  d.middle_fraction = d.middle_count / m;
  d.middle_ci_hi = clopper_pearson(d.middle_count, d.trials, confidence).second;
  return d;
}

SizeDistribution estimate_size_distribution(const ModelSpec& model, std::uint64_t trials, std::uint64_t seed,
                                            unsigned jobs, double confidence) {
  const auto res = run_experiment(model, trials, seed, jobs, false);
  return size_distribution_from(res.summary, model_degree_classes(model), confidence);
}

ModelFamily const_deg_family(std::uint32_t degree, std::size_t targets, double player1_prob) {
  return [=](std::size_t n) -> ModelSpec {
    return ConstDegModel{DegreeSpec{n, {{degree, n, targets}}}, player1_prob};
  };
}

ModelFamily gnp_family(double c, std::size_t targets, double player1_prob) {
  return [=](std::size_t n) -> ModelSpec {
    const double p = std::min(1.0, c * std::log(static_cast<double>(n)) / static_cast<double>(n));
    return GnpSpec{n, p, player1_prob, targets};
  };
}

ModelFamily worst_case_family() {
  return [](std::size_t stages) -> ModelSpec { return WorstCaseModel{stages}; };
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("line fit needs two or more paired points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw InputError("line fit needs distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

ScalingTable scaling_study(const ModelFamily& family, const std::vector<std::size_t>& grid,
                           std::uint64_t trials_per_n, std::uint64_t seed, unsigned jobs) {
  if (grid.size() < 4) throw InputError("scaling study needs at least 4 grid points");
  ScalingTable table;
  std::vector<double> lx, ly;
  for (std::size_t point : grid) {
    const ModelSpec model = family(point);
    const auto res = run_experiment(model, trials_per_n, derive_seed(seed, point), jobs, true);
    ScalingRow row;
    row.n = model_vertices(model);
    row.trials = res.summary.trials;
    row.mean_work = res.summary.mean_work();
    row.mean_iterations = res.summary.mean_iterations();
    for (const auto& r : res.records) row.max_iterations = std::max(row.max_iterations, double(r.iterations));
    table.rows.push_back(row);
    lx.push_back(std::log(static_cast<double>(row.n)));
    ly.push_back(std::log(std::max(row.mean_work, 1.0)));
  }
  std::tie(table.slope, table.intercept) = fit_line(lx, ly);
  return table;
}

}  // namespace mdpavg
