#include "marcopolo/experiments.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "marcopolo/placement_io.hpp"
#include "marcopolo/simulator.hpp"

namespace marcopolo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr long kChunk = 2048;

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(trial)));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Point2 sample_poi(std::mt19937_64& rng, double n) {
  const double angle = 2.0 * kPi * uniform01(rng);
  const double dist = n * uniform01(rng);
  return polar(dist, angle);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kProbes:
      return "P";
    case Metric::kDistance:
      return "D";
    case Metric::kResponses:
      return "R";
  }
  return "?";
}

std::vector<StatsRow> MonteCarloResult::rows() const {
  std::vector<StatsRow> out;
  for (const auto& a : algorithms) out.insert(out.end(), a.rows.begin(), a.rows.end());
  return out;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  const auto j = nlohmann::json::parse(in);
  ExperimentConfig c;
  c.n = j.value("n", c.n);
  c.trials = j.value("trials", c.trials);
  if (j.contains("algorithms")) c.algorithms = j["algorithms"].get<std::vector<std::string>>();
  c.seed = j.value("seed", c.seed);
  c.poi_distribution = j.value("poi_distribution", c.poi_distribution);
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("placement_files")) {
    for (auto& [k, v] : j["placement_files"].items()) {
      std::filesystem::path p = v.get<std::string>();
      if (p.is_relative()) p = path.parent_path() / p;
      c.placement_files[k] = p;
    }
  }
  if (j.value("hex_order", std::string("center_first")) == "center_last") c.hex_order = HexagonOrder::kCenterLast;
  c.hexfam_budget = j.value("hexfam_budget", 0);
  c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
  if (c.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (c.n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (c.poi_distribution != "uniform-angle-uniform-radius") {
    throw std::invalid_argument("config: unsupported poi_distribution " + c.poi_distribution);
  }
  return c;
}

namespace {

struct Acc {
  long count = 0;
  double mean = 0.0, m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::vector<long> bins;

  void add(double x, double lo, double width) {
    ++count;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
    min = std::min(min, x);
    max = std::max(max, x);
    long b = static_cast<long>(std::floor((x - lo) / width));
    b = std::clamp<long>(b, 0, static_cast<long>(bins.size()) - 1);
    ++bins[b];
  }
  void merge(const Acc& o) {
    if (o.count == 0) return;
    const long n = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * static_cast<double>(count) * o.count / n;
    count = n;
    min = std::min(min, o.min);
    max = std::max(max, o.max);
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += o.bins[i];
  }
};

struct Subject {
  std::string name;
  AlgorithmId id = AlgorithmId::kAlg1;
  LayerPlacement placement;
  // Raw per-run limits (un-normalised); NaN = none.
  double p_limit = std::numeric_limits<double>::quiet_NaN();
  double d_limit = std::numeric_limits<double>::quiet_NaN();
  double r_limit = std::numeric_limits<double>::quiet_NaN();
  // Table bound columns (normalised).
  double p_bound = std::numeric_limits<double>::quiet_NaN();
  double d_bound = std::numeric_limits<double>::quiet_NaN();
  double r_bound = std::numeric_limits<double>::quiet_NaN();
};

Subject make_subject(const std::string& name, const ExperimentConfig& cfg) {
  Subject s;
  s.name = name;
  s.id = parse_algorithm(name);
  const double logn = ceil_log2(cfg.n);
  switch (s.id) {
    case AlgorithmId::kShell:
      return s;
    case AlgorithmId::kHexFamily: {
      const int budget = cfg.hexfam_budget > 0 ? cfg.hexfam_budget : ceil_log2(cfg.n);
      s.placement = hexfam_layer(budget, cfg.n);
      const int L = hexfam_layers(budget, cfg.n);
      s.p_limit = 6.0 * budget * (L * (L - 1) / 2.0);
      s.r_limit = budget;
      s.p_bound = s.p_limit / logn;
      s.r_bound = s.r_limit / logn;
      return s;
    }
    case AlgorithmId::kAlg7:
    case AlgorithmId::kAlg8: {
      auto it = cfg.placement_files.find(name);
      if (it == cfg.placement_files.end()) {
        throw std::runtime_error(name + " needs a placement file (optimizer output)");
      }
      s.placement = load_placement(it->second).placement;
      break;
    }
    default: {
      GenerateOptions g;
      g.hex_order = cfg.hex_order;
      s.placement = generate_layer(s.id, g);
    }
  }
  if (!s.placement.certified) throw std::runtime_error(name + ": placement is not certified");
  const auto b = analyze(s.placement.probes);
  const auto limits = run_limits(b, s.placement.probes.size(), cfg.n);
  s.p_limit = limits.probes;
  s.d_limit = limits.distance;
  s.r_limit = limits.responses;
  s.p_bound = b.c_probes;
  s.d_bound = b.b_distance;
  s.r_bound = b.c_responses;
  return s;
}

struct ChunkResult {
  Acc acc[3];
  long violations = 0;
};

ChunkResult run_chunk(const Subject& s, const ExperimentConfig& cfg, long begin, long end, const double lo[3],
                      const double width[3]) {
  ChunkResult r;
  for (auto& a : r.acc) a.bins.assign(cfg.histogram_bins, 0);
  const double logn = ceil_log2(cfg.n);
  RunOptions opt;
  opt.record_path = false;
  for (long t = begin; t < end; ++t) {
    auto rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const World world = World::single(cfg.n, sample_poi(rng, cfg.n));
    SearchTrace tr;
    try {
      tr = (s.id == AlgorithmId::kShell) ? shell_search(world).trace : run_single(s.placement, world, opt);
    } catch (const InvariantViolation&) {
      ++r.violations;
      continue;
    }
    const double P = static_cast<double>(tr.probes_issued), D = tr.distance, R = static_cast<double>(tr.responses);
    bool ok = tr.success;
    if (!std::isnan(s.p_limit)) ok = ok && P <= s.p_limit + 1e-9;
    if (!std::isnan(s.d_limit)) ok = ok && D <= s.d_limit;
    if (!std::isnan(s.r_limit)) ok = ok && R <= s.r_limit + 1e-9;
    if (!ok) ++r.violations;
    const double v[3] = {P / logn, D / cfg.n, R / logn};
    for (int m = 0; m < 3; ++m) r.acc[m].add(v[m], lo[m], width[m]);
  }
  return r;
}

unsigned worker_count(const ExperimentConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("MARCOPOLO_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace

MonteCarloResult monte_carlo(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  if (cfg.n < 2) throw std::invalid_argument("monte_carlo: n must be >= 2");
  if (cfg.histogram_bins < 1) throw std::invalid_argument("monte_carlo: histogram_bins must be >= 1");
  MonteCarloResult out;
  const unsigned workers = worker_count(cfg);
  const long chunks = (cfg.trials + kChunk - 1) / kChunk;
  for (const auto& name : cfg.algorithms) {
    const Subject s = make_subject(name, cfg);
    const double logn = ceil_log2(cfg.n);
    // Fixed histogram ranges so that chunk merges are order independent.
    const double p_hi = std::isnan(s.p_limit) ? 3.0 * logn : s.p_limit;
    const double d_hi = std::isnan(s.d_limit) ? 4.0 * cfg.n : s.d_limit;
    const double r_hi = std::isnan(s.r_limit) ? logn : s.r_limit;
    const double lo[3] = {0.0, 0.0, 0.0};
    const double width[3] = {p_hi / logn / cfg.histogram_bins, d_hi / cfg.n / cfg.histogram_bins,
                             std::max(r_hi, 1.0) / logn / cfg.histogram_bins};
    std::vector<ChunkResult> parts(chunks);
    auto work = [&](unsigned w) {
      for (long c = w; c < chunks; c += workers) {
        parts[c] = run_chunk(s, cfg, c * kChunk, std::min(cfg.trials, (c + 1) * kChunk), lo, width);
      }
    };
    if (workers <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    ChunkResult total;
    for (auto& a : total.acc) a.bins.assign(cfg.histogram_bins, 0);
    for (const auto& p : parts) {
      for (int m = 0; m < 3; ++m) total.acc[m].merge(p.acc[m]);
      total.violations += p.violations;
    }
    AlgorithmResult res;
    res.algorithm = name;
    res.violations = total.violations;
    res.probes_per_layer = s.placement.probes.size();
    const double bounds[3] = {s.p_bound, s.d_bound, s.r_bound};
    for (int m = 0; m < 3; ++m) {
      const Acc& a = total.acc[m];
      StatsRow row;
      row.algorithm = name;
      row.metric = static_cast<Metric>(m);
      row.count = a.count;
      row.min = a.min;
      row.avg = a.mean;
      row.max = a.max;
      row.stddev = a.count > 1 ? std::sqrt(a.m2 / (a.count - 1)) : 0.0;
      row.bound = bounds[m];
      res.rows.push_back(row);
      Histogram h;
      h.algorithm = name;
      h.metric = row.metric;
      h.lo = lo[m];
      h.width = width[m];
      h.counts = a.bins;
      h.mean = row.avg;
      h.stddev = row.stddev;
      res.histograms.push_back(std::move(h));
    }
    out.violations += res.violations;
    out.algorithms.push_back(std::move(res));
  }
  return out;
}

namespace {

const char* kMetricNames[3] = {"P", "D", "R"};
const char* kFields[5] = {"min", "avg", "max", "bound", "std"};
// Columns where a smaller value is better.
const char* kBestColumns[] = {"P_min", "P_avg", "P_max", "D_min", "D_avg", "D_max", "R_avg", "R_max"};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

double field(const StatsRow& r, int f) {
  switch (f) {
    case 0:
      return r.min;
    case 1:
      return r.avg;
    case 2:
      return r.max;
    case 3:
      return r.bound;
    default:
      return r.stddev;
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::map<std::string, std::vector<std::string>> best_by_column(const std::vector<StatsRow>& rows) {
  std::map<std::string, std::vector<std::string>> best;
  for (const char* col : kBestColumns) {
    const std::string c = col;
    const int m = c[0] == 'P' ? 0 : (c[0] == 'D' ? 1 : 2);
    const int f = c.substr(2) == "min" ? 0 : (c.substr(2) == "avg" ? 1 : 2);
    double v = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (static_cast<int>(r.metric) == m) v = std::min(v, field(r, f));
    }
    for (const auto& r : rows) {
      if (static_cast<int>(r.metric) == m && field(r, f) == v) best[c].push_back(r.algorithm);
    }
  }
  return best;
}

void write_table_csv(const std::filesystem::path& path, const std::vector<StatsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "algorithm,count";
  for (const char* m : kMetricNames) {
    for (const char* f : kFields) out << ',' << m << '_' << f;
  }
  out << ",best\n";
  const auto best = best_by_column(rows);
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) order.push_back(r.algorithm);
  }
  for (const auto& alg : order) {
    const StatsRow* per[3] = {nullptr, nullptr, nullptr};
    for (const auto& r : rows) {
      if (r.algorithm == alg) per[static_cast<int>(r.metric)] = &r;
    }
    out << alg << ',' << (per[0] ? per[0]->count : 0);
    for (int m = 0; m < 3; ++m) {
      for (int f = 0; f < 5; ++f) out << ',' << (per[m] ? fmt(field(*per[m], f)) : "");
    }
    std::string flags;
    for (const auto& [col, algs] : best) {
      if (std::find(algs.begin(), algs.end(), alg) != algs.end()) flags += (flags.empty() ? "" : ";") + col;
    }
    out << ',' << flags << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<StatsRow> read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<StatsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < 17) throw std::runtime_error("malformed table row: " + line);
    for (int m = 0; m < 3; ++m) {
      StatsRow r;
      r.algorithm = cells[0];
      r.count = std::stol(cells[1]);
      r.metric = static_cast<Metric>(m);
      auto num = [&](int f) {
        const std::string& c = cells[2 + 5 * m + f];
        return c.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(c);
      };
      r.min = num(0);
      r.avg = num(1);
      r.max = num(2);
      r.bound = num(3);
      r.stddev = num(4);
      rows.push_back(r);
    }
  }
  return rows;
}

void emit_report(const MonteCarloResult& result, const std::filesystem::path& dir) {
  if (result.algorithms.empty()) throw std::invalid_argument("emit_report: no rows");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_table_csv(dir / "table.csv", result.rows());
  for (const auto& a : result.algorithms) {
    for (const auto& h : a.histograms) {
      const auto path = dir / ("hist_" + a.algorithm + "_" + to_string(h.metric) + ".csv");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << "# mean=" << fmt(h.mean) << " stddev=" << fmt(h.stddev) << "\n";
      out << "bin_lo,bin_hi,count\n";
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out << fmt(h.lo + h.width * i) << ',' << fmt(h.lo + h.width * (i + 1)) << ',' << h.counts[i] << '\n';
      }
    }
  }
}

}  // namespace marcopolo
