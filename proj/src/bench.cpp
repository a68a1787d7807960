#include "semisort/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "semisort/aggregate.hpp"
#include "semisort/oracle.hpp"
#include "semisort/parallel.hpp"
#include "semisort/record_io.hpp"
#include "semisort/semisort.hpp"

namespace semisort::bench {

std::string to_string(Algo a) {
  switch (a) {
    case Algo::eq: return "eq";
    case Algo::lt: return "lt";
    case Algo::int_eq: return "int-eq";
    case Algo::int_lt: return "int-lt";
    case Algo::histogram: return "histogram";
    case Algo::collect_reduce: return "collect-reduce";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  if (name == "eq") return Algo::eq;
  if (name == "lt") return Algo::lt;
  if (name == "int-eq") return Algo::int_eq;
  if (name == "int-lt") return Algo::int_lt;
  if (name == "histogram") return Algo::histogram;
  if (name == "collect-reduce" || name == "reduce") return Algo::collect_reduce;
  throw ConfigError("unknown algorithm '" + name + "'");
}

double median_of_runs(std::span<const double> seconds) {
  if (seconds.empty()) return 0.0;
  std::vector<double> tail(seconds.size() > 1 ? seconds.begin() + 1 : seconds.begin(), seconds.end());
  std::sort(tail.begin(), tail.end());
  const std::size_t mid = tail.size() / 2;
  return tail.size() % 2 ? tail[mid] : (tail[mid - 1] + tail[mid]) / 2.0;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  if (s.empty()) return T{};
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InputError(std::string("bench csv: bad ") + what + " '" + s + "'");
  return v;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' ) c = ';';
    else if (c == '\n' || c == '\r') c = ' ';
  return s;
}

template <class Rec>
std::uint64_t value_word(const Rec& r) {
  using V = typename Rec::value_type;
  if constexpr (std::is_same_v<V, NoValue>)
    return 1;
  else if constexpr (std::is_same_v<V, Key128>)
    return r.value.lo;
  else
    return r.value;
}

template <class Rec>
auto sum_spec() {
  return make_reduce_spec<std::uint64_t>([](const Rec& r) { return value_word(r); },
                                         [](std::uint64_t a, std::uint64_t b) { return a + b; },
                                         std::uint64_t{0});
}

template <class Rec>
auto count_spec() {
  return make_reduce_spec<std::uint64_t>([](const Rec&) { return std::uint64_t{1}; },
                                         [](std::uint64_t a, std::uint64_t b) { return a + b; },
                                         std::uint64_t{0});
}

template <class Rec>
BenchResult run_typed(const BenchConfig& cfg, const std::vector<Rec>& base, std::string dist, double param) {
  using Clock = std::chrono::steady_clock;
  const bool identity = cfg.algo == Algo::int_eq || cfg.algo == Algo::int_lt;
  const IntegerKeyAdapter<Rec> adapter{.identity_mode = identity};
  const Mode mode = (cfg.algo == Algo::lt || cfg.algo == Algo::int_lt) ? Mode::lt : Mode::eq;

  BenchResult result;
  WorkerPool pool(cfg.threads);
  std::vector<Rec> work;
  RunReport report;
  KeyedResult<typename Rec::key_type, std::uint64_t> reduced;

  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    work = base;
    const auto t0 = Clock::now();
    pool.run([&] {
      switch (cfg.algo) {
        case Algo::histogram:
          reduced = histogram(std::span<Rec>(work), adapter, cfg.tuning, &report);
          break;
        case Algo::collect_reduce:
          reduced = collect_reduce(std::span<Rec>(work), adapter, sum_spec<Rec>(), cfg.tuning, &report);
          break;
        default:
          report = semisort(std::span<Rec>(work), adapter, mode, cfg.tuning);
      }
    });
    result.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }

  if (cfg.verify) {
    bool ok = false;
    if (cfg.algo == Algo::histogram || cfg.algo == Algo::collect_reduce) {
      const auto expected = cfg.algo == Algo::histogram
                                ? oracle::oracle_collect_reduce(std::span<const Rec>(base), adapter, count_spec<Rec>())
                                : oracle::oracle_collect_reduce(std::span<const Rec>(base), adapter, sum_spec<Rec>());
      ok = oracle::multiset_equal(reduced, expected, adapter);
      if (!ok) result.first_violation = "aggregate differs from the sequential reference";
    } else {
      const auto rep = oracle::validate_semisort(std::span<const Rec>(base), std::span<const Rec>(work), adapter);
      ok = rep.ok();
      if (!ok && rep.first_violation)
        result.first_violation =
            "index " + std::to_string(rep.first_violation->index) + ": " + rep.first_violation->description;
    }
    result.row.verified = ok;
  }

  result.row.algo = to_string(cfg.algo);
  result.row.dist = std::move(dist);
  result.row.param = param;
  result.row.n = base.size();
  result.row.key_bits = key_bits<typename Rec::key_type>();
  result.row.threads = cfg.threads;
  result.row.seed = cfg.dist.seed;
  result.row.median_seconds = median_of_runs(result.seconds);
  result.row.depth_max = report.max_depth;
  return result;
}

}  // namespace

std::string bench_csv_header() {
  return "algo,dist,param,n,key_bits,threads,seed,median_seconds,depth_max,verified";
}

std::string to_csv(const BenchRow& r) {
  std::ostringstream os;
  os << r.algo << ',' << r.dist << ',' << format_double(r.param) << ',' << r.n << ',' << r.key_bits << ','
     << r.threads << ',' << r.seed << ',' << format_double(r.median_seconds) << ',' << r.depth_max << ','
     << (r.verified ? (*r.verified ? "true" : "false") : "na");
  return os.str();
}

std::vector<BenchRow> parse_bench_csv(std::string_view text) {
  std::vector<BenchRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind(bench_csv_header(), 0) != 0)
    throw InputError("bench csv: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() < 10) throw InputError("bench csv: expected 10 fields in '" + line + "'");
    BenchRow r;
    r.algo = f[0];
    r.dist = f[1];
    r.param = parse_number<double>(f[2], "param");
    r.n = parse_number<std::size_t>(f[3], "n");
    r.key_bits = parse_number<unsigned>(f[4], "key_bits");
    r.threads = parse_number<std::size_t>(f[5], "threads");
    r.seed = parse_number<std::uint64_t>(f[6], "seed");
    r.median_seconds = parse_number<double>(f[7], "median_seconds");
    r.depth_max = parse_number<unsigned>(f[8], "depth_max");
    if (f[9] == "true")
      r.verified = true;
    else if (f[9] == "false")
      r.verified = false;
    else if (f[9] != "na" && !f[9].empty())
      throw InputError("bench csv: bad verified '" + f[9] + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.input_file) {
    std::ifstream in(*cfg.input_file, std::ios::binary);
    if (!in) throw InputError("cannot open '" + *cfg.input_file + "'");
    const auto h = read_header(in);
    return dispatch_record(h.key_bytes * 8, h.value_bytes > 0, [&](auto tag) {
      using Rec = typename decltype(tag)::type;
      try {
        return run_typed<Rec>(cfg, read_records<Rec>(in, h), "file", 0.0);
      } catch (const InputError& e) {
        throw InputError(*cfg.input_file + ": " + e.what());
      }
    });
  }
  return dispatch_record(cfg.dist.key_bits, true, [&](auto tag) {
    using Rec = typename decltype(tag)::type;
    return run_typed<Rec>(cfg, generate<Rec>(cfg.dist), to_string(cfg.dist.family), cfg.dist.parameter);
  });
}

std::vector<GridCell> parse_grid(std::istream& in) {
  std::vector<GridCell> cells;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    auto f = split_fields(line);
    f.resize(4);
    for (auto& s : f) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    cells.push_back({f[0], f[1], f[2], f[3]});
  }
  return cells;
}

std::string emit_grid(std::span<const GridCell> cells, const GridOptions& opts) {
  struct Outcome {
    std::optional<BenchRow> row;
    std::string error;
  };
  std::vector<Outcome> outcomes;
  for (const auto& cell : cells) {
    Outcome o;
    try {
      BenchConfig cfg;
      cfg.algo = parse_algo(cell.algo);
      cfg.dist.family = parse_family(cell.dist);
      std::size_t used = 0;
      cfg.dist.parameter = std::stod(cell.param, &used);
      if (used != cell.param.size()) throw ConfigError("bad param '" + cell.param + "'");
      cfg.dist.n = std::stoull(cell.n, &used);
      if (used != cell.n.size()) throw ConfigError("bad n '" + cell.n + "'");
      cfg.dist.key_bits = opts.key_bits;
      cfg.dist.seed = opts.seed;
      cfg.threads = opts.threads;
      cfg.reps = opts.reps;
      cfg.verify = opts.verify;
      cfg.tuning = opts.tuning;
      auto res = run_bench(cfg);
      if (res.row.verified && !*res.row.verified) o.error = "verification failed: " + res.first_violation;
      o.row = std::move(res.row);
    } catch (const std::exception& e) {
      o.row.reset();
      o.error = e.what();
    }
    outcomes.push_back(std::move(o));
  }

  std::map<std::tuple<std::string, double, std::size_t>, double> fastest;
  for (const auto& o : outcomes) {
    if (!o.row || !o.error.empty()) continue;
    const auto key = std::make_tuple(o.row->dist, o.row->param, o.row->n);
    auto [it, fresh] = fastest.emplace(key, o.row->median_seconds);
    if (!fresh) it->second = std::min(it->second, o.row->median_seconds);
  }

  std::ostringstream os;
  os << bench_csv_header() << ",normalized,error\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.row) {
      os << to_csv(*o.row) << ',';
      if (o.error.empty()) {
        const double best = fastest.at(std::make_tuple(o.row->dist, o.row->param, o.row->n));
        os << format_double(best > 0 ? o.row->median_seconds / best : 1.0);
      }
    } else {
      const auto& c = cells[i];
      os << sanitize(c.algo) << ',' << sanitize(c.dist) << ',' << sanitize(c.param) << ',' << sanitize(c.n)
         << ",,,,,,na,";
    }
    os << ',' << sanitize(o.error) << '\n';
  }
  return os.str();
}

TuningParams tuning_from_env(TuningParams base) {
  auto read = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  auto as_size = [](const char* name, const std::string& v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw ConfigError(std::string(name) + ": expected an unsigned integer, got '" + v + "'");
    return out;
  };
  if (auto v = read("SEMISORT_LIGHT_BUCKETS")) base.light_buckets = as_size("SEMISORT_LIGHT_BUCKETS", *v);
  if (auto v = read("SEMISORT_SUBARRAY_LENGTH")) base.subarray_length = as_size("SEMISORT_SUBARRAY_LENGTH", *v);
  if (auto v = read("SEMISORT_BASE_CASE")) base.base_case_threshold = as_size("SEMISORT_BASE_CASE", *v);
  if (auto v = read("SEMISORT_MAX_HEAVY")) base.max_heavy = as_size("SEMISORT_MAX_HEAVY", *v);
  if (auto v = read("SEMISORT_SEED")) base.seed = as_size("SEMISORT_SEED", *v);
  if (auto v = read("SEMISORT_SAMPLE_FACTOR")) {
    double f = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), f);
    if (ec != std::errc{} || ptr != v->data() + v->size())
      throw ConfigError("SEMISORT_SAMPLE_FACTOR: expected a number, got '" + *v + "'");
    base.sample_factor = f;
  }
  return base;
}

}  // namespace semisort::bench
