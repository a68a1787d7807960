// semisort command line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "semisort/aggregate.hpp"
#include "semisort/apps/graph.hpp"
#include "semisort/apps/ngram.hpp"
#include "semisort/bench.hpp"
#include "semisort/datagen.hpp"
#include "semisort/oracle.hpp"
#include "semisort/parallel.hpp"
#include "semisort/record_io.hpp"
#include "semisort/semisort.hpp"

using namespace semisort;

namespace {

struct InputOptions {
  std::string in;
  std::string dist = "uniform";
  double param = 10;
  std::size_t n = 1000000;
  unsigned key_bits = 64;
  std::uint64_t seed = 1;
  bool no_values = false;

  void add(CLI::App* app) {
    app->add_option("--in", in, "binary record file (overrides generation)");
    app->add_option("--dist", dist, "uniform | exponential | zipfian");
    app->add_option("--param", param, "distribution parameter");
    app->add_option("--n", n, "record count");
    app->add_option("--key-bits", key_bits, "32, 64 or 128");
    app->add_option("--seed", seed, "generator seed");
    app->add_flag("--no-values", no_values, "records carry keys only");
  }

  DistributionSpec spec() const {
    DistributionSpec s;
    s.family = parse_family(dist);
    s.parameter = param;
    s.n = n;
    s.key_bits = key_bits;
    s.seed = seed;
    return s;
  }
};

struct TuningOptions {
  std::optional<std::size_t> light_buckets, subarray_length, base_case, max_heavy;
  std::optional<double> sample_factor;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--light-buckets", light_buckets, "n_L, a power of two");
    app->add_option("--subarray-length", subarray_length, "l");
    app->add_option("--base-case", base_case, "base case threshold");
    app->add_option("--max-heavy", max_heavy, "heavy key cap");
    app->add_option("--sample-factor", sample_factor, "samples per log2 n");
    app->add_option("--sample-seed", seed, "sampling seed");
  }

  TuningParams resolve() const {
    TuningParams t = bench::tuning_from_env();
    if (light_buckets) t.light_buckets = *light_buckets;
    if (subarray_length) t.subarray_length = *subarray_length;
    if (base_case) t.base_case_threshold = *base_case;
    if (max_heavy) t.max_heavy = *max_heavy;
    if (sample_factor) t.sample_factor = *sample_factor;
    if (seed) t.seed = *seed;
    return t;
  }
};

// Output goes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path, bool binary = false) {
    if (!path.empty()) {
      file_.open(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
      if (!file_) throw InputError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary | std::ios::in : std::ios::in);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

template <class F>
decltype(auto) with_records(const InputOptions& opt, F&& f) {
  if (!opt.in.empty()) {
    auto in = open_input(opt.in, true);
    const auto h = read_header(in);
    return bench::dispatch_record(h.key_bytes * 8, h.value_bytes > 0, [&](auto tag) {
      using Rec = typename decltype(tag)::type;
      std::vector<Rec> data;
      try {
        data = read_records<Rec>(in, h);
      } catch (const InputError& e) {
        throw InputError(opt.in + ": " + e.what());
      }
      return f(std::move(data));
    });
  }
  const auto spec = opt.spec();
  return bench::dispatch_record(spec.key_bits, !opt.no_values, [&](auto tag) {
    using Rec = typename decltype(tag)::type;
    return f(generate<Rec>(spec));
  });
}

template <class K>
std::string key_text(const K& k) {
  if constexpr (std::is_same_v<K, Key128>)
    return to_string(k);
  else
    return std::to_string(k);
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

int report_verification(bool ok, const std::string& what) {
  if (ok) return 0;
  std::cerr << "verification failed: " << what << '\n';
  return 2;
}

std::string violation_text(const oracle::ValidationReport& rep) {
  if (!rep.first_violation) return "unknown";
  return "index " + std::to_string(rep.first_violation->index) + ": " + rep.first_violation->description;
}

Mode parse_mode(const std::string& m) {
  if (m == "eq") return Mode::eq;
  if (m == "lt") return Mode::lt;
  throw ConfigError("mode must be eq or lt");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel semisort toolkit"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "worker count")->check(CLI::PositiveNumber);

  InputOptions input;
  TuningOptions tuning;
  std::string out;
  bool verify = false;

  auto* gen = app.add_subcommand("gen", "generate a binary record file");
  input.add(gen);
  gen->add_option("--out", out, "output file")->required();

  std::string mode = "eq";
  bool identity = false;
  auto* sort = app.add_subcommand("sort", "semisort records");
  input.add(sort);
  tuning.add(sort);
  sort->add_option("--mode", mode, "eq or lt");
  sort->add_flag("--identity", identity, "use the key itself as its hash");
  sort->add_option("--out", out, "write sorted records to this binary file");
  sort->add_flag("--verify", verify, "check the output against the oracle");

  auto* hist = app.add_subcommand("histogram", "key,count CSV");
  auto* reduce = app.add_subcommand("reduce", "key,sum-of-values CSV");
  for (auto* sub : {hist, reduce}) {
    input.add(sub);
    tuning.add(sub);
    sub->add_option("--out", out, "CSV output file");
    sub->add_flag("--verify", verify, "check against the sequential reference");
  }

  auto* transpose = app.add_subcommand("transpose", "transpose a graph");
  transpose->add_option("--in", input.in, "edge list, or CSR binary when named *.csr")->required();
  transpose->add_option("--out", out, "edge list, or CSR binary when named *.csr");
  transpose->add_flag("--verify", verify, "compare with a sequential transpose");
  tuning.add(transpose);

  std::size_t gram_size = 3;
  auto* ngram = app.add_subcommand("ngram", "n-gram next-word counts as CSV");
  ngram->add_option("--in", input.in, "text file")->required();
  ngram->add_option("--gram-size", gram_size, "words per n-gram");
  ngram->add_option("--out", out, "CSV output file");
  ngram->add_flag("--verify", verify, "validate the grouping");
  tuning.add(ngram);

  std::string algo = "eq";
  std::size_t reps = 4;
  auto* bench_cmd = app.add_subcommand("bench", "timed runs as one CSV row");
  input.add(bench_cmd);
  tuning.add(bench_cmd);
  bench_cmd->add_option("--algo", algo, "eq, lt, int-eq, int-lt, histogram, collect-reduce");
  bench_cmd->add_option("--reps", reps, "run count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", out, "CSV output file");
  bench_cmd->add_flag("--verify", verify, "validate the final output");

  std::string grid_file;
  auto* grid = app.add_subcommand("grid", "run a grid of dist,param,n,algo cells");
  grid->add_option("--grid", grid_file, "grid file")->required();
  grid->add_option("--reps", reps, "run count")->check(CLI::PositiveNumber);
  grid->add_option("--seed", input.seed, "generator seed");
  grid->add_option("--key-bits", input.key_bits, "32, 64 or 128");
  grid->add_option("--out", out, "CSV output file");
  grid->add_flag("--verify", verify, "validate every cell");
  tuning.add(grid);

  auto* stats = app.add_subcommand("stats", "distinct keys, max frequency, heavy share");
  input.add(stats);
  stats->add_option("--out", out, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    WorkerPool pool(threads);
    const TuningParams tp = tuning.resolve();

    if (*gen) {
      const auto spec = input.spec();
      validate(spec);
      bench::dispatch_record(spec.key_bits, !input.no_values, [&](auto tag) {
        using Rec = typename decltype(tag)::type;
        std::vector<Rec> data;
        pool.run([&] { data = generate<Rec>(spec); });
        Sink sink(out, true);
        write_records<Rec>(sink.stream(), data);
      });
      return 0;
    }

    if (*sort) {
      const Mode m = parse_mode(mode);
      return with_records(input, [&](auto data) {
        using Rec = typename decltype(data)::value_type;
        const IntegerKeyAdapter<Rec> adapter{.identity_mode = identity};
        const std::vector<Rec> original = verify ? data : std::vector<Rec>{};
        RunReport rep;
        pool.run([&] { rep = semisort::semisort(std::span<Rec>(data), adapter, m, tp); });
        if (!out.empty()) {
          Sink sink(out, true);
            write_records<Rec>(sink.stream(), data);
        }
        std::cout << "n,depth_max,scratch_allocations,base_cases,verified\n"
                  << data.size() << ',' << rep.max_depth << ',' << rep.scratch_allocations << ','
                  << rep.base_cases << ',';
        if (!verify) {
          std::cout << "na\n";
          return 0;
        }
        const auto v = oracle::validate_semisort(std::span<const Rec>(original), std::span<const Rec>(data), adapter);
        std::cout << (v.ok() ? "true" : "false") << '\n';
        return report_verification(v.ok(), violation_text(v));
      });
    }

    if (*hist || *reduce) {
      const bool is_hist = static_cast<bool>(*hist);
      return with_records(input, [&](auto data) {
        using Rec = typename decltype(data)::value_type;
        const IntegerKeyAdapter<Rec> adapter{};
        const auto spec = make_reduce_spec<std::uint64_t>(
            [is_hist](const Rec& r) { return is_hist ? std::uint64_t{1} : value_word(r); },
            [](std::uint64_t a, std::uint64_t b) { return a + b; }, std::uint64_t{0});
        const std::vector<Rec> original = verify ? data : std::vector<Rec>{};
        KeyedResult<typename Rec::key_type, std::uint64_t> result;
        pool.run([&] { result = collect_reduce(std::span<Rec>(data), adapter, spec, tp); });
        Sink sink(out);
        sink.stream() << "key," << (is_hist ? "count" : "sum") << '\n';
        for (const auto& [k, e] : result) sink.stream() << key_text(k) << ',' << e << '\n';
        if (!verify) return 0;
        const auto expected = oracle::oracle_collect_reduce(std::span<const Rec>(original), adapter, spec);
        return report_verification(oracle::multiset_equal(result, expected, adapter),
                                   "aggregate differs from the sequential reference");
      });
    }

    if (*transpose) {
      auto in = open_input(input.in, ends_with(input.in, ".csr"));
      apps::CsrGraph g;
      try {
        g = ends_with(input.in, ".csr") ? apps::read_csr_binary(in) : apps::read_edge_list(in);
      } catch (const InputError& e) {
        throw InputError(input.in + ": " + e.what());
      }
      apps::CsrGraph t;
      pool.run([&] { t = apps::transpose(g, Mode::eq, tp); });
      if (ends_with(out, ".csr")) {
        Sink sink(out, true);
        apps::write_csr_binary(sink.stream(), t);
      } else {
        Sink sink(out);
        apps::write_edge_list(sink.stream(), t);
      }
      if (!verify) return 0;
      const auto ref = apps::transpose_reference(g);
      return report_verification(t.offsets == ref.offsets && t.targets == ref.targets,
                                 "transpose differs from the sequential reference");
    }

    if (*ngram) {
      auto in = open_input(input.in);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto corpus = apps::build_ngrams(buf.str(), gram_size);
      auto records = corpus.records;
      const apps::NGramAdapter adapter{&corpus};
      pool.run([&] { semisort::semisort(std::span<apps::NGramRecord>(records), adapter, Mode::eq, tp); });

      Sink sink(out);
      sink.stream() << "prefix,next,count\n";
      for (std::size_t i = 0; i < records.size();) {
        std::size_t j = i;
        std::map<std::string_view, std::size_t> next;
        while (j < records.size() && corpus.key(records[j]) == corpus.key(records[i]))
          ++next[corpus.value(records[j++])];
        for (const auto& [w, c] : next) sink.stream() << corpus.key(records[i]) << ',' << w << ',' << c << '\n';
        i = j;
      }
      if (!verify) return 0;
      const auto v = oracle::validate_semisort(std::span<const apps::NGramRecord>(corpus.records),
                                               std::span<const apps::NGramRecord>(records), adapter);
      return report_verification(v.ok(), violation_text(v));
    }

    if (*bench_cmd) {
      bench::BenchConfig cfg;
      cfg.algo = bench::parse_algo(algo);
      if (!input.in.empty()) cfg.input_file = input.in;
      cfg.dist = input.spec();
      cfg.threads = threads;
      cfg.reps = reps;
      cfg.verify = verify;
      cfg.tuning = tp;
      const auto res = bench::run_bench(cfg);
      Sink sink(out);
      sink.stream() << bench::bench_csv_header() << '\n' << bench::to_csv(res.row) << '\n';
      if (res.row.verified && !*res.row.verified) return report_verification(false, res.first_violation);
      return 0;
    }

    if (*grid) {
      auto in = open_input(grid_file);
      const auto cells = bench::parse_grid(in);
      bench::GridOptions opts;
      opts.threads = threads;
      opts.reps = reps;
      opts.seed = input.seed;
      opts.key_bits = input.key_bits;
      opts.verify = verify;
      opts.tuning = tp;
      const std::string csv = bench::emit_grid(cells, opts);
      Sink sink(out);
      sink.stream() << csv;
      if (csv.find("verification failed") != std::string::npos)
        return report_verification(false, "see the error column");
      return 0;
    }

    if (*stats) {
      return with_records(input, [&](auto data) {
        using Rec = typename decltype(data)::value_type;
        const IntegerKeyAdapter<Rec> adapter{};
        const auto s = compute_stats(std::span<const Rec>(data), adapter);
        Sink sink(out);
        sink.stream() << "n,distinct_keys,max_frequency,heavy_freq_ratio\n"
                      << data.size() << ',' << s.distinct_keys << ',' << s.max_frequency << ','
                      << s.heavy_freq_ratio << '\n';
        return 0;
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
