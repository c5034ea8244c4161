// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "xminigrid/xminigrid.hpp"

namespace fs = std::filesystem;
using namespace xmg;

namespace {

struct EnvOverrides {
  int max_steps = -1;
  int view_size = -1;
  bool see_through_walls = false;

  void add(CLI::App* app) {
    app->add_option("--max-steps", max_steps, "Override the per-trial step limit");
    app->add_option("--view-size", view_size, "Override the observation width (odd)");
    app->add_flag("--see-through-walls", see_through_walls, "Disable occlusion in observations");
  }

  std::pair<Environment, EnvParams> make_env(const std::string& name) const {
    auto [env, p] = make(name);
    if (max_steps > 0) p.max_steps = max_steps;
    if (view_size > 0) p.view_size = view_size;
    if (see_through_walls) p.see_through_walls = true;
    return {env, p};
  }
};

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw InvalidConfig("cannot parse list item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

void print_histogram(std::ostream& os, const std::map<std::size_t, std::size_t>& stats, std::size_t total) {
  for (const auto& [rules, count] : stats)
    os << std::setw(4) << rules << " rules  " << std::setw(9) << count << "  " << std::fixed << std::setprecision(4)
       << static_cast<double>(count) / static_cast<double>(std::max<std::size_t>(total, 1)) << '\n';
}

Benchmark load_source(const std::string& path, const std::string& name) {
  if (!name.empty()) return *load_named(name);
  if (path.empty()) throw InvalidConfig("give --benchmark PATH or --name NAME");
  return load_benchmark(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xmg: grid-world meta-RL engine tools"};
  app.require_subcommand(1);

  // envs
  auto* envs = app.add_subcommand("envs", "List registered environments");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a benchmark of unique rulesets");
  std::string gen_config = "trivial", gen_name, gen_out;
  std::size_t gen_num = 1000;
  std::uint64_t gen_seed = 42;
  unsigned gen_workers = std::max(1u, std::thread::hardware_concurrency());
  bool gen_raw = false;
  gen->add_option("--config", gen_config, "trivial, small, medium or high")->capture_default_str();
  gen->add_option("--name", gen_name, "Registered benchmark to build into the data directory");
  gen->add_option("--num", gen_num, "Number of rulesets")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file");
  gen->add_option("--workers", gen_workers, "Generation threads")->capture_default_str();
  gen->add_flag("--no-compress", gen_raw, "Store the body uncompressed");

  // stats
  auto* stats = app.add_subcommand("stats", "Rule-count histogram of a benchmark");
  std::string stats_in, stats_csv;
  stats->add_option("--in", stats_in, "Benchmark file")->required();
  stats->add_option("--csv", stats_csv, "Write num_rules,count CSV here");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Print benchmark metadata, statistics and rulesets");
  std::string inspect_in;
  std::size_t inspect_show = 3;
  inspect->add_option("--in", inspect_in, "Benchmark file")->required();
  inspect->add_option("--show", inspect_show, "Rulesets to print")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Random-policy throughput");
  std::string bench_env = "XLand-MiniGrid-R1-9x9", bench_envs = "1,16,256,4096", bench_axis, bench_values,
              bench_csv;
  ThroughputOptions bench_opts;
  bench_opts.workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t bench_scaling_envs = 256;
  bench->add_option("--env", bench_env, "Environment for the num_envs axis")->capture_default_str();
  bench->add_option("--num-envs", bench_envs, "Comma-separated batch sizes")->capture_default_str();
  bench->add_option("--axis", bench_axis, "grid_size or num_rules instead of num_envs");
  bench->add_option("--values", bench_values, "Comma-separated axis values");
  bench->add_option("--scaling-envs", bench_scaling_envs, "Batch size for --axis runs")->capture_default_str();
  bench->add_option("--steps", bench_opts.num_steps, "Steps per environment")->capture_default_str();
  bench->add_option("--repeats", bench_opts.repeats, "Repeats; the fastest counts")->capture_default_str();
  bench->add_option("--workers", bench_opts.workers, "Threads")->capture_default_str();
  bench->add_option("--seed", bench_opts.seed, "Random seed")->capture_default_str();
  bench->add_option("--csv", bench_csv, "Write CSV here");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a scripted policy over benchmark tasks");
  std::string eval_path, eval_name, eval_env = "XLand-MiniGrid-R1-9x9", eval_policy = "random";
  int eval_trials = 25;
  std::size_t eval_tasks = 100;
  std::uint64_t eval_seed = 0;
  EnvOverrides eval_over;
  eval->add_option("--benchmark", eval_path, "Benchmark file");
  eval->add_option("--name", eval_name, "Registered benchmark name");
  eval->add_option("--env", eval_env, "Environment")->capture_default_str();
  eval->add_option("--policy", eval_policy, "random, noop or oracle")
      ->check(CLI::IsMember({"random", "noop", "oracle"}))
      ->capture_default_str();
  eval->add_option("--trials", eval_trials, "Trials per task")->capture_default_str();
  eval->add_option("--tasks", eval_tasks, "Tasks sampled from the benchmark")->capture_default_str();
  eval->add_option("--seed", eval_seed, "Random seed")->capture_default_str();
  eval_over.add(eval);

  // validate
  auto* validate = app.add_subcommand("validate", "BFS-solve sampled tasks and replay the plans");
  std::string val_path, val_name, val_env = "XLand-MiniGrid-R1-9x9";
  std::size_t val_sample = 200, val_budget = kDefaultNodeBudget;
  std::uint64_t val_seed = 0;
  unsigned val_workers = std::max(1u, std::thread::hardware_concurrency());
  EnvOverrides val_over;
  validate->add_option("--benchmark", val_path, "Benchmark file");
  validate->add_option("--name", val_name, "Registered benchmark name");
  validate->add_option("--env", val_env, "Environment")->capture_default_str();
  validate->add_option("--sample", val_sample, "Tasks to solve")->capture_default_str();
  validate->add_option("--budget", val_budget, "Node budget per task")->capture_default_str();
  validate->add_option("--seed", val_seed, "Random seed")->capture_default_str();
  validate->add_option("--workers", val_workers, "Threads")->capture_default_str();
  val_over.add(validate);

  // render
  auto* render = app.add_subcommand("render", "Write images of a random-policy rollout");
  std::string render_env = "XLand-MiniGrid-R1-9x9", render_steps = "0", render_out = ".", render_bench;
  std::uint64_t render_seed = 0;
  std::size_t render_task = 0;
  int render_px = 32;
  bool render_png = false;
  EnvOverrides render_over;
  render->add_option("--env", render_env, "Environment")->capture_default_str();
  render->add_option("--seed", render_seed, "Random seed")->capture_default_str();
  render->add_option("--steps", render_steps, "Comma-separated step indices to capture")->capture_default_str();
  render->add_option("--out", render_out, "Output directory")->capture_default_str();
  render->add_option("--tile-px", render_px, "Pixels per cell")->capture_default_str();
  render->add_option("--benchmark", render_bench, "Take the ruleset from this benchmark");
  render->add_option("--task", render_task, "Task index within --benchmark")->capture_default_str();
  render->add_flag("--png", render_png, "Write PNG instead of PPM");
  render_over.add(render);

  // trace
  auto* trace = app.add_subcommand("trace", "JSON-lines trace of a random-policy rollout");
  std::string trace_env = "XLand-MiniGrid-R1-9x9", trace_out, trace_bench;
  std::uint64_t trace_seed = 0;
  std::int64_t trace_steps = 1000;
  std::size_t trace_task = 0;
  EnvOverrides trace_over;
  trace->add_option("--env", trace_env, "Environment")->capture_default_str();
  trace->add_option("--seed", trace_seed, "Random seed")->capture_default_str();
  trace->add_option("--steps", trace_steps, "Steps")->capture_default_str();
  trace->add_option("--benchmark", trace_bench, "Take the ruleset from this benchmark");
  trace->add_option("--task", trace_task, "Task index within --benchmark")->capture_default_str();
  trace->add_option("--out", trace_out, "Output file (stdout if omitted)");
  trace_over.add(trace);

  CLI11_PARSE(app, argc, argv);

  try {
    if (envs->parsed()) {
      for (const auto& name : registered_environments()) std::cout << name << '\n';
    } else if (gen->parsed()) {
      BenchmarkConfig cfg = BenchmarkConfig::named(gen_config);
      std::size_t n = gen_num;
      fs::path out = gen_out;
      if (!gen_name.empty()) {
        const auto& reg = registered_benchmarks();
        const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.name == gen_name; });
        if (it == reg.end()) throw UnknownBenchmark(gen_name);
        cfg = BenchmarkConfig::named(it->config);
        if (gen->count("--num") == 0) n = it->num_rulesets;
        if (out.empty()) out = named_benchmark_path(gen_name);
      }
      if (out.empty()) throw InvalidConfig("give --out PATH or --name NAME");
      cfg.random_seed = gen_seed;
      GenerateOptions opts;
      opts.workers = gen_workers;
      opts.progress = [](std::size_t done, std::size_t target) {
        std::cerr << "\r" << done << " / " << target << std::flush;
      };
      Benchmark b = Benchmark::from_rulesets(generate_benchmark(cfg, n, opts), cfg);
      std::cerr << '\n';
      b.name = gen_name.empty() ? cfg.name : gen_name;
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      save_benchmark(out, b, !gen_raw);
      std::cout << "wrote " << b.num_rulesets() << " rulesets to " << out.string() << " (" << fs::file_size(out)
                << " bytes)\n";
    } else if (stats->parsed()) {
      const Benchmark b = load_benchmark(stats_in);
      std::vector<Ruleset> all;
      for (std::size_t i = 0; i < b.num_rulesets(); ++i) all.push_back(b.get_ruleset(i));
      const auto h = ruleset_stats(all);
      print_histogram(std::cout, h, all.size());
      if (!stats_csv.empty()) {
        auto f = open_out(stats_csv);
        write_stats_csv(f, h);
      }
    } else if (inspect->parsed()) {
      const Benchmark b = load_benchmark(inspect_in);
      std::cout << "name: " << b.name << "\nversion: " << b.version << "\nseed: " << b.seed
                << "\nrulesets: " << b.num_rulesets() << "\nmax_rules: " << b.max_rules()
                << "\nmax_objects: " << b.max_objects() << "\nfile bytes: " << fs::file_size(inspect_in) << '\n';
      std::vector<Ruleset> all;
      for (std::size_t i = 0; i < b.num_rulesets(); ++i) all.push_back(b.get_ruleset(i));
      print_histogram(std::cout, ruleset_stats(all), all.size());
      for (std::size_t i = 0; i < std::min(inspect_show, b.num_rulesets()); ++i)
        std::cout << "--- task " << i << '\n' << describe(b.get_ruleset(i));
    } else if (bench->parsed()) {
      std::vector<ThroughputRow> rows;
      if (bench_axis.empty()) {
        rows = bench_throughput(bench_env, parse_list<std::size_t>(bench_envs), bench_opts);
      } else {
        ScalingAxis axis;
        std::string defaults;
        if (bench_axis == "grid_size") {
          axis = ScalingAxis::GridSize;
          defaults = "9,13,17,25";
        } else if (bench_axis == "num_rules") {
          axis = ScalingAxis::NumRules;
          defaults = "1,3,6,12,24";
        } else {
          throw InvalidConfig("--axis must be grid_size or num_rules");
        }
        rows = bench_scaling(axis, parse_list<int>(bench_values.empty() ? defaults : bench_values),
                             bench_scaling_envs, bench_opts);
      }
      write_throughput_csv(std::cout, rows);
      if (!bench_csv.empty()) {
        auto f = open_out(bench_csv);
        write_throughput_csv(f, rows);
      }
    } else if (eval->parsed()) {
      auto [env, p] = eval_over.make_env(eval_env);
      Benchmark tasks = load_source(eval_path, eval_name);
      tasks = tasks.shuffle(Rng::from_seed(eval_seed).fold_in(0));
      std::vector<std::size_t> ids;
      for (std::size_t i = 0; i < std::min(eval_tasks, tasks.num_rulesets()); ++i) ids.push_back(i);
      tasks = tasks.select(ids);
      const Rng key = Rng::from_seed(eval_seed).fold_in(1);
      EvalResult res;
      if (eval_policy == "noop") {
        res = evaluate(env, p, tasks, [](std::size_t) { return NoopPolicy{}; }, key, eval_trials);
      } else if (eval_policy == "oracle") {
        res = evaluate(env, p, tasks, [&](std::size_t) { return OraclePolicy(env, p); }, key, eval_trials);
      } else {
        res = evaluate(
            env, p, tasks, [&](std::size_t i) { return RandomPolicy(key.fold_in(2).child(i)); }, key, eval_trials);
      }
      std::cout << "tasks: " << res.task_returns.size() << "\ntrials per task: " << eval_trials
                << "\nmean return: " << res.mean << "\np20 return: " << res.p20 << '\n';
    } else if (validate->parsed()) {
      auto [env, p] = val_over.make_env(val_env);
      const Benchmark tasks = load_source(val_path, val_name);
      const ValidationReport rep =
          validate_solvability(env, p, tasks, val_sample, Rng::from_seed(val_seed), val_budget, val_workers);
      std::cout << "tasks: " << rep.tasks << "\nsolved: " << rep.solved << "\nunsolvable: " << rep.unsolvable
                << "\nbudget exceeded: " << rep.budget_exceeded << "\nreplay failures: " << rep.replay_failures
                << "\nfraction solved: " << rep.fraction() << '\n';
      if (!rep.plan_lengths.empty()) {
        std::vector<double> lens(rep.plan_lengths.begin(), rep.plan_lengths.end());
        std::cout << "plan length median: " << percentile(lens, 50) << "  max: " << percentile(lens, 100) << '\n';
      }
      if (!rep.warning.empty()) std::cout << "warning: " << rep.warning << '\n';
      return rep.replay_failures == 0 ? 0 : 2;
    } else if (render->parsed()) {
      auto [env, p] = render_over.make_env(render_env);
      if (!render_bench.empty()) p.ruleset = load_benchmark(render_bench).get_ruleset(render_task);
      auto wanted = parse_list<std::int64_t>(render_steps);
      std::sort(wanted.begin(), wanted.end());
      fs::create_directories(render_out);
      const Rng key = Rng::from_seed(render_seed);
      RandomPolicy policy(key.fold_in(1));
      TimeStep t = env.reset(p, key);
      const std::string ext = render_png ? ".png" : ".ppm";
      std::int64_t step = 0;
      for (std::int64_t target : wanted) {
        for (; step < target; ++step) {
          t = env.auto_reset(p, t);
          env.advance(p, t, policy(t));
        }
        const std::string stem = (fs::path(render_out) / ("step_" + std::to_string(target))).string();
        write_image(stem + "_state" + ext, render_rgb(t.state, render_px));
        write_image(stem + "_obs" + ext, image_observation(t.observation));
        std::ofstream(stem + ".txt") << render_ascii(t.state) << describe(t.state.ruleset);
        std::cout << stem << "_state" << ext << '\n';
      }
    } else if (trace->parsed()) {
      auto [env, p] = trace_over.make_env(trace_env);
      if (!trace_bench.empty()) p.ruleset = load_benchmark(trace_bench).get_ruleset(trace_task);
      std::ofstream file;
      if (!trace_out.empty()) file = open_out(trace_out);
      std::ostream& os = trace_out.empty() ? std::cout : file;
      const Rng key = Rng::from_seed(trace_seed);
      RandomPolicy policy(key.fold_in(1));
      TimeStep t = env.reset(p, key);
      for (std::int64_t i = 0; i <= trace_steps; ++i) {
        Action a = Action::MoveForward;
        nlohmann::json j;
        j["t"] = i;
        j["step_type"] = static_cast<int>(t.step_type);
        j["reward"] = t.reward;
        j["discount"] = t.discount;
        j["obs"] = t.observation.data;
        j["state_hash"] = hash_state(t.state);
        if (i < trace_steps) {
          a = policy(t);
          j["action"] = static_cast<int>(a);
        }
        os << j.dump() << '\n';
        if (i == trace_steps) break;
        t = env.auto_reset(p, t);
        env.advance(p, t, a);
      }
    }
  } catch (const xmg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
