#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "wpcn/analytic_comp.hpp"
#include "wpcn/analytic_ic.hpp"
#include "wpcn/mc_oracle.hpp"
#include "wpcn/sca_comp.hpp"
#include "wpcn/sca_ic.hpp"

namespace fs = std::filesystem;
using namespace wpcn;
using wpcn::cli::RunSettings;

namespace
{

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Row
{
  std::string param;
  double value = 0.0;
  std::string scenario;
  double rate = 0.0;
  std::string mode;
  double tau_E = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  double violation = 0.0;
};

struct Job
{
  std::function<Row()> run;
};

// Runs jobs on up to `jobs` threads; results keep the submission order.
std::vector<Row> run_jobs(const std::vector<Job>& list, int jobs)
{
  std::vector<Row> rows(list.size());
  std::vector<std::exception_ptr> errors(list.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < list.size();)
    {
      try
      {
        rows[i] = list[i].run();
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(list.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return rows;
}

sca::ScaOptions solver_options(const RunSettings& rs)
{
  sca::ScaOptions o;
  o.max_outer = rs.outer_max;
  o.outer_tol = rs.outer_tol;
  return o;
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Row row_ic(const sca::SolveReport& r, const char* label)
{
  Row row;
  row.scenario = label;
  row.rate = r.common_rate;
  row.mode = sca::to_string(r.init);
  row.tau_E = total(r.allocation.delta_E);
  row.iterations = r.outer_iterations;
  row.seconds = r.seconds;
  row.violation = r.feasibility.max_violation();
  return row;
}

Row row_comp(const sca::SolveReportCoMP& r, const char* label)
{
  Row row;
  row.scenario = label;
  row.rate = r.common_rate;
  row.mode = sca::to_string(r.init);
  row.tau_E = total(r.allocation.rho_E[0]) + total(r.allocation.rho_E[1]);
  row.iterations = r.outer_iterations;
  row.seconds = r.seconds;
  row.violation = r.feasibility.max_violation();
  return row;
}

Row row_bound_ic(const ScenarioConfig& cfg)
{
  const auto t0 = std::chrono::steady_clock::now();
  const analytic::HoverSolutionIC h = analytic::solve_infinite_ic(cfg);
  Row row;
  row.scenario = "ic_bound";
  row.rate = h.common_rate;
  row.mode = analytic::to_string(h.wit_mode);
  row.tau_E = h.tau_E;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

Row row_bound_comp(const ScenarioConfig& cfg)
{
  const auto t0 = std::chrono::steady_clock::now();
  const analytic::HoverSolutionCoMP h = analytic::solve_infinite_comp(cfg);
  Row row;
  row.scenario = "comp_bound";
  row.rate = h.common_rate;
  row.mode = "comp";
  row.tau_E = h.tau_E_total;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

void fail_if_infeasible(const Row& row)
{
  if (row.violation > 1e-6)
    throw SolverError(row.scenario + ": solution violates constraints by " + fmt(row.violation));
}

// Jobs for one scenario point. `which` selects the scenario labels.
void add_point_jobs(std::vector<Job>& jobs, const ScenarioConfig& cfg, const sca::ScaOptions& o,
                    const std::vector<std::string>& which, const std::string& param, double value)
{
  for (const std::string& s : which)
  {
    std::function<Row()> f;
    if (s == "ic")
      f = [=] { return row_ic(sca::solve_ic(cfg, o), "ic"); };
    else if (s == "comp")
      f = [=] { return row_comp(sca::solve_comp(cfg, o), "comp"); };
    else if (s == "ic_direct")
      f = [=] { return row_ic(sca::benchmark_direct_ic(cfg, o), "ic_direct"); };
    else if (s == "comp_direct")
      f = [=] { return row_comp(sca::benchmark_direct_comp(cfg, o), "comp_direct"); };
    else if (s == "ic_bound")
      f = [=] { return row_bound_ic(cfg); };
    else
      f = [=] { return row_bound_comp(cfg); };
    jobs.push_back({[f, param, value] {
      Row r = f();
      r.param = param;
      r.value = value;
      fail_if_infeasible(r);
      return r;
    }});
  }
}

void write_results(const fs::path& dir, const std::vector<Row>& rows)
{
  std::ofstream csv(dir / "results.csv");
  csv << "sweep_param,sweep_value,scenario,common_rate,mode,tau_E,iterations,feasibility_max\n";
  for (const Row& r : rows)
    csv << r.param << ',' << fmt(r.value) << ',' << r.scenario << ',' << fmt(r.rate) << ','
        << r.mode << ',' << fmt(r.tau_E) << ',' << r.iterations << ',' << fmt(r.violation)
        << '\n';
  // wall-clock times vary run to run, so they live outside results.csv
  std::ofstream t(dir / "timings.csv");
  t << "sweep_param,sweep_value,scenario,runtime_s\n";
  for (const Row& r : rows)
    t << r.param << ',' << fmt(r.value) << ',' << r.scenario << ',' << fmt(r.seconds) << '\n';
}

void dump_trajectory(const fs::path& file, const sca::SolveReport& r, const ScenarioConfig& cfg)
{
  std::ofstream f(file);
  f << "n,t,x1,y1,x2,y2,delta_E,delta_I,Q1,Q2\n";
  const int N = r.trajectory.num_slots();
  for (int n = 0; n <= N; ++n)
  {
    const auto q = r.trajectory.at(n);
    f << n << ',' << fmt(n * cfg.slot()) << ',' << fmt(q[0].x) << ',' << fmt(q[0].y) << ','
      << fmt(q[1].x) << ',' << fmt(q[1].y);
    if (n == 0)
      f << ",,,,\n";
    else
      f << ',' << fmt(r.allocation.delta_E[n - 1]) << ',' << fmt(r.allocation.delta_I[n - 1])
        << ',' << fmt(r.allocation.Q[0][n - 1]) << ',' << fmt(r.allocation.Q[1][n - 1]) << '\n';
  }
}

void dump_trajectory(const fs::path& file, const sca::SolveReportCoMP& r,
                     const ScenarioConfig& cfg)
{
  std::ofstream f(file);
  f << "n,t,x1,y1,x2,y2,rho_E1,rho_E2,rho_I,Q1,Q2\n";
  const int N = r.trajectory.num_slots();
  for (int n = 0; n <= N; ++n)
  {
    const auto q = r.trajectory.at(n);
    f << n << ',' << fmt(n * cfg.slot()) << ',' << fmt(q[0].x) << ',' << fmt(q[0].y) << ','
      << fmt(q[1].x) << ',' << fmt(q[1].y);
    if (n == 0)
      f << ",,,,,\n";
    else
      f << ',' << fmt(r.allocation.rho_E[0][n - 1]) << ',' << fmt(r.allocation.rho_E[1][n - 1])
        << ',' << fmt(r.allocation.rho_I[n - 1]) << ',' << fmt(r.allocation.Q[0][n - 1]) << ','
        << fmt(r.allocation.Q[1][n - 1]) << '\n';
  }
}

void write_trace(const fs::path& file, const std::vector<double>& trace)
{
  std::ofstream f(file);
  f << "iteration,common_rate\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    f << i << ',' << fmt(trace[i]) << '\n';
}

std::vector<double> default_range(double lo, double hi, double step)
{
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step)
    v.push_back(x);
  return v;
}

const std::vector<std::string> kAllScenarios{"ic",        "comp",     "ic_direct",
                                             "comp_direct", "ic_bound", "comp_bound"};

struct Outcome
{
  std::vector<std::string> files;
  nlohmann::json extra = nlohmann::json::object();
};

Outcome run_command(const std::string& cmd, const RunSettings& rs, const fs::path& out, int jobs,
                    std::uint64_t seed)
{
  const ScenarioConfig& cfg = rs.scenario;
  const sca::ScaOptions o = solver_options(rs);
  const double D = cfg.device_distance_D;
  const double T = cfg.mission_T;
  Outcome res;

  if (cmd == "solve-ic")
  {
    const sca::SolveReport r = sca::solve_ic(cfg, o);
    Row row = row_ic(r, "ic");
    row.param = "D";
    row.value = D;
    fail_if_infeasible(row);
    write_results(out, {row});
    dump_trajectory(out / "trajectory_ic.csv", r, cfg);
    write_trace(out / "trace_ic.csv", r.trace);
    res.files = {"results.csv", "timings.csv", "trajectory_ic.csv", "trace_ic.csv"};
    res.extra["converged"] = r.converged;
    return res;
  }
  if (cmd == "solve-comp")
  {
    const sca::SolveReportCoMP r = sca::solve_comp(cfg, o);
    Row row = row_comp(r, "comp");
    row.param = "D";
    row.value = D;
    fail_if_infeasible(row);
    write_results(out, {row});
    dump_trajectory(out / "trajectory_comp.csv", r, cfg);
    write_trace(out / "trace_comp.csv", r.trace);
    res.files = {"results.csv", "timings.csv", "trajectory_comp.csv", "trace_comp.csv"};
    res.extra["converged"] = r.converged;
    return res;
  }

  std::vector<Job> list;
  if (cmd == "infinite-ic")
    add_point_jobs(list, cfg, o, {"ic_bound"}, "D", D);
  else if (cmd == "infinite-comp")
    add_point_jobs(list, cfg, o, {"comp_bound"}, "D", D);
  else if (cmd == "benchmark-direct")
    add_point_jobs(list, cfg, o, {"ic", "comp", "ic_direct", "comp_direct"}, "D", D);
  else if (cmd == "sweep-D")
  {
    const auto values = rs.sweep_given ? rs.sweep_values : default_range(5.0, 30.0, 5.0);
    for (double v : values)
      add_point_jobs(list, rs.scenario_at(v, T), o, kAllScenarios, "D", v);
    res.extra["sweep_values"] = values;
  }
  else if (cmd == "sweep-T")
  {
    const auto values = rs.sweep_given ? rs.sweep_values : default_range(2.0, 20.0, 2.0);
    for (double v : values)
    {
      const ScenarioConfig c = rs.scenario_at(D, v);
      c.validate();
      add_point_jobs(list, c, o, kAllScenarios, "T", v);
    }
    res.extra["sweep_values"] = values;
  }
  else if (cmd == "verify-bound")
  {
    const auto checks = mc::check_zf_bound(cfg, rs.mc_geometries, rs.mc_samples, seed);
    std::ofstream csv(out / "bound_check.csv");
    csv << "geometry,D,x1,y1,x2,y2,device,Q,mc_mean,mc_se,bound,holds\n";
    int violations = 0;
    for (std::size_t i = 0; i < checks.size(); ++i)
    {
      const auto& c = checks[i];
      for (int k = 0; k < 2; ++k)
      {
        const bool ok = c.zf[k].mean <= c.bound[k] + 3.0 * c.zf[k].se;
        violations += !ok;
        csv << i << ',' << fmt(c.D) << ',' << fmt(c.uavs[0].x) << ',' << fmt(c.uavs[0].y) << ','
            << fmt(c.uavs[1].x) << ',' << fmt(c.uavs[1].y) << ',' << k + 1 << ',' << fmt(c.Q)
            << ',' << fmt(c.zf[k].mean) << ',' << fmt(c.zf[k].se) << ',' << fmt(c.bound[k])
            << ',' << (ok ? 1 : 0) << '\n';
      }
    }
    std::cerr << "verify-bound: " << violations << " of " << 2 * checks.size()
              << " device checks exceed bound + 3 SE\n";
    res.files = {"bound_check.csv"};
    res.extra["violations"] = violations;
    return res;
  }
  const std::vector<Row> rows = run_jobs(list, jobs);
  write_results(out, rows);
  res.files = {"results.csv", "timings.csv"};
  return res;
}

void write_manifest(const fs::path& out, const std::string& cmd, const cli::KeyValues& kv,
                    std::uint64_t seed, const Outcome& res)
{
  nlohmann::json m;
  m["schema_version"] = kSchemaVersion;
  m["tool"] = "wpcn-traj";
  m["tool_version"] = kToolVersion;
  m["command"] = cmd;
  m["seed"] = seed;
  m["config"] = cli::resolved_key_values(kv);
  m["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  m["files"] = res.files;
  m["details"] = res.extra;
  std::ofstream(out / "manifest.json") << m.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Trajectory and resource design for a two-UAV wireless powered network"};
  std::string cmd;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  int jobs = 1;
  std::uint64_t seed = 1;
  app.add_option("command", cmd, "Command to run")
      ->required()
      ->check(CLI::IsMember({"solve-ic", "solve-comp", "infinite-ic", "infinite-comp", "sweep-D",
                             "sweep-T", "verify-bound", "benchmark-direct"}));
  app.add_option("--config", config_path, "Flat key = value config file");
  app.add_option("--set", sets, "Override a config key (key=value), repeatable");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--jobs", jobs, "Parallel sweep points")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for Monte-Carlo sampling");
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cli::KeyValues kv;
  RunSettings rs;
  try
  {
    if (!config_path.empty())
      kv = cli::read_config_file(config_path);
    cli::apply_overrides(kv, sets);
    rs = cli::build_settings(kv);
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try
  {
    const fs::path out(out_dir);
    fs::create_directories(out);
    const Outcome res = run_command(cmd, rs, out, jobs, seed);
    write_manifest(out, cmd, kv, seed, res);
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  catch (const std::exception& e)
  {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
