// Scenario-driven front end: print the library constants, run verification
// scenarios (exact or Monte Carlo) and emit machine-readable reports, build
// optimized tail-bound tables, and print the triangle-count demo quantities.
//
// Exit codes: 0 when no row fails, 1 when any exact row fails, 2 on parse or
// I/O errors.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "momineq/constants.hpp"
#include "momineq/report.hpp"
#include "momineq/scenario.hpp"
#include "momineq/verify.hpp"

namespace {

using namespace momineq;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int write_output(const Report& rep, const std::string& out_path, const std::string& format) {
  std::ostringstream body;
  if (format == "jsonl")
    emit_jsonl(rep, body);
  else
    emit_csv(rep, body);
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << body.str();
  }
  for (const auto& note : rep.notes) std::cerr << "note: " << note << "\n";
  return rep.exit_code();
}

int cmd_constants() {
  std::cout << "name,value,enclosure_low,enclosure_high,method\n";
  for (const auto& c : all_constants()) {
    std::cout << c.name << ',' << format_g17(c.value) << ',' << format_g17(c.enclosure_low)
              << ',' << format_g17(c.enclosure_high) << ','
              << (c.method == ConstantValue::Method::bisection ? "bisection" : "closed_form")
              << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& file, const std::string& mode, std::uint64_t seed,
               std::uint64_t samples, const std::string& out_path, const std::string& format) {
  Scenario sc;
  try {
    sc = parse_scenario(read_file(file));
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (mode == "exact") {
    for (auto& ck : sc.checks) ck.mc = false;
  } else if (mode == "mc") {
    for (auto& ck : sc.checks) {
      const TheoremInfo* info = find_theorem(ck.theorem);
      if (info && info->mc_supported) {
        ck.mc = true;
        ck.seed = seed;
        ck.samples = samples;
      } else {
        std::cerr << "note: " << ck.theorem << " supports exact mode only; left exact\n";
      }
    }
  }
  return write_output(execute(sc), out_path, format);
}

// Theorem ids whose right-hand side bounds ||(Z - EZ)_+||_q.
const std::set<std::string>& plus_side_ids() {
  static const std::set<std::string> ids = {
      "thm1_plus", "thm2_plus", "thm2_plus_tight", "thm3",        "cor1_plus",
      "cor3_plus", "thm7_pos",  "thm8_plus",       "thm9",        "thm10_plus",
      "thm12_first", "thm13_upper", "thm14",       "thm14_relaxed", "thm15",
      "tri_good"};
  return ids;
}

int cmd_tail(const std::string& file, const std::vector<double>& ts,
             const std::string& out_path) {
  Scenario sc;
  try {
    sc = parse_scenario(read_file(file));
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  Report rep = execute(sc);
  std::map<double, double> moments;  // q -> best upper bound on ||(Z-EZ)_+||_q
  for (const auto& r : rep.rows) {
    if (r.status != "pass" && r.status != "fail") continue;
    if (!plus_side_ids().count(r.theorem)) continue;
    auto it = moments.find(r.q);
    if (it == moments.end() || r.rhs < it->second) moments[r.q] = r.rhs;
  }
  if (moments.empty()) {
    std::cerr << "error: no upper-tail moment checks in " << file << "\n";
    return 2;
  }

  std::ostringstream body;
  body << "t,method,bound\n";
  for (double t : ts)
    body << format_g17(t) << ",markov_opt," << format_g17(tail_from_moments(t, moments)) << "\n";

  // chaos / boolean scenarios also get their dedicated exponential tails
  if (sc.functional.id == "chaos" || sc.functional.id == "boolean" ||
      sc.functional.id == "triangle") {
    Scenario tails = sc;
    tails.checks.clear();
    CheckSpec ck;
    ck.theorem = sc.functional.id == "chaos" ? "cor4_tail" : "thm15_tail";
    ck.t_grid = ts;
    tails.checks.push_back(ck);
    Report trep = execute(tails);
    for (const auto& r : trep.rows)
      if (r.status == "pass" || r.status == "fail" || r.status == "not_asserted")
        body << format_g17(r.q) << ',' << r.theorem << ',' << format_g17(r.rhs) << "\n";
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << body.str();
  }
  return rep.exit_code();
}

int cmd_demo_triangle(std::size_t n, double p, std::uint64_t seed, std::uint64_t samples) {
  TriangleScenario tri;
  try {
    tri = triangle_scenario(n, p);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "n_vertices=" << n << "\n";
  std::cout << "n_edges=" << tri.n_edges() << "\n";
  std::cout << "p=" << format_g17(p) << "\n";
  std::cout << "mean_triangles=" << format_g17(tri.mean_formula()) << "\n";
  std::cout << "em1_upper=" << format_g17(tri.em1_formula()) << "\n";
  for (double q : {2.0, 3.0, 4.0})
    std::cout << "m1_norm_bound_q" << q << "="
              << format_g17(triangle_m1_moment_bound(n, q, tri.em1_formula())) << "\n";
  for (double q : {2.0, 3.0})
    std::cout << "good_bound_q" << q << "="
              << format_g17(triangle_good_bound(n, p, q, tri.mean_formula())) << "\n";
  if (samples > 0) {
    auto space = tri.space();
    auto ez = mc_mean(space, tri.count_functional(), seed, samples);
    std::cout << "mc_mean_triangles=" << format_g17(ez.value) << "\n";
    std::cout << "mc_mean_triangles_ci=" << format_g17(ez.ci_halfwidth) << "\n";
    auto em1 = mc_mean(space, tri.m1_functional(), rng::derive_seed(seed, 31), samples);
    std::cout << "mc_mean_m1=" << format_g17(em1.value) << "\n";
    std::cout << "mc_mean_m1_ci=" << format_g17(em1.ci_halfwidth) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment and tail bound verification for functions of independent coordinates"};
  app.require_subcommand(1);

  auto* constants = app.add_subcommand("constants", "print the named constants");

  std::string verify_file, mode = "scenario", out_path, format = "csv";
  std::uint64_t seed = 1, samples = 10000;
  unsigned threads = 1;
  auto* verify = app.add_subcommand("verify", "run a scenario file");
  verify->add_option("file", verify_file, "scenario JSON file")->required();
  verify->add_option("--mode", mode, "scenario | exact | mc")
      ->check(CLI::IsMember({"scenario", "exact", "mc"}));
  verify->add_option("--seed", seed, "Monte Carlo seed (with --mode mc)");
  verify->add_option("--samples", samples, "Monte Carlo sample count (with --mode mc)");
  verify->add_option("--out", out_path, "output path (default stdout)");
  verify->add_option("--format", format, "csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  verify->add_option("--threads", threads, "worker threads for exact enumeration");

  std::string tail_file, tail_out;
  std::vector<double> tail_ts;
  auto* tail = app.add_subcommand("tail", "optimized tail bounds from a scenario's moments");
  tail->add_option("file", tail_file, "scenario JSON file")->required();
  tail->add_option("--t", tail_ts, "tail offsets")->required()->expected(-1);
  tail->add_option("--out", tail_out, "output path (default stdout)");
  tail->add_option("--threads", threads, "worker threads for exact enumeration");

  auto* demo = app.add_subcommand("demo", "built-in demos");
  std::size_t tri_n = 25;
  double tri_p = 0.2;
  std::uint64_t tri_seed = 1, tri_samples = 0;
  auto* demo_tri = demo->add_subcommand("triangle", "triangle-count quantities over G(n,p)");
  demo_tri->add_option("--n", tri_n, "vertex count")->required();
  demo_tri->add_option("--p", tri_p, "edge probability")->required();
  demo_tri->add_option("--seed", tri_seed, "Monte Carlo seed");
  demo_tri->add_option("--samples", tri_samples, "Monte Carlo samples (0 = formulas only)");

  CLI11_PARSE(app, argc, argv);
  momineq::set_thread_count(threads);

  try {
    if (constants->parsed()) return cmd_constants();
    if (verify->parsed()) return cmd_verify(verify_file, mode, seed, samples, out_path, format);
    if (tail->parsed()) return cmd_tail(tail_file, tail_ts, tail_out);
    if (demo->parsed() && demo_tri->parsed())
      return cmd_demo_triangle(tri_n, tri_p, tri_seed, tri_samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
