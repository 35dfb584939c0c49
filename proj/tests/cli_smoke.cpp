// End-to-end smoke checks for the command line tool. Each check shells out to
// the binary passed as argv[1] and inspects exit codes and output files.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;
std::string g_binary;

void report(bool ok, const std::string& label) {
  std::cout << (ok ? "[smoke] ok      " : "[smoke] FAILED  ") << label << "\n";
  if (!ok) ++failures;
}

int run(const std::string& tail) {
  const std::string cmd = g_binary + " " + tail + " 2>>cli_scratch/stderr.log";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_smoke <path-to-cli-binary>\n";
    return 1;
  }
  g_binary = argv[1];
  fs::remove_all("cli_scratch");
  fs::create_directories("cli_scratch");

  report(run("--help > cli_scratch/help.txt") == 0, "--help exits 0");
  report(run("frobnicate") == 2, "unknown subcommand exits 2");
  report(run("test --type one-sample --delta 0.1") == 2, "missing required flag exits 2");

  const std::string qflags =
      "quantiles --nu-atoms 4 --reps 2000 --bm-steps 100 --seed 7 "
      "--cache-dir cli_scratch/cache";
  report(run(qflags + " > cli_scratch/q1.csv") == 0, "quantiles exits 0");
  report(run(qflags + " > cli_scratch/q2.csv") == 0, "quantiles rerun exits 0");
  const auto q1 = slurp("cli_scratch/q1.csv");
  report(q1.rfind("prob,quantile\n", 0) == 0, "quantiles output has the CSV header");
  report(!q1.empty() && q1 == slurp("cli_scratch/q2.csv"),
         "quantiles output reproduces exactly");

  const std::string sflags =
      "simulate --dgp iid_basis --n 6 --seed 11 --resolution 40 --dim 5 "
      "--mean-kind sin --mean-param 0.3";
  report(run(sflags + " --out cli_scratch/s1.csv") == 0, "simulate exits 0");
  report(run(sflags + " --out cli_scratch/s2.csv") == 0, "simulate rerun exits 0");
  const auto s1 = slurp("cli_scratch/s1.csv");
  report(!s1.empty() && s1 == slurp("cli_scratch/s2.csv"),
         "simulate output reproduces exactly");
  const auto sidecar = slurp("cli_scratch/s1.csv.json");
  report(contains(sidecar, "\"variant\"") && contains(sidecar, "mt19937_64"),
         "simulate sidecar records the generator spec");

  const std::string pivot =
      " --nu-atoms 4 --pivot-reps 2000 --pivot-steps 100 --cache-dir cli_scratch/cache";
  report(run("test --type one-sample --x cli_scratch/s1.csv --delta 0.05" + pivot +
             " --out cli_scratch/t1.json") == 0,
         "one-sample test exits 0");
  const auto t1 = slurp("cli_scratch/t1.json");
  report(contains(t1, "\"reject\"") && contains(t1, "\"statistic\"") &&
             contains(t1, "\"threshold\""),
         "test result JSON has the decision fields");
  report(run("test --type one-sample --x cli_scratch/missing.csv --delta 0.05" + pivot) == 3,
         "missing input exits 3");
  report(run("test --type one-sample --x cli_scratch/s1.csv --delta 0" + pivot) == 4,
         "non-positive margin exits 4");
  report(run("test --type two-sample --x cli_scratch/s1.csv --delta 0.05" + pivot) == 2,
         "two-sample without --y exits 2");

  {
    std::ofstream longcsv("cli_scratch/long.csv");
    longcsv << "curve_id,t,value\n";
    for (int j = 1; j <= 2; ++j)
      for (int g = 0; g < 3; ++g)
        longcsv << j << ',' << 0.5 * g << ',' << (j + g * 0.25) << '\n';
  }
  report(run("ingest --in cli_scratch/long.csv --mode pivot --out cli_scratch/wide.csv") == 0,
         "ingest pivot exits 0");
  report(slurp("cli_scratch/wide.csv").rfind("0,", 0) == 0,
         "pivoted CSV starts with the grid header");
  {
    std::ofstream scatter("cli_scratch/scatter.csv");
    scatter << "unit_id,position,value\n";
    for (int i = 0; i < 12; ++i) scatter << "u1," << i / 11.0 << ",1\n";
  }
  report(run("ingest --in cli_scratch/scatter.csv --mode project --basis-dim 3 "
             "--resolution 11 --out cli_scratch/proj.csv") == 0,
         "ingest project exits 0");
  report(!slurp("cli_scratch/proj.csv").empty(), "projection wrote a curve CSV");

  report(run("experiment --list > cli_scratch/list.txt") == 0, "experiment --list exits 0");
  report(contains(slurp("cli_scratch/list.txt"), "fig1_iid"), "listing names the scenarios");
  report(run("experiment --scenario fig1_iid --ci --reps 100 --n 20 --sweep 0.0 "
             "--alphas 0.05 --pivot-reps 2000 --pivot-steps 100 "
             "--cache-dir cli_scratch/cache --out cli_scratch/e.csv") == 0,
         "tiny experiment exits 0");
  report(slurp("cli_scratch/e.csv")
                 .rfind("scenario,param,method,alpha,n,m,rate,std_error,replications\n", 0) == 0,
         "experiment CSV has the documented header");
  report(!slurp("cli_scratch/e.csv.manifest.json").empty(), "experiment wrote a manifest");

  if (failures == 0) {
    std::cout << "[smoke] all checks passed\n";
    return 0;
  }
  std::cout << "[smoke] " << failures << " check(s) failed\n";
  return 1;
}
