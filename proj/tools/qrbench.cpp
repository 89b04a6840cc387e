// qrbench: generate test matrices, run decompositions, report residuals.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quatla/qrbench.hpp"

namespace fs = std::filesystem;
using namespace quatla;
using namespace quatla::bench;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;

struct Args {
  std::string family = "random_dense";
  std::vector<Index> n;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  double tol = 1e-14;
  int max_sweeps = 0;
  std::string in;
  std::string out;
  std::string csv;
  std::string task = "hess";
};

std::uint64_t resolve_seed(const Args& a) {
  if (a.seed) return *a.seed;
  if (const char* env = std::getenv("QRBENCH_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("QRBENCH_SEED", std::string("not an integer: ") + env);
    }
  }
  return 0;
}

Family resolve_family(const Args& a) {
  const auto f = parse_family(a.family);
  if (!f) throw CLI::ValidationError("--family", "unknown family '" + a.family + "'");
  return *f;
}

Index single_n(const Args& a) {
  if (a.n.size() != 1) throw CLI::ValidationError("--n", "expects exactly one order");
  return a.n.front();
}

// Input from --in, else generated from --family/--n/--seed.
QuatMatrix load_input(const Args& a, RunReport& rep) {
  if (!a.in.empty()) {
    rep.family = "file";
    return io_read(a.in);
  }
  rep.family = a.family;
  rep.seed = resolve_seed(a);
  return matgen({resolve_family(a), single_n(a), rep.seed});
}

int do_gen(const Args& a) {
  const QuatMatrix q = matgen({resolve_family(a), single_n(a), resolve_seed(a)});
  if (a.out.empty()) write_qmat(std::cout, q);
  else io_write(a.out, q);
  return kOk;
}

int do_run(Task task, const Args& a) {
  RunReport meta;
  const QuatMatrix q = load_input(a, meta);
  RunOptions o;
  o.task = task;
  if (a.methods.size() > 1) throw CLI::ValidationError("--method", "expects one method");
  if (!a.methods.empty()) o.method = a.methods.front();
  o.tol = a.tol;
  o.max_sweeps = a.max_sweeps;
  RunOutput res = run(q, o);
  res.report.seed = meta.seed;
  res.report.family = meta.family;
  const std::string json = to_json(res.report).dump(2);
  if (a.out.empty()) {
    std::cout << json << '\n';
  } else {
    const fs::path path(a.out);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << json << '\n';
    for (const Artifact& art : res.artifacts) {
      fs::path p = path;
      p.replace_filename(path.stem().string() + "_" + art.name + ".qmat");
      io_write(p, art.matrix);
    }
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw std::runtime_error("cannot open " + a.csv + " for writing");
    f << csv_header() << '\n' << csv_row(res.report) << '\n';
  }
  return res.report.converged ? kOk : kNotConverged;
}

int do_bench(const Args& a) {
  const auto task = parse_task(a.task);
  if (!task) throw CLI::ValidationError("--task", "unknown task '" + a.task + "'");
  BenchSpec spec;
  spec.task = *task;
  spec.methods = a.methods;
  spec.n_grid = a.n;
  if (spec.n_grid.empty()) spec.n_grid = {64, 128, 256, 512};
  spec.family = resolve_family(a);
  spec.seed = resolve_seed(a);
  spec.tol = a.tol;
  spec.max_sweeps = a.max_sweeps;
  std::ofstream file;
  if (!a.csv.empty()) {
    file.open(a.csv);
    if (!file) throw std::runtime_error("cannot open " + a.csv + " for writing");
  }
  std::ostream& os = a.csv.empty() ? std::cout : file;
  os << csv_header() << '\n';
  bool all_converged = true;
  for (const RunReport& r : run_bench(spec)) {
    os << csv_row(r) << '\n' << std::flush;
    all_converged = all_converged && r.converged;
  }
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion Hessenberg, QR and Schur experiments"};
  app.require_subcommand(1);
  Args a;

  auto add_source = [&](CLI::App* c) {
    c->add_option("--family", a.family, "Matrix family")
        ->check(CLI::IsMember({"toeplitz5_1", "random_dense", "random_hessenberg",
                               "broken_hessenberg", "hermitian", "pure_imaginary"}));
    c->add_option("--n", a.n, "Matrix order")->delimiter(',');
    c->add_option("--seed", a.seed, "RNG seed (default: $QRBENCH_SEED, else 0)");
  };
  auto add_solver = [&](CLI::App* c) {
    c->add_option("--method", a.methods, "Method")->delimiter(',');
    c->add_option("--tol", a.tol, "Deflation tolerance")->check(CLI::PositiveNumber);
    c->add_option("--max-sweeps", a.max_sweeps, "Francis step budget (0: 30 n)")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* gen = app.add_subcommand("gen", "Write a generated matrix as QMAT");
  add_source(gen);
  gen->add_option("--out", a.out, "Output QMAT path (default: stdout)");

  struct Verb {
    const char* name;
    const char* help;
    Task task;
  };
  const Verb verbs[] = {
      {"hess", "Hessenberg reduction (methods h3, h1, h2)", Task::Hess},
      {"qr", "QR factorization (methods givens, householder)", Task::HessQR},
      {"schur", "Quaternion Schur decomposition", Task::Schur},
      {"eig", "Standard eigenvalues (methods francis, oracle)", Task::Eig},
  };
  std::vector<std::pair<CLI::App*, Task>> run_cmds;
  for (const Verb& v : verbs) {
    CLI::App* c = app.add_subcommand(v.name, v.help);
    add_source(c);
    add_solver(c);
    c->add_option("--in", a.in, "Input QMAT file")->check(CLI::ExistingFile);
    c->add_option("--out", a.out, "JSON report path; factors go to <stem>_<name>.qmat");
    c->add_option("--csv", a.csv, "Also write a one-row CSV");
    run_cmds.emplace_back(c, v.task);
  }

  CLI::App* bench = app.add_subcommand("bench", "Time a task over a grid of orders");
  add_source(bench);
  add_solver(bench);
  bench->add_option("--task", a.task, "hess, qr, schur or eig");
  bench->add_option("--csv", a.csv, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return do_gen(a);
    if (*bench) return do_bench(a);
    for (const auto& [cmd, task] : run_cmds)
      if (*cmd) return do_run(task, a);
  } catch (const std::exception& e) {
    std::cerr << "qrbench: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
