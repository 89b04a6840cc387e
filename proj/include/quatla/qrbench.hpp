#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quatla/matrix.hpp"
#include "quatla/spectra.hpp"

namespace quatla::bench {

enum class Family {
  Toeplitz51,
  RandomDense,
  RandomHessenberg,
  BrokenHessenberg,
  Hermitian,
  PureImaginary,
};

std::string to_string(Family f);
std::optional<Family> parse_family(const std::string& s);

struct MatGenSpec {
  Family family = Family::RandomDense;
  Index n = 0;
  std::uint64_t seed = 0;
};

// Deterministic for fixed (family, n, seed). Rejects n < 2.
QuatMatrix matgen(const MatGenSpec& spec);

// QMAT text format: header `QMAT 1 <rows> <cols>`, then blocks B0..B3 as rows
// of %.17g literals, blank line between blocks.
void write_qmat(std::ostream& os, const QuatMatrix& a);
QuatMatrix read_qmat(std::istream& is);
void io_write(const std::filesystem::path& path, const QuatMatrix& a);
QuatMatrix io_read(const std::filesystem::path& path);

enum class Task { Hess, HessQR, Schur, Eig };

std::string to_string(Task t);
std::optional<Task> parse_task(const std::string& s);

// Methods accepted per task; the first is the default.
const std::vector<std::string>& methods_for(Task t);

// (|tril(H0,-2)| + sum_s |tril(Hs,-1)|) / |H|.
double hessenberg_residual(const QuatMatrix& h);
// |A - W R| / |A|.
double factor_residual(const QuatMatrix& a, const QuatMatrix& w, const QuatMatrix& r);
// |Q - W T W*| / |Q|.
double similarity_residual(const QuatMatrix& q, const QuatMatrix& w, const QuatMatrix& t);

struct RunReport {
  Task task = Task::Hess;
  std::string method;
  Index n = 0;
  std::uint64_t seed = 0;
  std::string family;
  double wall_time_s = 0.0;
  double residual = 0.0;
  double structure_violation = 0.0;
  std::optional<std::uint64_t> op_count;
  bool converged = true;
  int sweeps = 0;
  std::optional<double> backward_error;  // hess: |Q W - W H| / |Q|
  std::vector<StdEigenvalue> eigenvalues;  // eig only
};

struct RunOptions {
  Task task = Task::Hess;
  std::string method;  // empty selects the task default
  double tol = 1e-14;
  int max_sweeps = 0;
  int repetitions = 1;  // wall time is the minimum over repetitions
};

struct Artifact {
  std::string name;
  QuatMatrix matrix;
};

struct RunOutput {
  RunReport report;
  std::vector<Artifact> artifacts;
};

// Rejects unknown methods and non-square input.
RunOutput run(const QuatMatrix& input, const RunOptions& opts);

nlohmann::json to_json(const RunReport& r);

const char* csv_header();
std::string csv_row(const RunReport& r);

struct BenchSpec {
  Task task = Task::Hess;
  std::vector<std::string> methods;
  std::vector<Index> n_grid;  // ascending
  Family family = Family::RandomDense;
  std::uint64_t seed = 0;
  double tol = 1e-14;
  int max_sweeps = 0;
  Index repeat_below = 256;  // n <= this: minimum of 3 timed runs
};

// One report per (method, n), methods outermost.
std::vector<RunReport> run_bench(const BenchSpec& spec);

// Least-squares slope of log(time) against log(n).
double loglog_slope(const std::vector<double>& n, const std::vector<double>& t);

}  // namespace quatla::bench
