#include "quatla/qrbench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "quatla/factor.hpp"
#include "quatla/hessenberg.hpp"
#include "quatla/opcount.hpp"
#include "quatla/qcore.hpp"
#include "quatla/schur.hpp"

namespace quatla::bench {

namespace {

constexpr std::array<std::pair<Family, const char*>, 6> kFamilies{{
    {Family::Toeplitz51, "toeplitz5_1"},
    {Family::RandomDense, "random_dense"},
    {Family::RandomHessenberg, "random_hessenberg"},
    {Family::BrokenHessenberg, "broken_hessenberg"},
    {Family::Hermitian, "hermitian"},
    {Family::PureImaginary, "pure_imaginary"},
}};

constexpr std::array<std::pair<Task, const char*>, 4> kTasks{{
    {Task::Hess, "hess"},
    {Task::HessQR, "hessqr"},
    {Task::Schur, "schur"},
    {Task::Eig, "eig"},
}};

QuatMatrix uniform(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  QuatMatrix a(n, n);
  for (int k = 0; k < 4; ++k)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) a.block(k)(i, j) = dist(rng);
  return a;
}

// Real subdiagonal, zeros below it.
void impose_jrs_hessenberg(QuatMatrix& a) {
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) {
      for (int k = 1; k < 4; ++k) a.block(k)(i, j) = 0.0;
      if (i > j + 1) a.block(0)(i, j) = 0.0;
    }
}

// MATLAB toeplitz(c, r): column c, row r, c wins on the diagonal.
RealMatrix toeplitz(const std::vector<double>& c, const std::vector<double>& r) {
  const Index n = static_cast<Index>(c.size());
  RealMatrix t(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      t(i, j) = i >= j ? c[static_cast<std::size_t>(i - j)] : r[static_cast<std::size_t>(j - i)];
  return t;
}

QuatMatrix toeplitz51(Index n) {
  std::vector<double> c(static_cast<std::size_t>(n));
  c[0] = static_cast<double>(n);
  for (Index i = 1; i < n; ++i) c[static_cast<std::size_t>(i)] = static_cast<double>(i);
  const std::vector<double> r(c.rbegin(), c.rend());
  return QuatMatrix(toeplitz(c, r), toeplitz(r, r), toeplitz(c, c), toeplitz(r, c));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string to_string(Family f) {
  for (const auto& [k, s] : kFamilies)
    if (k == f) return s;
  return "unknown";
}

std::optional<Family> parse_family(const std::string& s) {
  for (const auto& [k, name] : kFamilies)
    if (s == name) return k;
  return std::nullopt;
}

std::string to_string(Task t) {
  for (const auto& [k, s] : kTasks)
    if (k == t) return s;
  return "unknown";
}

std::optional<Task> parse_task(const std::string& s) {
  for (const auto& [k, name] : kTasks)
    if (s == name) return k;
  if (s == "qr") return Task::HessQR;
  return std::nullopt;
}

const std::vector<std::string>& methods_for(Task t) {
  static const std::vector<std::string> hess{"h3", "h1", "h2"};
  static const std::vector<std::string> qr{"givens", "householder"};
  static const std::vector<std::string> schur{"francis"};
  static const std::vector<std::string> eig{"francis", "oracle"};
  switch (t) {
    case Task::Hess: return hess;
    case Task::HessQR: return qr;
    case Task::Schur: return schur;
    case Task::Eig: return eig;
  }
  return schur;
}

QuatMatrix matgen(const MatGenSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("matgen: n must be at least 2");
  const Index n = spec.n;
  std::mt19937_64 rng(spec.seed);
  switch (spec.family) {
    case Family::Toeplitz51:
      return toeplitz51(n);
    case Family::RandomDense:
      return uniform(n, rng);
    case Family::RandomHessenberg: {
      QuatMatrix a = uniform(n, rng);
      impose_jrs_hessenberg(a);
      return a;
    }
    case Family::BrokenHessenberg: {
      QuatMatrix a = uniform(n, rng);
      impose_jrs_hessenberg(a);
      const Index m = std::min<Index>(3, n);
      const QuatMatrix u = qr_full(uniform(m, rng)).W;
      QuatMatrix v = QuatMatrix::identity(n);
      for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < m; ++i) v.set(i, j, u(i, j));
      return mat_mul(mat_mul(adjoint(v), a), v);
    }
    case Family::Hermitian: {
      const QuatMatrix a = uniform(n, rng);
      return 0.5 * (a + adjoint(a));
    }
    case Family::PureImaginary: {
      QuatMatrix a = uniform(n, rng);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
          a.block(0)(i, j) = 0.0;
          for (int k = 1; k < 4; ++k) a.block(k)(i, j) = 0.5 * (a.block(k)(i, j) + 1.0);
        }
      return a;
    }
  }
  throw std::invalid_argument("matgen: unknown family");
}

void write_qmat(std::ostream& os, const QuatMatrix& a) {
  os << "QMAT 1 " << a.rows() << ' ' << a.cols() << '\n';
  char buf[40];
  for (int k = 0; k < 4; ++k) {
    if (k > 0) os << '\n';
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", a.block(k)(i, j));
        if (j > 0) os << ' ';
        os << buf;
      }
      os << '\n';
    }
  }
}

QuatMatrix read_qmat(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto next_nonblank = [&](std::string& out) {
    while (std::getline(is, out)) {
      ++lineno;
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_nonblank(line)) throw std::runtime_error("QMAT: empty input");
  std::istringstream hdr(line);
  std::string magic;
  int version = 0;
  long long rows = -1, cols = -1;
  if (!(hdr >> magic >> version >> rows >> cols) || magic != "QMAT" || version != 1 || rows < 0 ||
      cols < 0) {
    throw std::runtime_error("QMAT: malformed header at line " + std::to_string(lineno));
  }
  QuatMatrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  for (int k = 0; k < 4; ++k) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!next_nonblank(line)) {
        throw std::runtime_error("QMAT: missing block B" + std::to_string(k) + " row " +
                                 std::to_string(i) + " after line " + std::to_string(lineno));
      }
      std::istringstream row(line);
      for (Index j = 0; j < a.cols(); ++j) {
        std::string tok;
        if (!(row >> tok)) {
          throw std::runtime_error("QMAT: line " + std::to_string(lineno) + " (block B" +
                                   std::to_string(k) + ") has fewer than " +
                                   std::to_string(a.cols()) + " values");
        }
        try {
          std::size_t used = 0;
          a.block(k)(i, j) = std::stod(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw std::runtime_error("QMAT: bad number '" + tok + "' at line " +
                                   std::to_string(lineno));
        }
      }
      std::string extra;
      if (row >> extra) {
        throw std::runtime_error("QMAT: line " + std::to_string(lineno) + " has more than " +
                                 std::to_string(a.cols()) + " values");
      }
    }
  }
  if (next_nonblank(line)) {
    throw std::runtime_error("QMAT: trailing data at line " + std::to_string(lineno));
  }
  return a;
}

void io_write(const std::filesystem::path& path, const QuatMatrix& a) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_qmat(f, a);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

QuatMatrix io_read(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_qmat(f);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

double hessenberg_residual(const QuatMatrix& h) {
  const Index n = h.rows();
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Index below = k == 0 ? 2 : 1;
    double s = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = j + below; i < n; ++i) s += h.block(k)(i, j) * h.block(k)(i, j);
    acc += std::sqrt(s);
  }
  const double nh = fro_norm(h);
  return nh == 0.0 ? acc : acc / nh;
}

double factor_residual(const QuatMatrix& a, const QuatMatrix& w, const QuatMatrix& r) {
  const double na = fro_norm(a);
  const double e = fro_norm(a - mat_mul(w, r));
  return na == 0.0 ? e : e / na;
}

double similarity_residual(const QuatMatrix& q, const QuatMatrix& w, const QuatMatrix& t) {
  const double nq = fro_norm(q);
  const double e = fro_norm(q - mat_mul(mat_mul(w, t), adjoint(w)));
  return nq == 0.0 ? e : e / nq;
}

RunOutput run(const QuatMatrix& q, const RunOptions& opts) {
  if (!q.square()) throw std::invalid_argument("run: matrix must be square");
  const auto& allowed = methods_for(opts.task);
  const std::string method = opts.method.empty() ? allowed.front() : opts.method;
  if (std::find(allowed.begin(), allowed.end(), method) == allowed.end()) {
    throw std::invalid_argument("unknown method '" + method + "' for task " + to_string(opts.task));
  }
  RunOutput out;
  RunReport& rep = out.report;
  rep.task = opts.task;
  rep.method = method;
  rep.n = q.rows();

  double best = std::numeric_limits<double>::infinity();
  ops::Counts counts;
  const int reps = std::max(1, opts.repetitions);

  switch (opts.task) {
    case Task::Hess: {
      const HessMethod m = method == "h1" ? HessMethod::ViaH1
                           : method == "h2" ? HessMethod::ViaH2
                                            : HessMethod::ViaH3;
      HessenbergResult hr;
      for (int r = 0; r < reps; ++r) {
        ops::Scope sc;
        const auto t0 = std::chrono::steady_clock::now();
        hr = hess_reduce(q, m, true);
        best = std::min(best, seconds_since(t0));
        counts = sc.elapsed();
      }
      rep.residual = hessenberg_residual(hr.H);
      const StructureKind kind =
          m == HessMethod::ViaH1 ? StructureKind::UpperHessenberg : StructureKind::UpperJRSHessenberg;
      rep.structure_violation = check_structure(hr.H, kind, 0.0).violation;
      const double nq = fro_norm(q);
      const double be = fro_norm(mat_mul(q, *hr.W) - mat_mul(*hr.W, hr.H));
      rep.backward_error = nq == 0.0 ? be : be / nq;
      out.artifacts.push_back({"H", std::move(hr.H)});
      out.artifacts.push_back({"W", std::move(*hr.W)});
      break;
    }
    case Task::HessQR: {
      QRResult f;
      for (int r = 0; r < reps; ++r) {
        ops::Scope sc;
        const auto t0 = std::chrono::steady_clock::now();
        f = method == "givens" ? hess_qr(q) : qr_full(q);
        best = std::min(best, seconds_since(t0));
        counts = sc.elapsed();
      }
      rep.residual = factor_residual(q, f.W, f.R);
      rep.structure_violation = check_structure(f.R, StructureKind::UpperJRSTriangular, 0.0).violation;
      out.artifacts.push_back({"W", std::move(f.W)});
      out.artifacts.push_back({"R", std::move(f.R)});
      break;
    }
    case Task::Schur: {
      SchurOptions so;
      so.tol = opts.tol;
      so.max_sweeps = opts.max_sweeps;
      SchurResult s;
      for (int r = 0; r < reps; ++r) {
        ops::Scope sc;
        const auto t0 = std::chrono::steady_clock::now();
        s = quaternion_schur(q, so);
        best = std::min(best, seconds_since(t0));
        counts = sc.elapsed();
      }
      rep.converged = s.converged;
      rep.sweeps = s.iterations;
      rep.residual = similarity_residual(q, *s.W, s.T);
      rep.structure_violation = check_structure(s.T, StructureKind::JRSSchur, 0.0).violation;
      out.artifacts.push_back({"T", std::move(s.T)});
      out.artifacts.push_back({"W", std::move(*s.W)});
      break;
    }
    case Task::Eig: {
      SpectrumReport mine;
      if (method == "oracle") {
        for (int r = 0; r < reps; ++r) {
          ops::Scope sc;
          const auto t0 = std::chrono::steady_clock::now();
          mine = oracle_eigvals(q);
          best = std::min(best, seconds_since(t0));
          counts = sc.elapsed();
        }
        rep.converged = mine.converged;
      } else {
        SchurOptions so;
        so.tol = opts.tol;
        so.max_sweeps = opts.max_sweeps;
        so.accumulate = false;
        so.full_t = false;
        SchurResult s;
        for (int r = 0; r < reps; ++r) {
          ops::Scope sc;
          const auto t0 = std::chrono::steady_clock::now();
          s = quaternion_schur(q, so);
          if (s.converged) mine = eigs_from_schur(s);
          best = std::min(best, seconds_since(t0));
          counts = sc.elapsed();
        }
        rep.converged = s.converged;
        rep.sweeps = s.iterations;
        rep.structure_violation = check_structure(s.T, StructureKind::JRSSchur, 0.0).violation;
      }
      rep.residual = std::numeric_limits<double>::quiet_NaN();
      if (rep.converged && q.rows() <= kOracleMaxOrder) {
        const SpectrumReport other = method == "oracle" ? eigvals(q, opts.tol, opts.max_sweeps)
                                                        : oracle_eigvals(q);
        if (other.converged) rep.residual = spectrum_distance(mine, other);
      }
      rep.eigenvalues = mine.values;
      break;
    }
  }
  rep.wall_time_s = best;
  if (ops::enabled) rep.op_count = counts.flops();
  return out;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["task"] = to_string(r.task);
  j["method"] = r.method;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["family"] = r.family;
  j["wall_time_s"] = r.wall_time_s;
  j["residual"] = std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json(nullptr);
  j["structure_violation"] = r.structure_violation;
  j["op_count"] = r.op_count ? nlohmann::json(*r.op_count) : nlohmann::json(nullptr);
  j["converged"] = r.converged;
  j["sweeps"] = r.sweeps;
  if (r.backward_error) j["backward_error"] = *r.backward_error;
  if (r.task == Task::Eig) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : r.eigenvalues) ev.push_back({e.re, e.im});
    j["eigenvalues"] = std::move(ev);
  }
  return j;
}

const char* csv_header() {
  return "task,method,n,seed,wall_time_s,residual,structure_violation,op_count,converged,sweeps";
}

std::string csv_row(const RunReport& r) {
  std::string s = to_string(r.task);
  s += ',' + r.method;
  s += ',' + std::to_string(r.n);
  s += ',' + std::to_string(r.seed);
  s += ',' + fmt(r.wall_time_s);
  s += ',' + (std::isfinite(r.residual) ? fmt(r.residual) : std::string("nan"));
  s += ',' + fmt(r.structure_violation);
  s += ',' + (r.op_count ? std::to_string(*r.op_count) : std::string());
  s += r.converged ? ",true" : ",false";
  s += ',' + std::to_string(r.sweeps);
  return s;
}

std::vector<RunReport> run_bench(const BenchSpec& spec) {
  if (!std::is_sorted(spec.n_grid.begin(), spec.n_grid.end())) {
    throw std::invalid_argument("bench: n grid must be ascending");
  }
  std::vector<std::string> methods = spec.methods;
  if (methods.empty()) methods.push_back(methods_for(spec.task).front());
  std::vector<RunReport> out;
  for (const std::string& m : methods) {
    for (Index n : spec.n_grid) {
      const QuatMatrix q = matgen({spec.family, n, spec.seed});
      RunOptions o;
      o.task = spec.task;
      o.method = m;
      o.tol = spec.tol;
      o.max_sweeps = spec.max_sweeps;
      o.repetitions = n <= spec.repeat_below ? 3 : 1;
      RunReport r = run(q, o).report;
      r.seed = spec.seed;
      r.family = to_string(spec.family);
      out.push_back(std::move(r));
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& t) {
  if (n.size() != t.size() || n.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]), y = std::log(t[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace quatla::bench
