#include "netmoment/spectral.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "netmoment/kernels.hpp"
#include "netmoment/quadrature.hpp"

namespace netmoment::spectral {

namespace {

constexpr double kPi = std::numbers::pi;

// Inlined adaptive Gauss-Legendre for the hot kernel_k path.
template <class F>
double adapt_gauss(const F& f, double a, double b) {
  using namespace quadrature;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGaussOrder; ++i)
    acc += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  return half * acc;
}

template <class F>
double adapt_rec(const F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = adapt_gauss(f, a, mid);
  const double right = adapt_gauss(f, mid, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adapt_rec(f, a, mid, left, 0.5 * tol, depth - 1) +
         adapt_rec(f, mid, b, right, 0.5 * tol, depth - 1);
}

template <class F>
double adapt(const F& f, double a, double b, double tol, int depth = 44) {
  if (a >= b) return 0.0;
  return adapt_rec(f, a, b, adapt_gauss(f, a, b), tol, depth);
}

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  return static_cast<int>(std::min(n, 16u));
}

}  // namespace

std::complex<double> basis_eval(int n, double x, double q) {
  const double theta = n * kPi * x / q;
  return std::complex<double>(std::cos(theta), std::sin(theta)) / std::sqrt(2.0 * q);
}

double eigenvalue_mu(int n, double q) {
  const double f = n * kPi / q;
  return f * f;
}

double kernel_I(double t1, double t2, double x, double h) {
  using kernels::dconj_poisson_dx;
  using kernels::dpoisson_dx;
  return dpoisson_dx(x - t1, h) * dpoisson_dx(x - t2, h) +
         dconj_poisson_dx(x - t1, h) * dconj_poisson_dx(x - t2, h);
}

double kernel_k(double t1, double t2, const Geometry& geom) {
  geom.validate();
  const double s = geom.s, h = geom.h;
  const double h2 = h * h;
  const auto integrand = [=](double x) {
    const double u1 = x - t1, u2 = x - t2;
    const double r1 = u1 * u1 + h2, r2 = u2 * u2 + h2;
    const double dp1 = -2.0 * u1 * h / (kPi * r1 * r1);
    const double dp2 = -2.0 * u2 * h / (kPi * r2 * r2);
    const double dq1 = (h2 - u1 * u1) / (kPi * r1 * r1);
    const double dq2 = (h2 - u2 * u2) / (kPi * r2 * r2);
    return dp1 * dp2 + dq1 * dq2;
  };
  // Split at the kernel centers when they fall inside S; the integrand varies
  // on the h scale there.
  double acc = 0.0;
  double pts[4] = {-s, t1, t2, s};
  if (pts[1] > pts[2]) std::swap(pts[1], pts[2]);
  double prev = -s;
  const double tol = 1e-10;
  for (int i = 1; i < 4; ++i) {
    const double next = std::min(std::max(pts[i], -s), s);
    if (next > prev) {
      acc += adapt(integrand, prev, next, tol / 3.0);
      prev = next;
    }
  }
  return acc;
}

int default_panels(const Geometry& geom, int N) {
  const int osc = static_cast<int>(std::ceil(0.63 * N));
  const int resolve = static_cast<int>(std::ceil(3.0 * geom.q / geom.h));
  return std::max({32, osc, resolve});
}

namespace {

// Weighted trigonometric sampling matrices: C(j, N+n) = cos(n pi t_j / q) w_j.
void build_trig_matrices(const std::vector<double>& nodes,
                         const std::vector<double>& weights, int N, double q,
                         Eigen::MatrixXd& C, Eigen::MatrixXd& S) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  C.resize(m, 2 * N + 1);
  S.resize(m, 2 * N + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int n = -N; n <= N; ++n) {
      const double theta = n * kPi * nodes[static_cast<size_t>(j)] / q;
      C(j, N + n) = std::cos(theta) * weights[static_cast<size_t>(j)];
      S(j, N + n) = std::sin(theta) * weights[static_cast<size_t>(j)];
    }
  }
}

Eigen::MatrixXcd assemble_once(const Geometry& geom, int N, int panels) {
  const auto rule = quadrature::panel_rule(-geom.q, geom.q, panels);
  const auto m = static_cast<Eigen::Index>(rule.nodes.size());

  // k(t1,t2) on the tensor node grid; symmetric, filled in parallel.
  Eigen::MatrixXd K(m, m);
  {
    std::atomic<Eigen::Index> next_row{0};
    auto worker = [&]() {
      for (;;) {
        const Eigen::Index i = next_row.fetch_add(1);
        if (i >= m) break;
        for (Eigen::Index j = i; j < m; ++j) {
          const double v = kernel_k(rule.nodes[static_cast<size_t>(i)],
                                    rule.nodes[static_cast<size_t>(j)], geom);
          K(i, j) = v;
          K(j, i) = v;
        }
      }
    };
    std::vector<std::thread> pool;
    const int nthreads = hardware_threads();
    pool.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Eigen::MatrixXd C, S;
  build_trig_matrices(rule.nodes, rule.weights, N, geom.q, C, S);

  // G = EW^H K EW / (2q) with EW = C + iS (weights folded in):
  //   Re G = C^T K C + S^T K S,  Im G = C^T K S - S^T K C.
  const Eigen::MatrixXd KC = K * C;
  const Eigen::MatrixXd KS = K * S;
  const Eigen::MatrixXd reG = (C.transpose() * KC + S.transpose() * KS) / (2.0 * geom.q);
  const Eigen::MatrixXd imG = (C.transpose() * KS - S.transpose() * KC) / (2.0 * geom.q);

  Eigen::MatrixXcd G(2 * N + 1, 2 * N + 1);
  G.real() = reG;
  G.imag() = imG;
  // Symmetrize away roundoff so the Hermitian invariant holds exactly.
  G = 0.5 * (G + Eigen::MatrixXcd(G.adjoint()));
  return G;
}

}  // namespace

std::complex<double> gram_entry_quadrature(const Geometry& geom, int n, int k,
                                           double abs_tol) {
  const double q = geom.q;
  // Inner Fourier integral over t1 for fixed t2, then outer over t2.
  const auto inner = [&](double t2, bool imag_part) {
    const auto f = [&](double t1) {
      const double theta = -n * kPi * t1 / q;
      const double kk = kernel_k(t1, t2, geom);
      return kk * (imag_part ? std::sin(theta) : std::cos(theta));
    };
    return adapt(f, -q, q, abs_tol / (8.0 * q));
  };
  const auto outer = [&](bool inner_imag, bool outer_imag) {
    const auto f = [&](double t2) {
      const double theta = k * kPi * t2 / q;
      return inner(t2, inner_imag) * (outer_imag ? std::sin(theta) : std::cos(theta));
    };
    return adapt(f, -q, q, abs_tol / 4.0);
  };
  // (re_in + i im_in) * (cos + i sin) accumulated over t2.
  const double rr = outer(false, false);
  const double ri = outer(false, true);
  const double ir = outer(true, false);
  const double ii = outer(true, true);
  return std::complex<double>(rr - ii, ri + ir) / (2.0 * q);
}

GramMatrix gram_assemble(const Geometry& geom, int N, Space space,
                         const AssemblyOptions& opts) {
  geom.validate();
  if (N < 1) throw std::invalid_argument("gram_assemble: N must be >= 1");

  int panels = opts.panels > 0 ? opts.panels : default_panels(geom, N);
  Eigen::MatrixXcd G = assemble_once(geom, N, panels);

  if (opts.self_check) {
    const int band = std::min(N, 32);
    std::mt19937 rng(opts.check_seed);
    std::uniform_int_distribution<int> pick(-band, band);
    std::vector<std::pair<int, int>> probes;
    probes.reserve(5);
    for (int i = 0; i < 5; ++i) probes.emplace_back(pick(rng), pick(rng));

    auto check = [&](const Eigen::MatrixXcd& M) {
      double worst = 0.0;
      for (auto [n, k] : probes) {
        const auto ref = gram_entry_quadrature(geom, n, k, 1e-10);
        const double rel = std::abs(M(N + n, N + k) - ref) / std::abs(ref);
        worst = std::max(worst, rel);
      }
      return worst;
    };

    double worst = check(G);
    if (worst > 1e-4) {
      panels *= 2;
      G = assemble_once(geom, N, panels);
      worst = check(G);
      if (worst > 1e-4) {
        throw assembly_error(
            "gram_assemble: self-consistency check failed after refinement "
            "(worst relative deviation " +
            std::to_string(worst) + " with " + std::to_string(panels) + " panels)");
      }
    }
  }

  GramMatrix out;
  out.geom = geom;
  out.N = N;
  out.panels = panels;
  out.space = space;
  out.entries = std::move(G);
  return out;
}

FourierVector rhs_vector(const Geometry& geom, int N, Target target, int panels) {
  geom.validate();
  if (N < 1) throw std::invalid_argument("rhs_vector: N must be >= 1");
  if (panels <= 0) panels = default_panels(geom, N);

  const auto rule = quadrature::panel_rule(-geom.q, geom.q, panels);
  const double s = geom.s, h = geom.h, q = geom.q;

  std::vector<double> f(rule.nodes.size());
  for (size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    // Integrals of the kernel derivatives over S: even P gives a difference,
    // odd Q gives a sum.
    f[j] = (target == Target::E1)
               ? kernels::poisson(s - t, h) - kernels::poisson(s + t, h)
               : kernels::conj_poisson(s - t, h) + kernels::conj_poisson(s + t, h);
  }

  FourierVector r(N);
  const double norm = 1.0 / std::sqrt(2.0 * q);
  for (int n = -N; n <= N; ++n) {
    double re = 0.0, im = 0.0;
    for (size_t j = 0; j < rule.nodes.size(); ++j) {
      const double theta = -n * kPi * rule.nodes[j] / q;
      const double wf = rule.weights[j] * f[j];
      re += wf * std::cos(theta);
      im += wf * std::sin(theta);
    }
    r.at(n) = std::complex<double>(re, im) * norm;
  }
  r.symmetrize();
  return r;
}

Eigen::VectorXd real_coords_from_fourier(const FourierVector& c) {
  const int N = c.N;
  Eigen::VectorXd x(2 * N + 1);
  x(0) = c.at(0).real();
  const double rt2 = std::sqrt(2.0);
  for (int n = 1; n <= N; ++n) {
    x(2 * n - 1) = rt2 * c.at(n).real();
    x(2 * n) = -rt2 * c.at(n).imag();
  }
  return x;
}

FourierVector fourier_from_real_coords(const Eigen::VectorXd& x, int N) {
  if (x.size() != 2 * N + 1)
    throw std::invalid_argument("fourier_from_real_coords: size mismatch");
  FourierVector c(N);
  c.at(0) = x(0);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  for (int n = 1; n <= N; ++n) {
    const std::complex<double> v(x(2 * n - 1) * inv_rt2, -x(2 * n) * inv_rt2);
    c.at(n) = v;
    c.at(-n) = std::conj(v);
  }
  return c;
}

RealSystem to_real_system(const GramMatrix& G, const FourierVector& r,
                          double hermitian_tol) {
  const int N = G.N;
  if (r.N != N) throw std::invalid_argument("to_real_system: order mismatch");
  const double gscale = G.entries.cwiseAbs().maxCoeff();
  if ((G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff() >
      hermitian_tol * std::max(1.0, gscale))
    throw std::invalid_argument("to_real_system: Gram matrix is not Hermitian");
  if (r.hermitian_defect() > hermitian_tol * std::max(1.0, r.l2_norm()))
    throw std::invalid_argument("to_real_system: rhs is not Hermitian-symmetric");

  // Basis-change matrix T with c = T x (columns a0, then a_n, b_n pairs).
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  const std::complex<double> i1(0.0, 1.0);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  T(N, 0) = 1.0;
  for (int n = 1; n <= N; ++n) {
    T(N + n, 2 * n - 1) = inv_rt2;
    T(N - n, 2 * n - 1) = inv_rt2;
    T(N + n, 2 * n) = -i1 * inv_rt2;
    T(N - n, 2 * n) = i1 * inv_rt2;
  }

  RealSystem sys;
  sys.N = N;
  Eigen::MatrixXcd Ac = T.adjoint() * G.entries * T;
  sys.A = Ac.real();
  sys.A = 0.5 * (sys.A + Eigen::MatrixXd(sys.A.transpose()));
  Eigen::VectorXcd rv(2 * N + 1);
  for (int i = 0; i < 2 * N + 1; ++i) rv(i) = r.coeffs[static_cast<size_t>(i)];
  sys.b = (T.adjoint() * rv).real();
  return sys;
}

std::string cache_directory(const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("NETMOMENT_CACHE_DIR"); env && *env) return env;
  return ".netmoment-cache";
}

std::string cache_file_path(const std::string& dir, const Geometry& geom, int N,
                            int panels) {
  char name[160];
  std::snprintf(name, sizeof(name), "gram_s%.17g_q%.17g_h%.17g_N%d_p%d.bin", geom.s,
                geom.q, geom.h, N, panels);
  return (std::filesystem::path(dir) / name).string();
}

namespace {
constexpr char kCacheMagic[8] = {'N', 'M', 'G', 'R', 'A', 'M', '0', '1'};
}

bool save_gram_cache(const GramMatrix& G, const std::string& dir) {
  const std::string dirpath = cache_directory(dir);
  std::error_code ec;
  std::filesystem::create_directories(dirpath, ec);
  if (ec) return false;
  const std::string path = cache_file_path(dirpath, G.geom, G.N, G.panels);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return false;
    out.write(kCacheMagic, sizeof(kCacheMagic));
    const double key[3] = {G.geom.s, G.geom.q, G.geom.h};
    const std::int64_t meta[2] = {G.N, G.panels};
    out.write(reinterpret_cast<const char*>(key), sizeof(key));
    out.write(reinterpret_cast<const char*>(meta), sizeof(meta));
    out.write(reinterpret_cast<const char*>(G.entries.data()),
              static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                           static_cast<size_t>(G.entries.size())));
    if (!out) return false;
  }
  std::filesystem::rename(tmp, path, ec);
  return !ec;
}

std::optional<GramMatrix> load_gram_cache(const Geometry& geom, int N, int panels,
                                          const std::string& dir) {
  const std::string path = cache_file_path(cache_directory(dir), geom, N, panels);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  double key[3];
  std::int64_t meta[2];
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(key), sizeof(key));
  in.read(reinterpret_cast<char*>(meta), sizeof(meta));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) return std::nullopt;
  if (key[0] != geom.s || key[1] != geom.q || key[2] != geom.h || meta[0] != N ||
      meta[1] != panels)
    return std::nullopt;
  GramMatrix G;
  G.geom = geom;
  G.N = N;
  G.panels = panels;
  G.entries.resize(2 * N + 1, 2 * N + 1);
  in.read(reinterpret_cast<char*>(G.entries.data()),
          static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                       static_cast<size_t>(G.entries.size())));
  if (!in) return std::nullopt;
  return G;
}

}  // namespace netmoment::spectral
