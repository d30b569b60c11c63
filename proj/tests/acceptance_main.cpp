// Acceptance suite: one criterion per run block, each printed as a single
// PASS/FAIL line with its runtime. Exercises both the library and the
// command-line binary (path in CHIRALWALK_BIN).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiralwalk/eigenstate.hpp"
#include "chiralwalk/model_io.hpp"
#include "chiralwalk/oracle.hpp"
#include "chiralwalk/verify.hpp"

using namespace chiralwalk;
namespace fs = std::filesystem;
using njson = nlohmann::json;

namespace {

struct Checker {
  bool ok = true;
  std::string first_failure;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
  void require_le(double value, double bound, const std::string& what) {
    require(value <= bound, what + " (" + format_double(value) + " > " +
                                format_double(bound) + ")");
  }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string g_binary;

RunResult run_cli(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult result;
  if (!pipe) return result;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "chiralwalk_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string write_model(const std::string& name, const std::string& body) {
  const fs::path path = sandbox() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const char* kWallJson = R"({
  "kind": "splitstep",
  "p": {"left_period": [-0.5], "right_period": [0.5]},
  "a": {"left_period": [0.0], "right_period": [0.0]}
})";

SplitStepModel wall_model() {
  return SplitStepModel(ScalarSequence({-0.5}, {0.5}, 0, {}),
                        ScalarSequence::constant(0.0));
}

ScalarSequence random_tail2(std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> l{dist(rng), dist(rng)};
  std::vector<double> r{dist(rng), dist(rng)};
  return ScalarSequence(std::move(l), std::move(r));
}

// ---------------------------------------------------------------------------

void criterion_1(Checker& c) {
  // Domain-wall index +1 by all three routes, exact integer agreement.
  const auto wall = write_model("wall.json", kWallJson);
  const RunResult res = run_cli("index " + wall);
  c.require(res.exit_code == 0, "cmd_index exit code");
  if (!c.ok) return;
  const njson report = njson::parse(res.out, nullptr, false);
  c.require(!report.is_discarded(), "cmd_index JSON parse");
  if (!c.ok) return;
  c.require(report["results"]["ind_plus"] == 1, "ind_plus == 1");
  c.require(report["results"]["ind_minus"] == 1, "ind_minus == 1");

  const SplitStepModel model = wall_model();
  const SignedIndexReport idx = index_pm(model);
  for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus}) {
    const auto& data = idx.data(sign);
    c.require(data.fredholm, "closed-form route Fredholm");
    if (!data.fredholm) return;
    c.require(*data.index == 1, "closed-form index +1");
    c.require(data.winding_index.has_value() && *data.winding_index == 1,
              "winding route index +1");
    // Third route: the convergent-series branch rule.
    const auto branch = series_branch(model, sign);
    const int series_index = !branch ? 0 : (*branch == 1 ? 1 : -1);
    c.require(series_index == 1, "series branch route index +1");
  }
}

void criterion_2(Checker& c) {
  // Protected eigenstate: residual, exact per-site decay ratio, sandwich.
  const auto wall = write_model("wall.json", kWallJson);
  const RunResult res =
      run_cli("eigenstate " + wall + " --sign plus --window 128");
  c.require(res.exit_code == 0, "cmd_eigenstate exit code");
  if (!c.ok) return;
  const njson report = njson::parse(res.out);
  c.require_le(report["results"]["residual"].get<double>(), 1e-8,
               "interior residual");
  c.require_le(
      static_cast<double>(report["results"]["certificate"]["onset"].get<int>()),
      4.0, "sandwich onset x_pm");

  const SplitStepModel model = wall_model();
  for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus}) {
    const EigenstateBundle bundle = build_eigenstate(model, sign, -128, 128);
    c.require_le(bundle.residual, 1e-8, "library residual");
    const double log_third = std::log(1.0 / 3.0);
    for (std::int64_t x = 0; x < 127; ++x) {
      const double ratio = bundle.log_spinor_norm_sq(x + 1) -
                           bundle.log_spinor_norm_sq(x);
      c.require(std::abs(ratio - log_third) < 1e-10,
                "per-site decay ratio on the right tail");
    }
    for (std::int64_t x = -127; x < 0; ++x) {
      const double ratio = bundle.log_spinor_norm_sq(x) -
                           bundle.log_spinor_norm_sq(x + 1);
      c.require(std::abs(ratio - log_third) < 1e-10,
                "per-site decay ratio on the left tail");
    }
    const DecayCertificate cert = decay_certificate(bundle, model);
    c.require(cert.onset <= 4, "library onset <= 4");
  }
}

void criterion_3(Checker& c) {
  // 50 random period-(2,2) models: arcs vs cloud vs ring oracle vs closed
  // forms, all within their stated tolerances.
  std::mt19937_64 rng(33001);
  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    const SplitStepModel model(random_tail2(rng, 0.95),
                               random_tail2(rng, 0.95));
    const EssentialSpectrumU spec = essential_spectrum_U(model, 4096);
    c.require_le(spec.combined.resolution, 1e-6, "reported resolution");

    // Ring oracle: each eigenvalue of the side-pure evolution operator on
    // 32 cells lies on a computed arc.
    for (Side side : {Side::Left, Side::Right}) {
      const auto& pt = side == Side::Left ? model.p.left_tail()
                                          : model.p.right_tail();
      const auto& at = side == Side::Left ? model.a.left_tail()
                                          : model.a.right_tail();
      const SplitStepModel pure{ScalarSequence(pt, pt), ScalarSequence(at, at)};
      const auto ring =
          oracle::circulant_spectrum(evolution_operator(pure), side, 32);
      for (const Complex& lambda : ring)
        c.require_le(distance_to_arcs(lambda, spec.combined.arcs), 1e-8,
                     "ring eigenvalue on arcs");

      // Closed-form endpoints against the sampled per-side band set.
      const SpectralBands closed = closed_bands(model, side);
      const SpectralBands& sampled =
          side == Side::Left ? spec.left : spec.right;
      c.require(closed.intervals.size() == sampled.intervals.size(),
                "band count agreement");
      if (closed.intervals.size() == sampled.intervals.size()) {
        for (size_t i = 0; i < closed.intervals.size(); ++i) {
          c.require_le(
              std::abs(closed.intervals[i].lo - sampled.intervals[i].lo),
              spec.combined.resolution, "closed vs sampled lower endpoint");
          c.require_le(
              std::abs(closed.intervals[i].hi - sampled.intervals[i].hi),
              spec.combined.resolution, "closed vs sampled upper endpoint");
        }
      }
    }

    // Symbol cloud of U against the arcs.
    const SpectralCloud cloud =
        essential_spectrum_cloud(evolution_operator(model), 128);
    for (const auto& point : cloud.points)
      c.require_le(distance_to_arcs(point.value, spec.combined.arcs), 1e-8,
                   "cloud point on arcs");
  }
}

void criterion_4(Checker& c) {
  // Degenerate two-phase model: bands are exactly the two points
  // +-sqrt(2)/2.
  const SplitStepModel model(ScalarSequence({1.0, 0.0}, {1.0, 0.0}),
                             ScalarSequence::constant(0.0));
  const double target = std::sqrt(2.0) / 2.0;
  for (Side side : {Side::Left, Side::Right}) {
    const SpectralBands closed = closed_bands(model, side);
    c.require(closed.intervals.size() == 2, "two singleton bands");
    c.require(closed.singleton.has_value() && *closed.singleton,
              "singleton flag");
    if (closed.intervals.size() == 2) {
      c.require_le(std::abs(closed.intervals[0].lo + target), 1e-12,
                   "lower point at -sqrt(2)/2");
      c.require_le(std::abs(closed.intervals[0].hi + target), 1e-12,
                   "lower point width");
      c.require_le(std::abs(closed.intervals[1].lo - target), 1e-12,
                   "upper point at +sqrt(2)/2");
      c.require_le(std::abs(closed.intervals[1].hi - target), 1e-12,
                   "upper point width");
    }
  }
  const EssentialSpectrumU spec = essential_spectrum_U(model, 1024);
  c.require(spec.combined.intervals.size() == 2, "sampled band count");
  for (const auto& iv : spec.combined.intervals)
    c.require_le(std::abs(std::abs(iv.lo) - target), 1e-12,
                 "sampled singleton position");
}

void criterion_5(Checker& c) {
  // Fully flat walk: the essential spectrum is the entire circle and the
  // index command reports the gap closure via exit code 4.
  const SplitStepModel model(ScalarSequence::constant(0.0),
                             ScalarSequence::constant(0.0));
  const EssentialSpectrumU spec = essential_spectrum_U(model, 1024);
  c.require(spec.combined.arcs.size() == 1, "single arc");
  if (!spec.combined.arcs.empty()) {
    c.require(spec.combined.arcs[0].lo == 0.0, "arc starts at 0");
    c.require_le(std::abs(spec.combined.arcs[0].hi - 2.0 * std::numbers::pi),
                 1e-9, "arc closes the circle");
  }
  const auto flat = write_model("flat.json", R"({
    "kind": "splitstep",
    "p": {"left_period": [0.0], "right_period": [0.0]},
    "a": {"left_period": [0.0], "right_period": [0.0]}
  })");
  const RunResult res = run_cli("index " + flat);
  c.require(res.exit_code == 4, "cmd_index exits 4");
}

void criterion_6(Checker& c) {
  // 512 random models x 64 phases: unitarity, chiral identity, closed-form
  // determinant, all to 1e-12.
  std::mt19937_64 rng(33006);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const int z_samples = 64;
  double worst_unitary = 0.0, worst_chiral = 0.0, worst_det = 0.0;
  for (int trial = 0; trial < 512; ++trial) {
    const int nl = 1 + static_cast<int>(rng() % 3);
    const int nr = 1 + static_cast<int>(rng() % 3);
    auto tail = [&](int n) {
      std::vector<double> t;
      for (int i = 0; i < n; ++i) t.push_back(amp(rng));
      return t;
    };
    const SplitStepModel model(
        ScalarSequence(tail(nl), tail(nr)),
        ScalarSequence(tail(nl), tail(nr)));
    const auto gamma = gamma_operator(model);
    const auto u = evolution_operator(model);
    const auto blocks = half_step_blocks(model);
    for (int t = 0; t < z_samples; ++t) {
      const Complex z =
          std::polar(1.0, 2.0 * std::numbers::pi * t / z_samples);
      for (Side side : {Side::Left, Side::Right}) {
        const ComplexMatrix us = symbol_at(u, side, z);
        const ComplexMatrix gs = symbol_at(gamma, side, z);
        worst_unitary = std::max(worst_unitary, unitarity_defect(us));
        worst_chiral = std::max(
            worst_chiral,
            (us.adjoint() - gs * us * gs).cwiseAbs().maxCoeff());
        for (ChiralSign sign : {ChiralSign::Plus, ChiralSign::Minus}) {
          const Complex closed = blocks.closed_determinant(side, sign, z);
          const Complex numeric =
              determinant(symbol_at(blocks.first_block(sign), side, z));
          worst_det = std::max(worst_det,
                               std::abs(closed - numeric) /
                                   std::max(1.0, std::abs(closed)));
        }
      }
    }
  }
  c.require_le(worst_unitary, 1e-12, "unitarity defect");
  c.require_le(worst_chiral, 1e-12, "chiral identity defect");
  c.require_le(worst_det, 1e-12, "determinant closed form");
}

void criterion_7(Checker& c) {
  // Lambda-calculus identities on 10^4 random pairs.
  std::mt19937_64 rng(33007);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  for (int i = 0; i < 10000 && c.ok; ++i) {
    const double s = dist(rng);
    const double t = dist(rng);
    const double w = (s + t) / (1.0 + s * t);
    const ExtendedHalfLine prod = lambda_map(s).times(lambda_map(t));
    const double err = std::abs(prod.log() - lambda_map(w).log());
    c.require_le(err, 1e-12 * std::max(1.0, std::abs(prod.log())),
                 "product identity");
    if (s + t != 0.0)
      c.require((prod.log() > 0.0) == (s + t > 0.0), "sign equivalence");
    else
      c.require(prod.log() == 0.0, "sign equivalence at zero");
  }
}

void criterion_8(Checker& c) {
  // Partial geometric means at horizon 1e6 with a perturbed core.
  const ScalarSequence seq({1.0, 2.0, 4.0}, {1.0, 2.0, 4.0}, 0,
                           {1.5, 2.5, 3.5, 1.2, 2.2});
  const double mean = oracle::geometric_mean_limit(seq, 1000000);
  c.require_le(std::abs(mean - 2.0), 1e-6, "partial geometric mean");
}

void criterion_9(Checker& c) {
  // Downsampling invariance: Fredholm verdict and band sets survive.
  std::mt19937_64 rng(33009);
  auto random_periodic = [&](int period, bool selfadjoint) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rnd = [&](int n) {
      std::vector<Complex> t;
      for (int i = 0; i < n; ++i) t.emplace_back(dist(rng), dist(rng));
      return t;
    };
    ComplexSequence upper(rnd(period), rnd(period));
    std::vector<Complex> diag_t;
    for (int i = 0; i < period; ++i) diag_t.emplace_back(dist(rng), 0.0);
    ComplexSequence diag(diag_t, diag_t);
    if (selfadjoint) {
      // fix tails so left == right (purely periodic)
      upper = ComplexSequence(upper.left_tail(), upper.left_tail());
      ComplexSequence lower = upper.shifted(-1).map(
          [](Complex v) { return std::conj(v); });
      ComplexSequence d2(diag.left_tail(), diag.left_tail());
      return scalar_operator({lower, d2, upper});
    }
    ComplexSequence lower(rnd(period), rnd(period));
    return scalar_operator({lower, diag, upper});
  };

  int checked = 0;
  for (int m : {2, 3}) {
    // Ten specs per factor: five general (index), five self-adjoint (bands).
    for (int i = 0; i < 5; ++i) {
      for (int period : {1, m}) {
        const auto op = random_periodic(period, false);
        const auto base = fredholm_index(op);
        const auto down = fredholm_index(downsample(op, m));
        c.require(base.fredholm == down.fredholm,
                  "Fredholm verdict under downsampling");
        if (base.fredholm && down.fredholm)
          c.require(*base.index == *down.index,
                    "index under downsampling");
        ++checked;
        if (checked >= 10 * 2) break;
      }
    }
    for (int i = 0; i < 5; ++i) {
      const auto op = random_periodic(m, true);
      const auto bands = essential_spectrum_bands(op, 512);
      const auto bands_down =
          essential_spectrum_bands(downsample(op, m), 512);
      c.require(bands.intervals.size() == bands_down.intervals.size(),
                "band count under downsampling");
      if (bands.intervals.size() == bands_down.intervals.size()) {
        for (size_t k = 0; k < bands.intervals.size(); ++k) {
          c.require_le(
              std::abs(bands.intervals[k].lo - bands_down.intervals[k].lo),
              1e-9, "band endpoint under downsampling");
          c.require_le(
              std::abs(bands.intervals[k].hi - bands_down.intervals[k].hi),
              1e-9, "band endpoint under downsampling");
        }
      }
    }
  }
}

void criterion_10(Checker& c) {
  // Determinism: two consecutive spectrum runs are byte-identical.
  const auto wall = write_model("wall.json", kWallJson);
  const auto csv1 = (sandbox() / "det1.csv").string();
  const auto csv2 = (sandbox() / "det2.csv").string();
  const RunResult a =
      run_cli("spectrum " + wall + " --samples 512 --csv " + csv1);
  const RunResult b =
      run_cli("spectrum " + wall + " --samples 512 --csv " + csv2);
  c.require(a.exit_code == 0 && b.exit_code == 0, "spectrum exit codes");
  c.require(!a.out.empty() && a.out == b.out, "byte-identical JSON");
  c.require(read_file(csv1) == read_file(csv2), "byte-identical CSV");
}

struct Criterion {
  int id;
  const char* label;
  std::function<void(Checker&)> run;
  double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main() {
  if (const char* bin = std::getenv("CHIRALWALK_BIN")) {
    g_binary = bin;
  } else {
    std::cerr << "CHIRALWALK_BIN must point at the chiralwalk binary\n";
    return 2;
  }

  const std::vector<Criterion> criteria = {
      {1, "domain-wall index +1 by three agreeing routes", criterion_1, 1.0},
      {2, "protected eigenstate with exact decay and certificate",
       criterion_2, 1.0},
      {3, "arcs vs cloud vs ring oracle vs closed forms on 50 random models",
       criterion_3, 60.0},
      {4, "closed-form degeneration to the points +-sqrt(2)/2", criterion_4,
       0.0},
      {5, "flat walk: full-circle spectrum and exit 4", criterion_5, 0.0},
      {6, "symbol identities on 512 random models x 64 phases", criterion_6,
       0.0},
      {7, "lambda product and sign identities on 10^4 pairs", criterion_7,
       0.0},
      {8, "geometric-mean convergence at horizon 10^6", criterion_8, 1.0},
      {9, "downsampling invariance of verdicts and bands", criterion_9, 0.0},
      {10, "byte-identical repeated spectrum runs", criterion_10, 0.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds)
      checker.require(false, "runtime budget exceeded");
    if (checker.ok) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", criterion.id,
                  criterion.label, seconds);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.2f s) -- %s\n", criterion.id,
                  criterion.label, seconds, checker.first_failure.c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
