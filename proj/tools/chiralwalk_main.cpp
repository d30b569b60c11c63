// chiralwalk: topological invariants of one-dimensional strictly local
// operators with asymptotically periodic coefficients, specialized to the
// chirally symmetric split-step quantum walk.
//
//   chiralwalk index      MODEL.json [--samples N]
//   chiralwalk spectrum   MODEL.json [--samples N] [--csv PATH] [--svg PATH]
//   chiralwalk eigenstate MODEL.json --sign plus|minus [--window W] [--csv PATH]
//   chiralwalk verify     MODEL.json [--oracle-cells M] [--samples N]
//
// Exit codes: 0 ok, 2 schema/range error, 3 io error, 4 not Fredholm,
// 5 zero index, 6 window too small, 7 verify failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chiralwalk/eigenstate.hpp"
#include "chiralwalk/model_io.hpp"
#include "chiralwalk/verify.hpp"

namespace {

using namespace chiralwalk;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::SchemaError:
    case ErrorCode::RangeError:
      return 2;
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::NotFredholm:
      return 4;
    case ErrorCode::ZeroIndex:
      return 5;
    case ErrorCode::WindowTooSmall:
      return 6;
    default:
      return 1;
  }
}

int default_samples() {
  if (const char* env = std::getenv("CHIRALWALK_SAMPLES")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1024;
}

void emit(const json& envelope) {
  std::cout << serialize_report(envelope);
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  out << payload;
  if (!out) throw Error(ErrorCode::IoError, "short write: " + path);
}

json side_index_json(const SignedIndexData& data) {
  json out;
  out["fredholm"] = data.fredholm;
  out["index"] = data.index ? json(*data.index) : json(nullptr);
  out["winding_index"] =
      data.winding_index ? json(*data.winding_index) : json(nullptr);
  out["routes_agree"] = data.routes_agree;
  out["winding_left"] =
      data.left.winding ? json(*data.left.winding) : json(nullptr);
  out["winding_right"] =
      data.right.winding ? json(*data.right.winding) : json(nullptr);
  out["fredholm_left"] = data.left.fredholm;
  out["fredholm_right"] = data.right.fredholm;
  return out;
}

int cmd_index(const ParsedModel& model, int samples) {
  FredholmOptions opt;
  opt.samples = samples;
  json params;
  params["samples"] = samples;

  if (model.kind == ParsedModel::Kind::SplitStep) {
    const SignedIndexReport report = index_pm(*model.split_step, opt);
    json results;
    results["kind"] = "splitstep";
    results["fredholm_plus"] = report.plus.fredholm;
    results["fredholm_minus"] = report.minus.fredholm;
    results["ind_plus"] =
        report.plus.index ? json(*report.plus.index) : json(nullptr);
    results["ind_minus"] =
        report.minus.index ? json(*report.minus.index) : json(nullptr);
    results["plus"] = side_index_json(report.plus);
    results["minus"] = side_index_json(report.minus);
    auto opt_num = [](const std::optional<double>& v) {
      return v ? json(*v) : json(nullptr);
    };
    results["p_left"] = opt_num(report.p_left);
    results["a_left"] = opt_num(report.a_left);
    results["p_right"] = opt_num(report.p_right);
    results["a_right"] = opt_num(report.a_right);
    emit(report_envelope("index", model.digest, params, results,
                         report.warnings));
    return report.fredholm_all() ? 0 : 4;
  }

  const IndexReport report = fredholm_index(*model.strictly_local, opt);
  json results;
  results["kind"] = "strictly_local";
  results["fredholm"] = report.fredholm;
  results["wn_left"] = report.wn_left ? json(*report.wn_left) : json(nullptr);
  results["wn_right"] =
      report.wn_right ? json(*report.wn_right) : json(nullptr);
  results["index"] = report.index ? json(*report.index) : json(nullptr);
  results["min_abs_det"] = report.min_abs_det;
  emit(report_envelope("index", model.digest, params, results,
                       report.warnings));
  return report.fredholm ? 0 : 4;
}

json closed_form_json(const SplitStepModel& model, Side side,
                      const SpectralBands& sampled,
                      std::vector<std::string>& warnings) {
  json out;
  SpectralBands closed;
  try {
    closed = closed_bands(model, side);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedPeriod) return json(nullptr);
    throw;
  }
  out["bands"] = intervals_json(closed.intervals);
  out["singleton"] = *closed.singleton;
  out["connected"] = *closed.connected;
  if (closed.intervals.size() == sampled.intervals.size()) {
    double gap = 0.0;
    for (size_t i = 0; i < closed.intervals.size(); ++i) {
      gap = std::max(gap, std::abs(closed.intervals[i].lo -
                                   sampled.intervals[i].lo));
      gap = std::max(gap, std::abs(closed.intervals[i].hi -
                                   sampled.intervals[i].hi));
    }
    out["max_endpoint_discrepancy"] = gap;
  } else {
    out["max_endpoint_discrepancy"] = json(nullptr);
    warnings.push_back(std::string("BandCountMismatch:") + side_name(side));
  }
  return out;
}

int cmd_spectrum(const ParsedModel& model, int samples,
                 const std::optional<std::string>& csv,
                 const std::optional<std::string>& svg) {
  json params;
  params["samples"] = samples;
  std::vector<std::string> warnings;
  json results;
  SpectralBands combined;

  if (model.kind == ParsedModel::Kind::SplitStep) {
    const SplitStepModel& m = *model.split_step;
    const EssentialSpectrumU spec = essential_spectrum_U(m, samples);
    combined = spec.combined;
    results["kind"] = "splitstep";
    results["bands"] = intervals_json(spec.combined.intervals);
    results["arcs"] = arcs_json(spec.combined.arcs);
    results["resolution"] = spec.combined.resolution;
    json sides;
    for (Side side : {Side::Left, Side::Right}) {
      const SpectralBands& side_bands =
          side == Side::Left ? spec.left : spec.right;
      json sj;
      sj["period"] = m.period(side);
      sj["bands"] = intervals_json(side_bands.intervals);
      sj["closed_form"] = closed_form_json(m, side, side_bands, warnings);
      sides[side_name(side)] = sj;
    }
    results["sides"] = sides;
  } else {
    const StrictlyLocalOperatorSpec& op = *model.strictly_local;
    results["kind"] = "strictly_local";
    try {
      combined = essential_spectrum_bands(op, samples);
      results["bands"] = intervals_json(combined.intervals);
      results["resolution"] = combined.resolution;
      results["arcs"] = json::array();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotHermitianFamily) throw;
      // Non-normal symbols: report the eigenvalue cloud instead of bands.
      const SpectralCloud cloud = essential_spectrum_cloud(op, samples);
      json points = json::array();
      for (const auto& pt : cloud.points)
        points.push_back({pt.value.real(), pt.value.imag()});
      results["cloud"] = points;
      results["grid_spacing"] = cloud.grid_spacing;
      warnings.push_back("NotHermitianFamily: reporting eigenvalue cloud");
    }
  }

  if (csv) write_file(*csv, spectrum_csv(combined));
  if (svg) write_file(*svg, spectrum_svg(combined.arcs));
  emit(report_envelope("spectrum", model.digest, params, results, warnings));
  return 0;
}

std::string eigenstate_csv(const EigenstateBundle& bundle) {
  std::string out =
      "x,psi_re,psi_im,Psi1_re,Psi1_im,Psi2_re,Psi2_im,norm_sq\n";
  for (std::int64_t x = bundle.x_lo; x <= bundle.x_hi; ++x) {
    const auto& sp = bundle.spinor[static_cast<size_t>(x - bundle.x_lo)];
    const double psi = bundle.psi(x);
    out += std::to_string(x) + "," + format_double(psi) + "," +
           format_double(0.0) + "," + format_double(sp(0).real()) + "," +
           format_double(sp(0).imag()) + "," + format_double(sp(1).real()) +
           "," + format_double(sp(1).imag()) + "," +
           format_double(sp.squaredNorm()) + "\n";
  }
  return out;
}

int cmd_eigenstate(const ParsedModel& model, const std::string& sign_str,
                   std::int64_t window,
                   const std::optional<std::string>& csv) {
  if (model.kind != ParsedModel::Kind::SplitStep)
    throw Error(ErrorCode::SchemaError,
                "eigenstate requires a splitstep model");
  const ChiralSign sign =
      sign_str == "minus" ? ChiralSign::Minus : ChiralSign::Plus;
  json params;
  params["sign"] = sign_name(sign);
  params["window"] = window;

  const SplitStepModel& m = *model.split_step;
  const EigenstateBundle bundle = build_eigenstate(m, sign, -window, window);
  const DecayCertificate cert = decay_certificate(bundle, m);

  json results;
  results["sign"] = sign_name(sign);
  results["branch_j"] = bundle.branch;
  results["residual"] = bundle.residual;
  results["window"] = {bundle.x_lo, bundle.x_hi};
  json cj;
  cj["delta_lo"] = cert.delta_lo;
  cj["delta_hi"] = cert.delta_hi;
  cj["lambda_lo"] = cert.lambda_lo;
  cj["lambda_hi"] = cert.lambda_hi;
  cj["epsilon"] = cert.epsilon;
  cj["c_lo"] = cert.c_lo;
  cj["c_hi"] = cert.c_hi;
  cj["kappa_lo"] = cert.kappa_lo;
  cj["kappa_hi"] = cert.kappa_hi;
  cj["onset"] = cert.onset;
  results["certificate"] = cj;

  if (csv) write_file(*csv, eigenstate_csv(bundle));
  emit(report_envelope("eigenstate", model.digest, params, results, {}));
  return 0;
}

int cmd_verify(const ParsedModel& model, int cells, int samples) {
  json params;
  params["oracle_cells"] = cells;
  params["samples"] = samples;
  std::vector<VerifyCheck> checks;
  if (model.kind == ParsedModel::Kind::SplitStep)
    checks = verify_split_step(*model.split_step, samples, cells);
  else
    checks = verify_strictly_local(*model.strictly_local,
                                   model.expect_unitary, samples, cells);
  json arr = json::array();
  for (const auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["defect"] = c.defect;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    arr.push_back(cj);
  }
  json results;
  results["checks"] = arr;
  results["all_pass"] = all_pass(checks);
  emit(report_envelope("verify", model.digest, params, results, {}));
  return all_pass(checks) ? 0 : 7;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fredholm indices, essential spectra and protected edge "
               "states of split-step quantum walks"};
  app.require_subcommand(1);

  std::string model_path;
  int samples = default_samples();
  std::optional<std::string> csv_path, svg_path;
  std::string sign_str = "plus";
  std::int64_t window = 128;
  int oracle_cells = 64;

  auto* index = app.add_subcommand("index", "signed Fredholm indices");
  index->add_option("model", model_path, "model JSON file")->required();
  index->add_option("--samples", samples, "circle samples for windings");

  auto* spectrum = app.add_subcommand("spectrum", "essential spectrum");
  spectrum->add_option("model", model_path, "model JSON file")->required();
  spectrum->add_option("--samples", samples, "circle samples per family");
  spectrum->add_option("--csv", csv_path, "write bands and arcs as CSV");
  spectrum->add_option("--svg", svg_path, "write a unit-circle figure");

  auto* eigenstate =
      app.add_subcommand("eigenstate", "symmetry-protected eigenstate");
  eigenstate->add_option("model", model_path, "model JSON file")->required();
  eigenstate->add_option("--sign", sign_str, "plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  eigenstate->add_option("--window", window, "half-width of the site window");
  eigenstate->add_option("--csv", csv_path, "write per-site values as CSV");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("model", model_path, "model JSON file")->required();
  verify->add_option("--oracle-cells", oracle_cells,
                     "ring cells for the oracle");
  verify->add_option("--samples", samples, "circle samples per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const ParsedModel model = parse_model_file(model_path);
    if (index->parsed()) return cmd_index(model, samples);
    if (spectrum->parsed())
      return cmd_spectrum(model, samples, csv_path, svg_path);
    if (eigenstate->parsed())
      return cmd_eigenstate(model, sign_str, window, csv_path);
    if (verify->parsed()) {
      const int z = verify->count("--samples") > 0 ? samples
                                                   : std::min(samples, 64);
      return cmd_verify(model, oracle_cells, z);
    }
    return 2;
  } catch (const Error& e) {
    json err;
    err["error"] = error_code_name(e.code());
    err["detail"] = e.what();
    emit(err);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    json err;
    err["error"] = "Unhandled";
    err["detail"] = e.what();
    emit(err);
    return 1;
  }
}
