// mptool: command-line front end to the mpt library.
//
// Exit codes: 0 success, 1 usage/file/schema errors, 2 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mpt/fitting.hpp"
#include "mpt/io.hpp"
#include "mpt/mittag_leffler.hpp"
#include "mpt/oracle.hpp"
#include "mpt/sphere.hpp"
#include "mpt/sweep.hpp"
#include "mpt/transient.hpp"

namespace {

using namespace mpt;

constexpr int kVerifyFailed = 2;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_atomic(path, content);
}

struct GridOpts {
  double fmin = 0.0;
  double fmax = 1e4;
  std::size_t points = 200;
  bool log = false;

  void add(CLI::App* app) {
    app->add_option("--fmin", fmin, "lowest frequency, Hz")->check(CLI::NonNegativeNumber);
    app->add_option("--fmax", fmax, "highest frequency, Hz")->check(CLI::PositiveNumber);
    app->add_option("--points", points, "grid points")->check(CLI::Range(2, 10000000));
    app->add_flag("--log", log, "log-spaced grid (fmin = 0 adds a zero point below fmax*1e-6)");
  }

  std::vector<double> hz() const {
    if (!(fmax > fmin)) throw Error(ErrorKind::InvalidInput, "--fmax must exceed --fmin");
    if (!log) return FrequencyGrid::linear(fmin, fmax, points).values;
    if (fmin > 0.0) return FrequencyGrid::logarithmic(fmin, fmax, points).values;
    std::vector<double> g{0.0};
    const auto rest = FrequencyGrid::logarithmic(fmax * 1e-6, fmax, points - 1).values;
    g.insert(g.end(), rest.begin(), rest.end());
    return g;
  }
};

std::vector<double> to_nu(const std::vector<double>& hz, double time_scale) {
  std::vector<double> nu(hz.size());
  for (std::size_t k = 0; k < hz.size(); ++k) nu[k] = 2.0 * kPi * hz[k] * time_scale;
  return nu;
}

Vec3 vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

std::string tensor_line(const char* label, const SymTensor3& t) {
  std::string s = label;
  for (double x : t.packed()) s += " " + fmt(x);
  return s + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral magnetic polarizability tensor toolkit"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "disable OpenMP parallel loops");
  int status = 0;

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "assemble R, I, M over a frequency grid");
  std::string model_path, out_path;
  GridOpts grid;
  sweep_cmd->add_option("--model", model_path, "model JSON")->required();
  sweep_cmd->add_option("--out", out_path, "output CSV (default stdout)");
  grid.add(sweep_cmd);

  // sphere
  auto* sphere_cmd = app.add_subcommand("sphere", "analytic sphere sweep and spectral model");
  SphereSpec spec;
  std::string emit_model;
  std::size_t n_modes = 30;
  bool sphere_no_sweep = false;
  sphere_cmd->add_option("--alpha", spec.alpha, "radius, m");
  sphere_cmd->add_option("--mur", spec.mu_r, "relative permeability");
  sphere_cmd->add_option("--sigma", spec.sigma_star, "conductivity, S/m");
  sphere_cmd->add_option("--out", out_path, "sweep CSV (default stdout)");
  sphere_cmd->add_option("--emit-model", emit_model, "write the extracted spectral model JSON");
  sphere_cmd->add_option("--modes", n_modes, "modes in the extracted model")->check(CLI::PositiveNumber);
  sphere_cmd->add_flag("--no-sweep", sphere_no_sweep, "only emit the model");
  grid.add(sphere_cmd);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "dominant-mode fits of a sweep CSV");
  std::string sweep_path, residual_path;
  std::optional<double> nu_max;
  fit_cmd->add_option("--sweep", sweep_path, "sweep CSV")->required();
  fit_cmd->add_option("--numax", nu_max, "upper nu limit (default: whole sweep)");
  fit_cmd->add_option("--out", out_path, "fit table CSV (default stdout)");
  fit_cmd->add_option("--residuals", residual_path, "residual curve CSV");

  // transient
  auto* tr_cmd = app.add_subcommand("transient", "step or impulse kernel time series");
  std::string kind_s = "step", delta_path, waveform_path;
  double tmin = 0.0, tmax = 1e-3;
  std::size_t tpoints = 200;
  tr_cmd->add_option("--model", model_path, "model JSON")->required();
  tr_cmd->add_option("--kind", kind_s, "step|impulse")->check(CLI::IsMember({"step", "impulse"}));
  tr_cmd->add_option("--tmin", tmin, "first time, s");
  tr_cmd->add_option("--tmax", tmax, "last time, s");
  tr_cmd->add_option("--points", tpoints, "time points")->check(CLI::Range(2, 10000000));
  tr_cmd->add_option("--out", out_path, "kernel CSV (default stdout)");
  tr_cmd->add_option("--delta-out", delta_path, "impulse delta coefficient JSON");
  tr_cmd->add_option("--waveform", waveform_path, "CSV t,value: convolve this excitation instead");

  // field
  auto* field_cmd = app.add_subcommand("field", "perturbed field of the object at a point");
  std::vector<double> xs, zs, h0;
  std::optional<double> f_hz, t_s;
  field_cmd->add_option("--model", model_path, "model JSON")->required();
  field_cmd->add_option("--x", xs, "receiver x1,x2,x3 (m)")->delimiter(',')->expected(3)->required();
  field_cmd->add_option("--z", zs, "object centre z1,z2,z3 (m)")->delimiter(',')->expected(3)->required();
  field_cmd->add_option("--h0", h0, "background field at z (A/m)")->delimiter(',')->expected(3)->required();
  field_cmd->add_option("--f", f_hz, "time-harmonic frequency, Hz");
  field_cmd->add_option("--t", t_s, "time, s (transient)");
  field_cmd->add_option("--kind", kind_s, "step|impulse for --t")->check(CLI::IsMember({"step", "impulse"}));

  // oracle
  auto* or_cmd = app.add_subcommand("oracle", "surrogate identity battery");
  int dim = 10;
  std::uint64_t seed = 1;
  std::string shape_s = "linear", json_path;
  double tol = 1e-9;
  bool corrupt = false;
  or_cmd->add_option("--dim", dim, "surrogate dimension")->check(CLI::Range(2, 200));
  or_cmd->add_option("--seed", seed, "RNG seed");
  or_cmd->add_option("--shape", shape_s, "linear|quadratic|clustered")
      ->check(CLI::IsMember({"linear", "quadratic", "clustered"}));
  or_cmd->add_option("--tol", tol, "pass tolerance")->check(CLI::PositiveNumber);
  or_cmd->add_option("--json", json_path, "report JSON");
  or_cmd->add_flag("--corrupt", corrupt, "perturb one coupling by 1e-3 before checking");

  // ml-eval
  auto* ml_cmd = app.add_subcommand("ml-eval", "pole-residue evaluation at a complex point");
  double re = 0.0, im = 0.0;
  std::string variable = "w";
  bool auto_nv = false;
  ml_cmd->add_option("--model", model_path, "model JSON")->required();
  ml_cmd->add_option("--re", re, "real part");
  ml_cmd->add_option("--im", im, "imaginary part");
  ml_cmd->add_option("--variable", variable, "w (= i nu on the physical axis) or s (1/s)")
      ->check(CLI::IsMember({"w", "s"}));
  ml_cmd->add_flag("--auto-nv", auto_nv, "use selected Taylor-subtraction degrees");

  // commutator
  auto* cm_cmd = app.add_subcommand("commutator", "|Z_ik| of R/I commutators over a grid");
  std::string ckind = "RI";
  double nu2_scale = 2.0;
  cm_cmd->add_option("--model", model_path, "model JSON")->required();
  cm_cmd->add_option("--kind", ckind, "RI|RR|II")->check(CLI::IsMember({"RI", "RR", "II"}));
  cm_cmd->add_option("--nu2-scale", nu2_scale, "RR/II: second frequency = scale * first")
      ->check(CLI::PositiveNumber);
  cm_cmd->add_option("--out", out_path, "CSV (default stdout)");
  grid.add(cm_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const Execution exec = serial ? Execution::Serial : Execution::Parallel;

  try {
    if (*sweep_cmd) {
      const SpectralModel model = load_model(model_path);
      const auto nu = to_nu(grid.hz(), model.time_scale());
      emit(out_path, sweep_csv(model.time_scale(), nu, sweep(model, nu, exec)));
    } else if (*sphere_cmd) {
      spec.validate();
      if (!emit_model.empty()) save_model(sphere_spectral_model(spec, n_modes), emit_model);
      if (!sphere_no_sweep) {
        const auto hz = grid.hz();
        const auto nu = to_nu(hz, spec.time_scale());
        const double m0 = sphere_static(spec);
        std::vector<Assembly> values(hz.size());
        for (std::size_t k = 0; k < hz.size(); ++k)
          values[k] = isotropic_assembly(mpt_sphere(spec, 2.0 * kPi * hz[k]), m0);
        emit(out_path, sweep_csv(spec.time_scale(), nu, values));
      }
    } else if (*fit_cmd) {
      const SweepTable t = parse_sweep_csv(read_file(sweep_path));
      if (t.nu.empty()) throw Error(ErrorKind::InvalidInput, "sweep CSV has no rows");
      const double limit = nu_max.value_or(t.nu.back());
      const FitTable table = fit_report(t.nu, t.values, limit, exec);
      emit(out_path, fit_table_csv(table));
      if (!residual_path.empty()) write_atomic(residual_path, fit_residuals_csv(table));
    } else if (*tr_cmd) {
      const SpectralModel model = load_model(model_path);
      const auto times = FrequencyGrid::linear(tmin, tmax, tpoints).values;
      std::vector<SymTensor3> values(times.size());
      if (!waveform_path.empty()) {
        Waveform wf;
        std::istringstream in(read_file(waveform_path));
        std::string line;
        while (std::getline(in, line)) {
          double a = 0.0, b = 0.0;
          if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2) {
            wf.times.push_back(a);
            wf.values.push_back(b);
          }
        }
        values = convolve_excitation(model, wf, times, exec);
      } else {
        const TransientKernel k = kind_s == "step" ? make_step_kernel(model) : make_impulse_kernel(model);
        for (std::size_t i = 0; i < times.size(); ++i) values[i] = k.smooth(times[i]);
        if (kind_s == "impulse") {
          nlohmann::json side;
          side["delta_coefficient"] = nlohmann::json::array();
          for (double x : k.delta_part.packed()) side["delta_coefficient"].push_back(x);
          side["order"] = "11,22,33,12,13,23";
          side["tail_bound"] = kernel_tail_bound(model);
          if (!delta_path.empty())
            write_atomic(delta_path, side.dump(2) + "\n");
          else
            std::cerr << "delta part: " << side.dump() << "\n";
        }
      }
      emit(out_path, tensor_series_csv("t_s", times, values));
    } else if (*field_cmd) {
      const SpectralModel model = load_model(model_path);
      if (f_hz.has_value() == t_s.has_value()) throw Error(ErrorKind::InvalidInput, "give exactly one of --f or --t");
      const Vec3 x = vec3(xs), z = vec3(zs), h = vec3(h0);
      if (f_hz) {
        const Assembly a = assemble(model, model.nu_from_hz(*f_hz));
        const CVec3 v = perturbed_field(x, z, a.m, h);
        std::cout << "re " << fmt(v[0].real()) << " " << fmt(v[1].real()) << " " << fmt(v[2].real()) << "\n"
                  << "im " << fmt(v[0].imag()) << " " << fmt(v[1].imag()) << " " << fmt(v[2].imag()) << "\n";
      } else {
        const TransientField tf = transient_field(
            x, z, model, h, kind_s == "step" ? ExcitationKind::Step : ExcitationKind::Impulse, *t_s);
        std::cout << "field " << fmt(tf.field[0]) << " " << fmt(tf.field[1]) << " " << fmt(tf.field[2]) << "\n";
        if (kind_s == "impulse")
          std::cout << "delta " << fmt(tf.delta_part[0]) << " " << fmt(tf.delta_part[1]) << " "
                    << fmt(tf.delta_part[2]) << "\n";
      }
    } else if (*or_cmd) {
      const SurrogateProblem p = generate(dim, seed, spectrum_shape_from_string(shape_s));
      std::optional<SurrogateSpectrum> spectrum;
      if (corrupt) {
        spectrum = decompose(p);
        spectrum->couplings(0, 0) += 1e-3;
      }
      const OracleReport rep = verify_identities(p, default_oracle_grid(p), tol, exec, spectrum);
      std::cout << report_to_text(rep);
      if (!json_path.empty()) {
        nlohmann::json doc = report_to_json(rep);
        doc["corrupted"] = corrupt;
        doc["tol"] = tol;
        write_atomic(json_path, doc.dump(2) + "\n");
      }
      if (!rep.all_passed()) status = kVerifyFailed;
    } else if (*ml_cmd) {
      const SpectralModel model = load_model(model_path);
      PoleResidueExpansion e = from_model(model);
      if (auto_nv) apply_truncation(e);
      const Evaluation ev = evaluate(e, {re, im}, variable == "w" ? Variable::W : Variable::S);
      const ComplexSymTensor3 m = ev.value.split();
      std::cout << "order 11 22 33 12 13 23\n" << tensor_line("re", m.real) << tensor_line("im", m.imag);
    } else if (*cm_cmd) {
      const SpectralModel model = load_model(model_path);
      const CommutatorKind kind = commutator_kind_from_string(ckind);
      const auto hz = grid.hz();
      const auto nu = to_nu(hz, model.time_scale());
      std::string csv = "nu,f_Hz,absZ12,absZ13,absZ23\n";
      for (std::size_t k = 0; k < nu.size(); ++k) {
        if (nu[k] == 0.0) continue;
        const Mat3 zm = commutator_z(model, nu[k], nu2_scale * nu[k], kind);
        csv += fmt(nu[k]) + "," + fmt(hz[k]) + "," + fmt(std::abs(zm[0][1])) + "," + fmt(std::abs(zm[0][2])) + "," +
               fmt(std::abs(zm[1][2])) + "\n";
      }
      emit(out_path, csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "mptool: " << e.what() << "\n";
    return 1;
  }
  return status;
}
