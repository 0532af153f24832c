#include "mpt/mittag_leffler.hpp"

#include <cmath>

namespace mpt {

ComplexSymTensor3 ComplexTensorEval::split() const {
  std::array<double, 6> re{}, im{};
  for (int k = 0; k < 6; ++k) {
    re[k] = packed[k].real();
    im[k] = packed[k].imag();
  }
  return {SymTensor3(re), SymTensor3(im)};
}

double ComplexTensorEval::frobenius() const noexcept {
  double s = 0.0;
  for (int k = 0; k < 6; ++k) s += (k < 3 ? 1.0 : 2.0) * std::norm(packed[k]);
  return std::sqrt(s);
}

PoleResidueExpansion from_model(const SpectralModel& model) {
  PoleResidueExpansion e;
  e.n0 = model.n0();
  e.alpha = model.alpha();
  e.sigma_star = model.sigma_star();
  for (std::size_t n = 0; n < model.size(); ++n) {
    const Mode& mode = model.modes()[n];
    if (mode.dark) continue;
    e.lambdas.push_back(mode.lambda);
    e.poles_s.push_back(-mode.lambda / model.time_scale());
    e.residues.push_back(mode_tensor(model, n));
    e.nv.push_back(0);
  }
  return e;
}

int select_truncation(const PoleResidueExpansion& expansion, std::size_t index) {
  if (index >= expansion.size()) throw Error(ErrorKind::IndexOutOfRange, "select_truncation: index out of range");
  const double lambda = expansion.lambdas[index];
  constexpr int kPoints = 256;
  double peak = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const std::complex<double> w = std::polar(0.5 * lambda, 2.0 * kPi * k / kPoints);
    peak = std::max(peak, std::abs(w / (w - lambda)));
  }
  const double m_n = peak * expansion.residues[index].max_abs();
  const double target = std::ldexp(m_n, static_cast<int>(index) + 1);
  if (!std::isfinite(target)) throw Error(ErrorKind::NumericRange, "select_truncation: M_n overflow");
  int nv = 0;
  while (std::ldexp(1.0, nv) < target) ++nv;
  return nv;
}

void apply_truncation(PoleResidueExpansion& expansion) {
  for (std::size_t n = 0; n < expansion.size(); ++n) expansion.nv[n] = select_truncation(expansion, n);
}

Evaluation evaluate(const PoleResidueExpansion& expansion, std::complex<double> point, Variable variable) {
  const std::complex<double> w = variable == Variable::W ? point : -point * expansion.time_scale();
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw Error(ErrorKind::InvalidInput, "evaluate: non-finite point");

  Evaluation out;
  for (int k = 0; k < 6; ++k) out.value.packed[k] = expansion.n0.packed()[k];
  out.partial_norms.reserve(expansion.size());

  for (std::size_t n = 0; n < expansion.size(); ++n) {
    const double lambda = expansion.lambdas[n];
    if (std::abs(w - lambda) <= 1e-12 * lambda)
      throw Error(ErrorKind::PoleProximity, "evaluate: point within 1e-12 of pole " + std::to_string(n));
    std::complex<double> f = w / (w - lambda);
    const std::complex<double> ratio = w / lambda;
    std::complex<double> pw = 1.0;
    for (int k = 1; k <= expansion.nv[n]; ++k) {
      pw *= ratio;
      f += pw;
    }
    const auto& a = expansion.residues[n].packed();
    for (int k = 0; k < 6; ++k) out.value.packed[k] += f * a[k];
    out.partial_norms.push_back(out.value.frobenius());
  }
  return out;
}

SymTensor3 residue_at_pole(const PoleResidueExpansion& expansion, std::size_t index) {
  if (index >= expansion.size()) throw Error(ErrorKind::IndexOutOfRange, "residue_at_pole: index out of range");
  return expansion.poles_s[index] * expansion.residues[index];
}

ComplexTensorEval contour_residue(const PoleResidueExpansion& expansion, std::size_t index, int points,
                                  double rel_radius) {
  if (index >= expansion.size()) throw Error(ErrorKind::IndexOutOfRange, "contour_residue: index out of range");
  if (points < 3 || !(rel_radius > 0.0)) throw Error(ErrorKind::InvalidInput, "contour_residue: bad contour");
  const double sn = expansion.poles_s[index];
  const double r = rel_radius * std::abs(sn);
  ComplexTensorEval acc;
  for (int k = 0; k < points; ++k) {
    const std::complex<double> ds = std::polar(r, 2.0 * kPi * (k + 0.5) / points);
    const Evaluation e = evaluate(expansion, sn + ds, Variable::S);
    for (int c = 0; c < 6; ++c) acc.packed[c] += ds * e.value.packed[c];
  }
  for (auto& x : acc.packed) x /= static_cast<double>(points);
  return acc;
}

}  // namespace mpt
