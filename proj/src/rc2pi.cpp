#include "xtalk/rc2pi.hpp"

#include <algorithm>
#include <cmath>

#include "xtalk/errors.hpp"

namespace xtalk {

std::vector<std::string> validate(const TwoPiModel& m) {
  std::vector<std::string> v;
  if (!(m.rd > 0)) v.push_back("rd must be > 0");
  if (!(m.rs >= 0)) v.push_back("rs must be >= 0");
  if (!(m.re >= 0)) v.push_back("re must be >= 0");
  if (!(m.c1 >= 0)) v.push_back("c1 must be >= 0");
  if (!(m.c2 >= 0)) v.push_back("c2 must be >= 0");
  if (!(m.cl >= 0)) v.push_back("cl must be >= 0");
  if (!(m.cx >= 0)) v.push_back("cx must be >= 0");
  if (!(m.tr > 0)) v.push_back("tr must be > 0");
  if (!(m.vdd > 0)) v.push_back("vdd must be > 0");
  return v;
}

TwoPiModel reduce(const LumpedVictimParams& p, double rd, double cload,
                  double tr, double vdd) {
  TwoPiModel m;
  m.rd = rd;
  m.rs = p.rs_up;
  m.re = p.re_down;
  m.c1 = p.cs_up / 2.0;
  m.c2 = (p.cs_up + p.ce_down) / 2.0;
  m.cl = p.ce_down / 2.0 + cload;  // receiver load, not c1
  m.cx = p.cx;
  m.tr = tr;
  m.vdd = vdd;
  return m;
}

int TransferCoeffs::order() const {
  if (b3 != 0.0) return 3;
  if (b2 != 0.0) return 2;
  if (b1 != 0.0) return 1;
  return 0;
}

TransferCoeffs transfer_coeffs(const TwoPiModel& m) {
  // Unnormalized polynomials from the node 1/2/output impedance chain:
  //   N(s) = (Rd Rs C1 Cx) s^2 + (Rd+Rs) Cx s
  //   D(s) = K2 s^3 + B2 s^2 + B1 s + 1
  const double rds = m.rd + m.rs;
  const double cx2 = m.cx + m.c2;
  const double n2 = m.rd * m.rs * m.c1 * m.cx;
  const double n1 = rds * m.cx;
  const double k2 = m.rd * m.rs * m.c1 * m.re * m.cl * cx2;
  const double d2 = cx2 * (m.re * m.cl * rds + m.rd * m.rs * m.c1) +
                    m.rd * m.re * m.c1 * m.cl + m.rd * m.rs * m.c1 * m.cl;
  const double d1 = rds * (m.cx + m.c2 + m.cl) + m.re * m.cl + m.rd * m.c1;

  TransferCoeffs c;
  if (k2 != 0.0) {
    c.a2 = n2 / k2;
    c.a1 = n1 / k2;
    c.b3 = 1.0;
    c.b2 = d2 / k2;
    c.b1 = d1 / k2;
    c.b0 = 1.0 / k2;
    return c;
  }
  // An exactly-zero element removed a state; renormalize on the next
  // nonzero denominator coefficient.
  c.order_reduced = true;
  double lead = d2 != 0.0 ? d2 : d1;
  if (lead == 0.0) {
    // pure divider: D(s) = 1, N(s) = 0 (n1 needs cx, and d1 >= n1 terms)
    c.a2 = n2;
    c.a1 = n1;
    c.b3 = 0.0;
    c.b2 = 0.0;
    c.b1 = 0.0;
    c.b0 = 1.0;
    return c;
  }
  c.a2 = n2 / lead;
  c.a1 = n1 / lead;
  c.b3 = 0.0;
  c.b2 = d2 != 0.0 ? 1.0 : 0.0;
  c.b1 = d2 != 0.0 ? d1 / lead : 1.0;
  c.b0 = 1.0 / lead;
  return c;
}

namespace {

cplx eval_monic_cubic(double b2, double b1, double b0, cplx s) {
  return ((s + b2) * s + b1) * s + b0;
}

}  // namespace

std::array<cplx, 3> solve_cubic_stable(double b2, double b1, double b0) {
  // Scale s = y/tau so the polynomial in y has O(1) coefficients.
  double tau = std::max({std::abs(b2) / 3.0, std::sqrt(std::abs(b1)),
                         std::cbrt(std::abs(b0))});
  if (tau == 0.0) tau = 1.0;
  const double inv = 1.0 / tau;
  const double c2 = b2 * inv;
  const double c1 = b1 * inv * inv;
  const double c0 = b0 * inv * inv * inv;

  // Depressed cubic t^3 + p t + q2 with y = t - c2/3.
  const double sh = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q2 = c0 + 2.0 * c2 * c2 * c2 / 27.0 - c1 * c2 / 3.0;

  std::array<cplx, 3> y;
  const double disc = -4.0 * p * p * p - 27.0 * q2 * q2;
  if (disc >= 0.0) {
    // three real roots; trigonometric form avoids cancellation
    if (p >= 0.0) {
      // only possible with p == 0 (disc >= 0 forces q2 == 0): triple root
      y = {cplx(-sh), cplx(-sh), cplx(-sh)};
    } else {
      const double m = 2.0 * std::sqrt(-p / 3.0);
      double arg = 3.0 * q2 / (p * m);
      arg = std::clamp(arg, -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) {
        const double ang = theta - 2.0 * M_PI * static_cast<double>(k) / 3.0;
        y[k] = cplx(m * std::cos(ang) - sh, 0.0);
      }
    }
  } else {
    // one real root via the sign-safe Cardano formula, then deflate
    const double w = std::sqrt(q2 * q2 / 4.0 + p * p * p / 27.0);
    const double u = std::cbrt(-q2 / 2.0 - std::copysign(w, q2));
    const double t0 = (u == 0.0) ? 0.0 : u - p / (3.0 * u);
    const double r0 = t0 - sh;
    // quadratic factor of y^3 + c2 y^2 + c1 y + c0 after dividing by (y - r0)
    const double qb = c2 + r0;
    const double qc = c1 + r0 * qb;
    auto [ra, rb] = solve_quadratic(qb, qc);
    y = {cplx(r0, 0.0), ra, rb};
  }

  std::array<cplx, 3> roots;
  for (int i = 0; i < 3; ++i) roots[i] = y[i] * tau;

  // one Newton polish step on the original polynomial
  for (auto& s : roots) {
    const cplx f = eval_monic_cubic(b2, b1, b0, s);
    const cplx df = (3.0 * s + 2.0 * b2) * s + b1;
    if (std::abs(df) > 0.0) {
      const cplx step = f / df;
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) s -= step;
    }
  }

  // re-pair conjugates exactly (complex roots of a real cubic come in one pair)
  int ci = -1, cj = -1;
  for (int i = 0; i < 3; ++i)
    if (roots[i].imag() != 0.0) (ci < 0 ? ci : cj) = i;
  if (ci >= 0 && cj >= 0) {
    const cplx avg = 0.5 * (roots[ci] + std::conj(roots[cj]));
    roots[ci] = avg;
    roots[cj] = std::conj(avg);
  } else if (ci >= 0) {
    roots[ci] = cplx(roots[ci].real(), 0.0);
  }

  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (std::abs(a.real()) != std::abs(b.real()))
      return std::abs(a.real()) < std::abs(b.real());
    return a.imag() > b.imag();
  });
  return roots;
}

PoleResidueForm residues(const TransferCoeffs& c, std::vector<cplx> poles) {
  PoleResidueForm pr;

  double smax = 0.0;
  for (const auto& s : poles) smax = std::max(smax, std::abs(s));
  const double gap = 1e-6 * smax;

  // Spread near-coincident poles symmetrically along their separation axis
  // (imaginary for a tight conjugate pair, real for two close real poles).
  for (size_t i = 0; i + 1 < poles.size() && smax > 0; ++i) {
    for (size_t j = i + 1; j < poles.size(); ++j) {
      cplx d = poles[i] - poles[j];
      if (std::abs(d) < gap) {
        cplx dir = (std::abs(d) > 0) ? d / std::abs(d)
                   : (poles[i].imag() != 0.0 ? cplx(0, 1) : cplx(1, 0));
        poles[i] += dir * gap;
        poles[j] -= dir * gap;
        pr.perturbed = true;
      }
    }
  }
  // keep conjugate pairing intact after a perturbation
  if (pr.perturbed) {
    for (auto& s : poles)
      if (std::abs(s.imag()) < gap * 1e-3) s = cplx(s.real(), 0.0);
    for (size_t i = 0; i + 1 < poles.size(); ++i)
      for (size_t j = i + 1; j < poles.size(); ++j)
        if (poles[i].imag() != 0.0 && poles[j].imag() != 0.0 &&
            std::abs(poles[i] - std::conj(poles[j])) < gap)
          poles[j] = std::conj(poles[i]);
  }

  const double blead = c.b3 != 0.0 ? c.b3 : (c.b2 != 0.0 ? c.b2 : c.b1);
  pr.direct = 0.0;
  if (c.order_reduced && c.order() == 2 && c.a2 != 0.0) pr.direct = c.a2 / c.b2;
  if (c.order_reduced && c.order() == 1 && c.a1 != 0.0 && c.a2 == 0.0)
    pr.direct = c.a1 / c.b1;

  pr.poles = poles;
  pr.residues.resize(poles.size());
  for (size_t i = 0; i < poles.size(); ++i) {
    const cplx s = poles[i];
    const cplx num = (c.a2 * s + c.a1) * s;
    cplx den = blead;
    for (size_t j = 0; j < poles.size(); ++j)
      if (j != i) den *= (s - poles[j]);
    pr.residues[i] = (num == 0.0) ? cplx(0.0) : num / den;
    // residues of real poles of a real-coefficient H are real
    if (s.imag() == 0.0) pr.residues[i] = cplx(pr.residues[i].real(), 0.0);
  }
  return pr;
}

PoleResidueForm pole_residue(const TransferCoeffs& c) {
  std::vector<cplx> poles;
  switch (c.order()) {
    case 3: {
      auto r = solve_cubic_stable(c.b2, c.b1, c.b0);
      poles.assign(r.begin(), r.end());
      break;
    }
    case 2: {
      auto [ra, rb] = solve_quadratic(c.b1 / c.b2, c.b0 / c.b2);
      poles = {ra, rb};
      break;
    }
    case 1:
      poles = {cplx(-c.b0 / c.b1, 0.0)};
      break;
    default:
      break;  // constant divider, no dynamics
  }
  return residues(c, std::move(poles));
}

double waveform_exact(const PoleResidueForm& pr, const RampInput& ramp, double t) {
  if (t <= 0.0) return 0.0;
  const double tr = ramp.tr;

  // Ramp response of k/(s - p): k t^2/tr phi2(p t), minus the same term
  // re-launched at tr once the input saturates. Conjugate pairs are summed
  // as 2 Re(.) so the result is real by construction.
  auto contrib = [&](const cplx& p, const cplx& k) -> cplx {
    cplx v = k * (t * t / tr) * phi2(p * t);
    if (t > tr) {
      const double u = t - tr;
      v -= k * (u * u / tr) * phi2(p * u);
    }
    return v;
  };

  double out = 0.0;
  std::vector<char> used(pr.poles.size(), 0);
  for (size_t i = 0; i < pr.poles.size(); ++i) {
    if (used[i]) continue;
    const cplx& p = pr.poles[i];
    if (p.imag() == 0.0) {
      out += contrib(p, pr.residues[i]).real();
      used[i] = 1;
      continue;
    }
    // find the conjugate partner
    size_t j = i;
    for (size_t k = i + 1; k < pr.poles.size(); ++k)
      if (!used[k] && pr.poles[k] == std::conj(p)) {
        j = k;
        break;
      }
    if (j != i) {
      out += 2.0 * contrib(p, pr.residues[i]).real();
      used[i] = used[j] = 1;
    } else {
      out += contrib(p, pr.residues[i]).real();
      used[i] = 1;
    }
  }
  // order-reduced direct feedthrough responds to the input itself
  if (pr.direct != 0.0) out += pr.direct * std::min(t / tr, 1.0);
  return out * ramp.vdd;
}

std::pair<double, double> dominant_pole_metrics(const TwoPiModel& m) {
  const double tx = (m.rd + m.rs) * m.cx;
  const double tv = (m.rd + m.rs) * (m.cx + m.c2 + m.cl) + m.re * m.cl + m.rd * m.c1;
  return {tx, tv};
}

double dominant_pole_waveform(const TwoPiModel& m, double t) {
  if (t <= 0.0) return 0.0;
  auto [tx, tv] = dominant_pole_metrics(m);
  if (tv <= 0.0) return 0.0;
  const double a = (tx / m.tr) * m.vdd;
  if (t <= m.tr) return a * one_minus_exp(t / tv);
  return a * std::exp(-(t - m.tr) / tv) * one_minus_exp(m.tr / tv);
}

std::pair<double, double> peak_noise(const TwoPiModel& m) {
  auto [tx, tv] = dominant_pole_metrics(m);
  if (tv <= 0.0) return {0.0, m.tr};  // tx = 0 whenever tv = 0
  const double vmax = (tx / m.tr) * one_minus_exp(m.tr / tv) * m.vdd;
  return {vmax, m.tr};
}

double peak_noise_first_order(const TwoPiModel& m) {
  auto [tx, tv] = dominant_pole_metrics(m);
  return tx / (tv + m.tr / 2.0) * m.vdd;
}

double noise_width(const TwoPiModel& m, double vt) {
  auto [tx, tv] = dominant_pole_metrics(m);
  auto [vmax, tpk] = peak_noise(m);
  (void)tpk;
  if (!(vt > 0.0) || vt >= vmax) throw ThresholdAbovePeakError(vt, vmax);
  const double vn = vt / m.vdd;
  // rising crossing: (tx/tr)(1 - e^{-t1/tv}) = vn
  const double t1 = -tv * std::log1p(-vn * m.tr / tx);
  // falling crossing: (tx/tr) e^{-t2/tv} (e^{tr/tv} - 1) = vn, in log space
  const double t2 = tv * (std::log(tx / (vn * m.tr)) + log_expm1(m.tr / tv));
  return t2 - t1;
}

double noise_width(const TwoPiModel& m, HalfPeak) {
  auto [tx, tv] = dominant_pole_metrics(m);
  (void)tx;
  if (tv <= 0.0) throw ThresholdAbovePeakError(0.0, 0.0);
  // tr + tv ln[(1-e^{-2tr/tv})/(1-e^{-tr/tv})] = tr + tv ln(1+e^{-tr/tv})
  return m.tr + tv * std::log1p(std::exp(-m.tr / tv));
}

NoiseMetrics analyze_rc(const TwoPiModel& m) {
  NoiseMetrics n;
  std::tie(n.tx, n.tv) = dominant_pole_metrics(m);
  std::tie(n.vmax, n.t_peak) = peak_noise(m);
  n.width = (n.vmax > 0.0) ? noise_width(m, HalfPeak{}) : 0.0;
  return n;
}

}  // namespace xtalk
