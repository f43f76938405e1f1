#include "xtalk/rlc_decouple.hpp"

#include <cmath>
#include <tuple>

#include "xtalk/errors.hpp"

namespace xtalk {

std::vector<std::string> validate(const CoupledRlcPair& p) {
  std::vector<std::string> v;
  if (!(p.l > 0)) v.push_back("l must be > 0");
  if (!(p.cg > 0)) v.push_back("cg must be > 0");
  if (!(p.h > 0)) v.push_back("h must be > 0");
  if (!(std::abs(p.lm) < p.l)) v.push_back("|lm| must be < l (passivity)");
  if (!(p.cc >= 0)) v.push_back("cc must be >= 0");
  if (!(p.r >= 0)) v.push_back("r must be >= 0");
  if (!(std::abs(p.dl) < 1)) v.push_back("|dl| must be < 1");
  if (!(std::abs(p.dc) < 1)) v.push_back("|dc| must be < 1");
  if (!(p.rs_drv >= 0)) v.push_back("rs_drv must be >= 0");
  if (!(p.cl_load >= 0)) v.push_back("cl_load must be >= 0");
  if (!(p.vdd > 0)) v.push_back("vdd must be > 0");
  return v;
}

EffectiveParams effective_params(const CoupledRlcPair& p, CcPrimeVariant variant) {
  if (p.dr != 0.0) throw AsymmetricResistanceError();
  if (auto v = validate(p); !v.empty())
    throw InputError("invalid coupled pair: " + v.front());

  EffectiveParams e;
  e.l_eff = p.l;
  const double rad = std::sqrt(p.cc * p.cc + p.cg * p.cg * p.dc * p.dc);
  if (rad == 0.0) {
    // cc = 0 and dc = 0: capacitively symmetric, nothing to fold
    e.cg_eff = p.cg;
    e.cc_eff = 0.0;
    e.lm_eff = p.lm;
  } else {
    e.cg_eff = p.cg + p.cc - rad;
    e.cc_eff = variant == CcPrimeVariant::Consistent
                   ? rad
                   : p.cc * std::sqrt(1.0 + (p.cc / 2.0) * p.dc * p.dc);
    e.lm_eff = (p.lm * p.cc - p.l * p.cg * p.dc * p.dl) / rad;
  }
  if (!(e.cg_eff > 0))
    throw NumericalError("effective ground capacitance not positive");
  if (!(std::abs(e.lm_eff) < e.l_eff))
    throw NumericalError("effective mutual inductance breaks passivity");
  return e;
}

double DecoupledLine::z0() const { return std::sqrt(l_mode / c_mode); }
double DecoupledLine::tf() const { return h * std::sqrt(l_mode * c_mode); }

LineSpec DecoupledLine::line_spec() const {
  return {r, l_mode, c_mode, h, rs_drv, cl_load};
}

std::pair<DecoupledLine, DecoupledLine> decouple(const CoupledRlcPair& p,
                                                 CcPrimeVariant variant) {
  const auto e = effective_params(p, variant);
  DecoupledLine common{Mode::Common,      p.r, e.l_eff + e.lm_eff, e.cg_eff,
                       p.h, p.rs_drv, p.cl_load, p.vdd};
  DecoupledLine diff{Mode::Differential,  p.r, e.l_eff - e.lm_eff,
                     e.cg_eff + 2.0 * e.cc_eff, p.h, p.rs_drv, p.cl_load, p.vdd};
  return {common, diff};
}

double zeta_of(double rt, double ct, double rr) {
  return (rt + rt * ct + rr * ct + 0.5 * rr) / (2.0 * std::sqrt(1.0 + ct));
}

double rr_for_zeta(double zeta, double rt, double ct) {
  return (2.0 * zeta * std::sqrt(1.0 + ct) - rt * (1.0 + ct)) / (0.5 + ct);
}

NormalizedVars normalized_vars(const CoupledRlcPair& p) {
  NormalizedVars n;
  n.z0 = std::sqrt(p.l / p.cg);
  n.tf = p.h * std::sqrt(p.l * p.cg);
  n.rr = p.h * p.r / n.z0;
  n.rt = p.rs_drv / n.z0;
  n.ct = p.cl_load / (p.h * p.cg);
  n.kc = p.cc / p.cg;
  n.kl = p.lm / p.l;
  n.zeta = zeta_of(n.rt, n.ct, n.rr);
  return n;
}

CoupledRlcPair pair_from_normalized(double rr, double rt, double ct, double kc,
                                    double kl, double dc, double dl, double z0,
                                    double tf, double h) {
  CoupledRlcPair p;
  p.l = z0 * tf / h;
  p.cg = tf / (z0 * h);
  p.r = rr * z0 / h;
  p.rs_drv = rt * z0;
  p.cl_load = ct * h * p.cg;
  p.cc = kc * p.cg;
  p.lm = kl * p.l;
  p.dc = dc;
  p.dl = dl;
  p.h = h;
  return p;
}

std::pair<double, double> times_of_flight(const CoupledRlcPair& p,
                                          CcPrimeVariant variant) {
  const auto e = effective_params(p, variant);
  const double tf1 = p.h * std::sqrt((e.l_eff + e.lm_eff) * e.cg_eff);
  const double tf2 =
      p.h * std::sqrt((e.l_eff - e.lm_eff) * (e.cg_eff + 2.0 * e.cc_eff));
  return {tf1, tf2};
}

namespace {

// Elmore-style charging constant of the mode line seen as an RC skeleton.
double rc_time_constant(const DecoupledLine& m) {
  const double ctot = m.c_mode * m.h;
  return m.rs_drv * (ctot + m.cl_load) + m.r * m.h * (ctot / 2.0 + m.cl_load);
}

double mode_zeta(const DecoupledLine& m) {
  const double z0 = m.z0();
  return zeta_of(m.rs_drv / z0, m.cl_load / (m.h * m.c_mode), m.r * m.h / z0);
}

struct TwaModel {
  double tf, amp0, refl, tau, vdd;

  // Two components: the reflection staircase (arrivals at odd multiples of
  // tf, counted strictly before t), plus the attenuation deficit recovered
  // by RC charging. The staircase alone converges to vdd for a lossless
  // line, so the charging term carries only what the loss took away.
  double value(double t) const {
    if (t <= tf) return 0.0;
    double level = 0.0;
    double t_arr = tf;
    double dv = amp0;
    while (t_arr < t && std::abs(dv) > 1e-14 * vdd) {
      level += dv;
      dv *= refl;
      t_arr += 2.0 * tf;
    }
    const double deficit = vdd - amp0 / (1.0 - refl);
    return level + deficit * (-std::expm1(-(t - tf) / tau));
  }
};

TwaModel make_twa(const DecoupledLine& line) {
  const double zeta = mode_zeta(line);
  if (zeta > 1.5) throw TwaOverdampedError(zeta);
  const double z0 = line.z0();
  TwaModel m;
  m.tf = line.tf();
  m.vdd = line.vdd;
  // launch through the driver divider, first-order loss over the length,
  // doubled by the near-open reflection at the capacitive load
  const double atten = std::exp(-line.r * line.h / (2.0 * z0));
  m.amp0 = 2.0 * line.vdd * z0 / (z0 + line.rs_drv) * atten;
  // each extra round trip reflects at the source and crosses the line twice
  m.refl = (line.rs_drv - z0) / (line.rs_drv + z0) * atten * atten;
  m.tau = rc_time_constant(line);
  return m;
}

}  // namespace

double twa_value(const DecoupledLine& line, double t) {
  return make_twa(line).value(t);
}

Waveform decoupled_transient(const DecoupledLine& line, TransientMethod method,
                             double seg_len_um, const SimConfig* cfg_override) {
  SimConfig cfg;
  if (cfg_override) {
    cfg = *cfg_override;
  } else {
    const double tf = line.tf();
    cfg.dt = tf / 200.0;
    cfg.t_stop = 3.0 * tf + 6.0 * std::max(rc_time_constant(line), tf / 2.0);
    cfg.input = InputKind::Step;
    cfg.vdd = line.vdd;
  }
  if (method == TransientMethod::Ladder) {
    auto out = transient(build_single(line.line_spec(), seg_len_um), cfg);
    return out.front();
  }
  const auto twa = make_twa(line);
  Waveform w;
  w.t0 = 0.0;
  w.dt = cfg.dt;
  const auto n = static_cast<size_t>(std::llround(cfg.t_stop / cfg.dt));
  w.samples.resize(n + 1);
  for (size_t i = 0; i <= n; ++i) w.samples[i] = twa.value(w.time_at(i));
  return w;
}

RlcNoiseEstimate peak_noise_rlc(const CoupledRlcPair& p, TransientMethod method,
                                double seg_len_um, CcPrimeVariant variant) {
  auto [common, diff] = decouple(p, variant);
  RlcNoiseEstimate est;
  std::tie(est.tf1, est.tf2) = times_of_flight(p, variant);
  est.tf_max = std::max(est.tf1, est.tf2);

  const bool common_is_slow = est.tf1 >= est.tf2;

  double v1_tf, v2_tf, v1_3tf, v2_3tf;
  if (method == TransientMethod::Twa) {
    // twa arrivals count strictly before the sample time, so the slower
    // mode contributes nothing at its own time of flight
    v1_tf = twa_value(common, est.tf_max);
    v2_tf = twa_value(diff, est.tf_max);
    v1_3tf = twa_value(common, 3.0 * est.tf_max);
    v2_3tf = twa_value(diff, 3.0 * est.tf_max);
  } else {
    // common sampling grid for the two mode simulations
    SimConfig cfg;
    cfg.dt = std::min(common.tf(), diff.tf()) / 200.0;
    cfg.t_stop = 3.0 * est.tf_max +
                 6.0 * std::max({rc_time_constant(common),
                                 rc_time_constant(diff), est.tf_max / 2.0});
    cfg.input = InputKind::Step;
    cfg.vdd = p.vdd;
    const Waveform w1 = decoupled_transient(common, method, seg_len_um, &cfg);
    const Waveform w2 = decoupled_transient(diff, method, seg_len_um, &cfg);
    v1_tf = w1.value_at(est.tf_max);
    v2_tf = w2.value_at(est.tf_max);
    v1_3tf = w1.value_at(3.0 * est.tf_max);
    v2_3tf = w2.value_at(3.0 * est.tf_max);
  }

  // First peak: the slower mode has not arrived at tf_max, so the noise is
  // half the faster mode's value (negative when the common mode is slow).
  // Near-coincident flight times mean both edges land together and the
  // dropped term is no longer negligible; the full difference handles that
  // limit (and gives exactly zero for identical modes).
  const double sep = std::abs(est.tf1 - est.tf2) / est.tf_max;
  if (sep < 1e-3)
    est.v_neg = 0.5 * (v1_tf - v2_tf);
  else
    est.v_neg = common_is_slow ? -0.5 * v2_tf : 0.5 * v1_tf;
  est.v_pos = 0.5 * (v1_3tf - v2_3tf);
  est.v_peak = std::max(std::abs(est.v_neg), std::abs(est.v_pos));
  return est;
}

}  // namespace xtalk
