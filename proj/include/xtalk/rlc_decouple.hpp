#pragma once

#include <utility>

#include "xtalk/ladder_sim.hpp"
#include "xtalk/rlc_pair.hpp"

namespace xtalk {

// Symmetric-equivalent per-unit-length parameters of a non-identical pair.
struct EffectiveParams {
  double cg_eff = 0.0;  // F/um
  double cc_eff = 0.0;  // F/um
  double l_eff = 0.0;   // H/um
  double lm_eff = 0.0;  // H/um
};

// The printed form of the c'_c radicand is dimensionally inconsistent; the
// default uses sqrt(cc^2 + cg^2 dc^2), which shares the radical of l'_m and
// reduces to cc at dc = 0. Printed keeps the literal text for comparison.
enum class CcPrimeVariant { Consistent, Printed };

// Requires dr = 0 (throws AsymmetricResistanceError otherwise).
EffectiveParams effective_params(const CoupledRlcPair& p,
                                 CcPrimeVariant variant = CcPrimeVariant::Consistent);

enum class Mode { Common, Differential };

// One decoupled single line: (l'+l'_m, c'_g) for the common mode,
// (l'-l'_m, c'_g+2c'_c) for the differential mode.
struct DecoupledLine {
  Mode mode = Mode::Common;
  double r = 0.0;       // ohm/um
  double l_mode = 0.0;  // H/um
  double c_mode = 0.0;  // F/um
  double h = 0.0;       // um
  double rs_drv = 0.0;  // ohm
  double cl_load = 0.0; // F
  double vdd = 1.0;

  double z0() const;  // sqrt(l_mode/c_mode)
  double tf() const;  // h sqrt(l_mode c_mode)
  LineSpec line_spec() const;
};

// Even/odd decomposition of the (effective) symmetric pair. Aggressor-step
// excitation splits into half-amplitude even and odd mode inputs; victim
// output = (V_even - V_odd)/2 of the full-amplitude mode responses.
std::pair<DecoupledLine, DecoupledLine> decouple(
    const CoupledRlcPair& p, CcPrimeVariant variant = CcPrimeVariant::Consistent);

struct NormalizedVars {
  double z0 = 0.0;   // sqrt(l/cg), ohm
  double tf = 0.0;   // h sqrt(l cg), s
  double rr = 0.0;   // h r / z0
  double rt = 0.0;   // rs_drv / z0
  double ct = 0.0;   // cl_load / (h cg)
  double kc = 0.0;   // cc / cg
  double kl = 0.0;   // lm / l
  double zeta = 0.0;
};

NormalizedVars normalized_vars(const CoupledRlcPair& p);

// zeta = (rt + rt ct + rr ct + rr/2) / (2 sqrt(1+ct)).
double zeta_of(double rt, double ct, double rr);

// Inverse of zeta_of in rr at fixed (rt, ct); may be negative for
// unreachable (zeta, rt, ct) combinations.
double rr_for_zeta(double zeta, double rt, double ct);

// Physical pair from normalized variables (line 1 = aggressor). The scale is
// set by z0 (ohm), tf (s) and h (um): l = z0 tf / h, cg = tf / (z0 h).
CoupledRlcPair pair_from_normalized(double rr, double rt, double ct, double kc,
                                    double kl, double dc = 0.0, double dl = 0.0,
                                    double z0 = 50.0, double tf = 1e-11,
                                    double h = 1000.0);

// (tf1, tf2) = (h sqrt((l+lm) cg), h sqrt((l-lm)(cg+2cc))) on the effective
// parameters.
std::pair<double, double> times_of_flight(
    const CoupledRlcPair& p, CcPrimeVariant variant = CcPrimeVariant::Consistent);

enum class TransientMethod { Ladder, Twa };

// Step response of one decoupled mode line. Ladder delegates to the lumped
// simulator (authoritative); Twa is the traveling-wave fast path and throws
// TwaOverdampedError when the mode zeta exceeds 1.5.
Waveform decoupled_transient(const DecoupledLine& line, TransientMethod method,
                             double seg_len_um = 10.0,
                             const SimConfig* cfg_override = nullptr);

// Closed-position evaluation of the TWA staircase (arrivals counted strictly
// before t, matching the pre-arrival sampling of the peak estimate).
double twa_value(const DecoupledLine& line, double t);

struct RlcNoiseEstimate {
  double tf1 = 0.0, tf2 = 0.0, tf_max = 0.0;  // s
  double v_neg = 0.0;   // noise sample at tf_max (negative peak when tf1 > tf2)
  double v_pos = 0.0;   // noise sample at 3 tf_max
  double v_peak = 0.0;  // max(|v_neg|, |v_pos|)
};

// Time-of-flight peak estimate from the two decoupled transients: the faster
// mode's value at tf_max gives the first peak (the slower mode has not
// arrived), and both modes sampled at 3 tf_max give the second.
RlcNoiseEstimate peak_noise_rlc(const CoupledRlcPair& p,
                                TransientMethod method = TransientMethod::Ladder,
                                double seg_len_um = 10.0,
                                CcPrimeVariant variant = CcPrimeVariant::Consistent);

}  // namespace xtalk
