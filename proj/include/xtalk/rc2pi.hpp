#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "xtalk/math_util.hpp"
#include "xtalk/net_model.hpp"

namespace xtalk {

// The reduced 6-element victim model: two pi sections joined at the coupling
// node, aggressor ramp injected through cx.
struct TwoPiModel {
  double rd = 0.0;  // driver resistance, ohm
  double rs = 0.0;  // upstream wire resistance, ohm
  double re = 0.0;  // downstream wire resistance, ohm
  double c1 = 0.0;  // F
  double c2 = 0.0;  // F
  double cl = 0.0;  // F
  double cx = 0.0;  // coupling capacitance, F
  double tr = 0.0;  // aggressor transition time, s
  double vdd = 1.0;
};

std::vector<std::string> validate(const TwoPiModel& m);

// Capacitance split: c1 = cs/2, c2 = (cs+ce)/2, cl = ce/2 + cload.
TwoPiModel reduce(const LumpedVictimParams& p, double rd, double cload,
                  double tr, double vdd = 1.0);

// H(s) = (a2 s^2 + a1 s) / (b3 s^3 + b2 s^2 + b1 s + b0).
// b3 = 1 for the full third-order circuit. When an element value of exactly
// zero collapses the order, the leading nonzero denominator coefficient is
// normalized to 1 instead and order_reduced is set.
struct TransferCoeffs {
  double a2 = 0.0, a1 = 0.0;
  double b3 = 1.0, b2 = 0.0, b1 = 0.0, b0 = 0.0;
  bool order_reduced = false;

  int order() const;
  double tx() const { return a1 / b0; }  // = (rd+rs)*cx
  double tv() const { return b1 / b0; }  // = (rd+rs)(cx+c2+cl) + re*cl + rd*c1
};

// Exact transfer function of the reduced circuit, derived from the nodal
// impedance chain. Denominator made monic in its leading nonzero term.
TransferCoeffs transfer_coeffs(const TwoPiModel& m);

// Roots of s^3 + b2 s^2 + b1 s + b0, closed under conjugation, each polished
// by one Newton step, ordered by ascending |Re|.
std::array<cplx, 3> solve_cubic_stable(double b2, double b1, double b0);

struct PoleResidueForm {
  std::vector<cplx> poles;     // size = system order, conjugation-closed
  std::vector<cplx> residues;  // residue of each pole
  double direct = 0.0;         // H(inf); nonzero only for order-reduced cases
  bool perturbed = false;      // near-repeated poles were nudged apart
};

// Residues by evaluation at the poles: k_i = N(s_i) / D'(s_i). Poles closer
// than 1e-6 * max|s| are spread symmetrically by that amount first.
PoleResidueForm residues(const TransferCoeffs& c, std::vector<cplx> poles);

// Convenience: solve for the poles of c and attach residues.
PoleResidueForm pole_residue(const TransferCoeffs& c);

// Saturated ramp: v(t) = vdd * min(t/tr, 1), V(s) = vdd (1-e^{-s tr})/(s^2 tr).
struct RampInput {
  double tr = 0.0;
  double vdd = 1.0;
};

// Exact ramp response at time t: per-pole convolution branches summed over
// the pole/residue form. Result is real by construction.
double waveform_exact(const PoleResidueForm& pr, const RampInput& ramp, double t);

// Marker selecting the vt = vmax/2 noise width.
struct HalfPeak {};

struct NoiseMetrics {
  double tx = 0.0;      // (rd+rs)*cx, s
  double tv = 0.0;      // victim Elmore-like constant, s
  double vmax = 0.0;    // peak noise, fraction of vdd
  double t_peak = 0.0;  // = tr, s
  double width = 0.0;   // half-peak noise width, s
};

// (tx, tv) of the dominant-pole reduction.
std::pair<double, double> dominant_pole_metrics(const TwoPiModel& m);

// Dominant-pole waveform: rises as (tx/tr)(1-e^{-t/tv}) until tr, then decays.
double dominant_pole_waveform(const TwoPiModel& m, double t);

// (vmax, t_peak): vmax = (tx/tr)(1 - e^{-tr/tv}) vdd, peak at t = tr.
std::pair<double, double> peak_noise(const TwoPiModel& m);

// Comparison value tx/(tv + tr/2) vdd, the first-order approximation.
double peak_noise_first_order(const TwoPiModel& m);

// Noise width above an absolute threshold vt (fraction of vdd), from the two
// analytic crossings of the dominant-pole waveform.
double noise_width(const TwoPiModel& m, double vt);

// Half-peak width: tr + tv ln(1 + e^{-tr/tv}).
double noise_width(const TwoPiModel& m, HalfPeak);

// Bundle of the closed-form metrics.
NoiseMetrics analyze_rc(const TwoPiModel& m);

}  // namespace xtalk
