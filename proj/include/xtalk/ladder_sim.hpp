#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "xtalk/net_model.hpp"
#include "xtalk/rlc_pair.hpp"

namespace xtalk {

struct TwoPiModel;

// Uniformly sampled voltage trace, volts as fractions of vdd.
struct Waveform {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;

  size_t size() const { return samples.size(); }
  double time_at(size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return samples.empty() ? t0 : time_at(samples.size() - 1); }
  // Linear interpolation; clamps outside [t0, t_end].
  double value_at(double t) const;
};

struct WaveformMetrics {
  double peak = 0.0;    // grid max with 3-point parabolic refinement
  double t_peak = 0.0;
  bool crossed = false; // threshold reached at all
  double width = 0.0;   // last crossing - first crossing
  std::vector<double> crossings;
};

// Peak and threshold crossings of a (positive-going) pulse. For negative
// pulses pass the negated waveform.
WaveformMetrics waveform_metrics(const Waveform& w, double threshold);

// Signed sample of largest magnitude and its (refined) time.
std::pair<double, double> peak_abs(const Waveform& w);

// CSV export: header `t_s,v_out` or `t_s,v_line1,v_line2`, row 0 at t0.
void write_csv(const Waveform& w, std::ostream& os);
void write_csv(const std::vector<Waveform>& lines, std::ostream& os);

enum class InputKind { Step, Ramp };

struct SimConfig {
  double dt = 0.0;      // s
  double t_stop = 0.0;  // s
  InputKind input = InputKind::Step;
  double tr = 0.0;      // ramp transition time, s
  double vdd = 1.0;

  double input_at(double t) const;
};

// Uniform single line for build_single.
struct LineSpec {
  double r_pul = 0.0;  // ohm/um
  double l_pul = 0.0;  // H/um (0 for an RC line)
  double c_pul = 0.0;  // F/um
  double h = 0.0;      // um
  double rs_drv = 0.0; // ohm, driving source resistance
  double cl_load = 0.0;// F
};

// Lumped network fed to the transient solver. Builders fill both the ladder
// metadata and the element lists; node -1 is ground. All driven elements
// share the single input u(t) from SimConfig.
struct LadderNetlist {
  struct Res { int a, b; double r; };
  struct Cap { int a, b; double c; };
  struct Branch { int a, b; double l, r; };  // series R-L, current is a state
  struct Mutual { int b1, b2; double m; };   // between two branches
  struct Vsrc { int node; double rs; };      // u(t) behind rs into node
  struct RailCap { int node; double c; };    // capacitance to the u(t) rail

  int num_nodes = 0;
  std::vector<Res> resistors;
  std::vector<Cap> caps;
  std::vector<Branch> branches;
  std::vector<Mutual> mutuals;
  std::vector<Vsrc> sources;
  std::vector<RailCap> rail_caps;
  std::vector<int> outputs;  // far-end node per line

  // ladder bookkeeping
  int num_lines = 1;
  int num_segments = 0;
  double seg_len = 0.0;  // um

  int state_size() const { return num_nodes + static_cast<int>(branches.size()); }
};

// Pi-segment ladder of a uniform line; segment count = round(h/seg_len_um),
// at least 1. Totals are conserved: per-segment value = pul * (h/nseg).
LadderNetlist build_single(const LineSpec& line, double seg_len_um);

// Two parallel ladders with per-segment coupling capacitance and mutual
// inductance between aligned segments. Line 1 driven by u(t), line 2 quiet.
LadderNetlist build_coupled(const CoupledRlcPair& pair, double seg_len_um);

// Distributed victim RC line with the aggressor ramp injected through the
// coupling capacitance of the coupled span (caps to the u(t) rail).
LadderNetlist build_rc_victim(const VictimNetGeometry& g, double seg_len_um);

// The 6-element reduced circuit itself, for checking the analytic waveform
// against direct integration of the same network.
LadderNetlist build_two_pi(const TwoPiModel& m);

// Trapezoidal transient from zero initial state; one waveform per output.
std::vector<Waveform> transient(const LadderNetlist& net, const SimConfig& cfg);

// Same, with an explicit initial state [node voltages..., branch currents...].
std::vector<Waveform> transient(const LadderNetlist& net, const SimConfig& cfg,
                                const std::vector<double>& x0,
                                std::vector<std::vector<double>>* state_trace = nullptr);

// 1/2 (v^T C v + i^T L i) over the netlist elements, rail caps referenced to
// a grounded rail. Used by the passivity check.
double stored_energy(const LadderNetlist& net, const std::vector<double>& state);

}  // namespace xtalk
