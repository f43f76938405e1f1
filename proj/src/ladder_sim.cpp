#include "xtalk/ladder_sim.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "xtalk/errors.hpp"
#include "xtalk/rc2pi.hpp"

namespace xtalk {

double Waveform::value_at(double t) const {
  if (samples.empty()) return 0.0;
  if (t <= t0) return samples.front();
  const double x = (t - t0) / dt;
  const auto i = static_cast<size_t>(x);
  if (i + 1 >= samples.size()) return samples.back();
  const double f = x - static_cast<double>(i);
  return samples[i] * (1.0 - f) + samples[i + 1] * f;
}

WaveformMetrics waveform_metrics(const Waveform& w, double threshold) {
  WaveformMetrics m;
  if (w.samples.empty()) return m;

  size_t imax = 0;
  for (size_t i = 1; i < w.samples.size(); ++i)
    if (w.samples[i] > w.samples[imax]) imax = i;
  m.peak = w.samples[imax];
  m.t_peak = w.time_at(imax);
  if (imax > 0 && imax + 1 < w.samples.size()) {
    // parabola through the three samples around the grid max
    const double ym = w.samples[imax - 1], y0 = w.samples[imax], yp = w.samples[imax + 1];
    const double den = ym - 2.0 * y0 + yp;
    if (den < 0.0) {
      const double d = 0.5 * (ym - yp) / den;
      if (std::abs(d) <= 1.0) {
        m.t_peak = w.time_at(imax) + d * w.dt;
        m.peak = y0 - 0.25 * (ym - yp) * d;
      }
    }
  }

  for (size_t i = 0; i + 1 < w.samples.size(); ++i) {
    const double va = w.samples[i] - threshold;
    const double vb = w.samples[i + 1] - threshold;
    if (va == 0.0) m.crossings.push_back(w.time_at(i));
    if ((va < 0.0 && vb > 0.0) || (va > 0.0 && vb < 0.0)) {
      const double f = va / (va - vb);
      m.crossings.push_back(w.time_at(i) + f * w.dt);
    }
  }
  if (!w.samples.empty() && w.samples.back() == threshold)
    m.crossings.push_back(w.t_end());
  m.crossed = !m.crossings.empty() || m.peak >= threshold;
  if (m.crossings.size() >= 2)
    m.width = m.crossings.back() - m.crossings.front();
  return m;
}

std::pair<double, double> peak_abs(const Waveform& w) {
  Waveform neg = w;
  for (auto& s : neg.samples) s = -s;
  const auto mp = waveform_metrics(w, std::numeric_limits<double>::infinity());
  const auto mn = waveform_metrics(neg, std::numeric_limits<double>::infinity());
  if (mn.peak > mp.peak) return {-mn.peak, mn.t_peak};
  return {mp.peak, mp.t_peak};
}

namespace {

void csv_value(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  os << buf;
}

}  // namespace

void write_csv(const Waveform& w, std::ostream& os) {
  os << "t_s,v_out\n";
  for (size_t i = 0; i < w.samples.size(); ++i) {
    csv_value(os, w.time_at(i));
    os << ',';
    csv_value(os, w.samples[i]);
    os << '\n';
  }
}

void write_csv(const std::vector<Waveform>& lines, std::ostream& os) {
  if (lines.size() == 1) return write_csv(lines[0], os);
  os << "t_s,v_line1,v_line2\n";
  const size_t n = lines.empty() ? 0 : lines[0].samples.size();
  for (size_t i = 0; i < n; ++i) {
    csv_value(os, lines[0].time_at(i));
    for (const auto& w : lines) {
      os << ',';
      csv_value(os, i < w.samples.size() ? w.samples[i] : 0.0);
    }
    os << '\n';
  }
}

double SimConfig::input_at(double t) const {
  if (t <= 0.0) return 0.0;
  if (input == InputKind::Step) return vdd;
  return vdd * std::min(t / tr, 1.0);
}

LadderNetlist build_single(const LineSpec& line, double seg_len_um) {
  if (!(line.h > 0) || !(line.c_pul >= 0) || !(line.r_pul >= 0))
    throw InputError("build_single: h must be > 0 and per-unit values >= 0");
  if (!(line.rs_drv > 0))
    throw InputError("build_single: rs_drv must be > 0");
  if (!(seg_len_um > 0)) throw InputError("build_single: zero segment length");

  const int nseg = std::max(1, static_cast<int>(std::llround(line.h / seg_len_um)));
  const double dl = line.h / nseg;
  const double rseg = line.r_pul * dl;
  const double lseg = line.l_pul * dl;
  const double cseg = line.c_pul * dl;

  LadderNetlist net;
  net.num_lines = 1;
  net.num_segments = nseg;
  net.seg_len = dl;
  net.num_nodes = nseg + 1;
  for (int k = 0; k <= nseg; ++k) {
    const double c = (k == 0 || k == nseg) ? cseg / 2.0 : cseg;
    if (c > 0) net.caps.push_back({k, -1, c});
  }
  if (line.cl_load > 0) net.caps.push_back({nseg, -1, line.cl_load});
  for (int k = 0; k < nseg; ++k) net.branches.push_back({k, k + 1, lseg, rseg});
  net.sources.push_back({0, line.rs_drv});
  net.outputs = {nseg};
  return net;
}

LadderNetlist build_coupled(const CoupledRlcPair& p, double seg_len_um) {
  if (!(p.h > 0)) throw InputError("build_coupled: h must be > 0");
  if (!(p.rs_drv > 0)) throw InputError("build_coupled: rs_drv must be > 0");
  if (!(seg_len_um > 0)) throw InputError("build_coupled: zero segment length");

  const int nseg = std::max(1, static_cast<int>(std::llround(p.h / seg_len_um)));
  const double dl = p.h / nseg;

  // line 1 takes the (1+d) values, line 2 the (1-d) values
  const double r1 = p.r * (1.0 + p.dr) * dl, r2 = p.r * (1.0 - p.dr) * dl;
  const double l1 = p.l * (1.0 + p.dl) * dl, l2 = p.l * (1.0 - p.dl) * dl;
  const double c1 = p.cg * (1.0 + p.dc) * dl, c2 = p.cg * (1.0 - p.dc) * dl;
  const double ccs = p.cc * dl;
  const double ms = p.lm * dl;

  LadderNetlist net;
  net.num_lines = 2;
  net.num_segments = nseg;
  net.seg_len = dl;
  net.num_nodes = 2 * (nseg + 1);
  auto node = [nseg](int line, int k) { return line * (nseg + 1) + k; };

  for (int line = 0; line < 2; ++line) {
    const double cs = line == 0 ? c1 : c2;
    for (int k = 0; k <= nseg; ++k) {
      const double c = (k == 0 || k == nseg) ? cs / 2.0 : cs;
      if (c > 0) net.caps.push_back({node(line, k), -1, c});
    }
    if (p.cl_load > 0) net.caps.push_back({node(line, nseg), -1, p.cl_load});
  }
  if (ccs > 0)
    for (int k = 0; k <= nseg; ++k) {
      const double c = (k == 0 || k == nseg) ? ccs / 2.0 : ccs;
      net.caps.push_back({node(0, k), node(1, k), c});
    }
  for (int line = 0; line < 2; ++line) {
    const double rs = line == 0 ? r1 : r2;
    const double ls = line == 0 ? l1 : l2;
    for (int k = 0; k < nseg; ++k)
      net.branches.push_back({node(line, k), node(line, k + 1), ls, rs});
  }
  if (ms != 0)
    for (int k = 0; k < nseg; ++k)
      net.mutuals.push_back({k, nseg + k, ms});

  net.sources.push_back({node(0, 0), p.rs_drv});       // aggressor input
  net.resistors.push_back({node(1, 0), -1, p.rs_drv}); // victim driver held low
  net.outputs = {node(0, nseg), node(1, nseg)};
  return net;
}

LadderNetlist build_rc_victim(const VictimNetGeometry& g, double seg_len_um) {
  if (auto v = validate(g); !v.empty())
    throw InputError("build_rc_victim: " + v.front());
  if (!(seg_len_um > 0)) throw InputError("build_rc_victim: zero segment length");

  LadderNetlist net;
  net.num_lines = 1;

  // chain the three regions; coupling caps go to the aggressor ramp rail
  int nodeid = 0;
  const double lens[3] = {g.ls_len, g.lc_len, g.le_len};
  for (int region = 0; region < 3; ++region) {
    const double len = lens[region];
    if (len <= 0) continue;
    const int nseg = std::max(1, static_cast<int>(std::llround(len / seg_len_um)));
    const double dl = len / nseg;
    const double rseg = g.r_pul * dl;
    const double cseg = g.c_pul * dl;
    const double ccs = g.cc_pul * dl;
    for (int k = 0; k < nseg; ++k) {
      const int a = nodeid, b = nodeid + 1;
      net.branches.push_back({a, b, 0.0, rseg});
      if (cseg > 0) {
        net.caps.push_back({a, -1, cseg / 2.0});
        net.caps.push_back({b, -1, cseg / 2.0});
      }
      if (region == 1 && ccs > 0) {
        net.rail_caps.push_back({a, ccs / 2.0});
        net.rail_caps.push_back({b, ccs / 2.0});
      }
      ++nodeid;
    }
    net.num_segments += nseg;
  }
  net.num_nodes = nodeid + 1;
  net.seg_len = g.total_len() / net.num_segments;
  if (g.cload > 0) net.caps.push_back({nodeid, -1, g.cload});
  net.resistors.push_back({0, -1, g.rd});  // quiet victim driver
  net.outputs = {nodeid};
  return net;
}

LadderNetlist build_two_pi(const TwoPiModel& m) {
  if (!(m.rd > 0 && m.rs > 0 && m.re > 0))
    throw InputError("build_two_pi: rd, rs, re must be > 0 for the lumped oracle");
  LadderNetlist net;
  net.num_lines = 1;
  net.num_segments = 2;
  net.num_nodes = 3;  // 0: driver-side, 1: coupling, 2: output
  net.resistors.push_back({0, -1, m.rd});
  if (m.c1 > 0) net.caps.push_back({0, -1, m.c1});
  net.branches.push_back({0, 1, 0.0, m.rs});
  if (m.c2 > 0) net.caps.push_back({1, -1, m.c2});
  if (m.cx > 0) net.rail_caps.push_back({1, m.cx});
  net.branches.push_back({1, 2, 0.0, m.re});
  if (m.cl > 0) net.caps.push_back({2, -1, m.cl});
  net.outputs = {2};
  return net;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void stamp(Triplets& t, int i, int j, double v) {
  if (v != 0.0) t.emplace_back(i, j, v);
}

// Assembled descriptor system E x' = A x + B u + F u'.
struct Assembled {
  Eigen::SparseMatrix<double> E, A;
  Eigen::VectorXd B, F;
  int n = 0;
};

Assembled assemble(const LadderNetlist& net) {
  const int nn = net.num_nodes;
  const int nb = static_cast<int>(net.branches.size());
  const int n = nn + nb;

  Triplets te, ta;
  Eigen::VectorXd B = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);

  for (const auto& rc : net.resistors) {
    if (!(rc.r > 0)) throw InputError("zero-resistance element in netlist");
    const double g = 1.0 / rc.r;
    stamp(ta, rc.a, rc.a, -g);
    if (rc.b >= 0) {
      stamp(ta, rc.b, rc.b, -g);
      stamp(ta, rc.a, rc.b, g);
      stamp(ta, rc.b, rc.a, g);
    }
  }
  for (const auto& c : net.caps) {
    stamp(te, c.a, c.a, c.c);
    if (c.b >= 0) {
      stamp(te, c.b, c.b, c.c);
      stamp(te, c.a, c.b, -c.c);
      stamp(te, c.b, c.a, -c.c);
    }
  }
  for (const auto& rc : net.rail_caps) {
    stamp(te, rc.node, rc.node, rc.c);
    F(rc.node) += rc.c;  // c * du/dt injected at the node
  }
  for (int k = 0; k < nb; ++k) {
    const auto& br = net.branches[k];
    const int q = nn + k;
    if (br.l <= 0.0) {
      // no inductance: fold the branch into the node equations as a
      // resistance; the unused current state is pinned to zero below
      if (!(br.r > 0)) throw InputError("zero-impedance segment in netlist");
      const double g = 1.0 / br.r;
      stamp(ta, br.a, br.a, -g);
      stamp(ta, br.b, br.b, -g);
      stamp(ta, br.a, br.b, g);
      stamp(ta, br.b, br.a, g);
      // dummy row keeps the state square: i_k = 0
      stamp(ta, q, q, -1.0);
      continue;
    }
    stamp(te, q, q, br.l);
    stamp(ta, q, br.a, 1.0);
    stamp(ta, q, br.b, -1.0);
    stamp(ta, q, q, -br.r);
    stamp(ta, br.a, q, -1.0);
    stamp(ta, br.b, q, 1.0);
  }
  for (const auto& mu : net.mutuals) {
    if (mu.m == 0.0) continue;
    const auto& b1 = net.branches[mu.b1];
    const auto& b2 = net.branches[mu.b2];
    if (b1.l <= 0.0 || b2.l <= 0.0)
      throw InputError("mutual inductance attached to a zero-inductance branch");
    stamp(te, nn + mu.b1, nn + mu.b2, mu.m);
    stamp(te, nn + mu.b2, nn + mu.b1, mu.m);
  }
  for (const auto& src : net.sources) {
    const double g = 1.0 / src.rs;
    stamp(ta, src.node, src.node, -g);
    B(src.node) += g;
  }

  Assembled as;
  as.n = n;
  as.E.resize(n, n);
  as.A.resize(n, n);
  as.E.setFromTriplets(te.begin(), te.end());
  as.A.setFromTriplets(ta.begin(), ta.end());
  as.B = std::move(B);
  as.F = std::move(F);
  return as;
}

}  // namespace

std::vector<Waveform> transient(const LadderNetlist& net, const SimConfig& cfg) {
  return transient(net, cfg, {});
}

std::vector<Waveform> transient(const LadderNetlist& net, const SimConfig& cfg,
                                const std::vector<double>& x0,
                                std::vector<std::vector<double>>* state_trace) {
  if (!(cfg.dt > 0) || !(cfg.t_stop > 0))
    throw InputError("transient: dt and t_stop must be > 0");
  if (cfg.input == InputKind::Ramp && !(cfg.tr > 0))
    throw InputError("transient: ramp input needs tr > 0");

  const auto as = assemble(net);
  const int n = as.n;
  const auto nsteps = static_cast<size_t>(std::llround(cfg.t_stop / cfg.dt));

  // trapezoidal rule: (E - dt/2 A) x_{k+1} = (E + dt/2 A) x_k
  //                   + dt B (u_k+u_{k+1})/2 + F (u_{k+1}-u_k)
  Eigen::SparseMatrix<double> M1 = as.E - (cfg.dt / 2.0) * as.A;
  const Eigen::SparseMatrix<double> M2 = as.E + (cfg.dt / 2.0) * as.A;
  M1.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(M1);
  lu.factorize(M1);
  if (lu.info() != Eigen::Success) {
    // try to name a floating node: a structurally empty row
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int k = 0; k < M1.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(M1, k); it; ++it)
        if (it.value() != 0.0) seen[static_cast<size_t>(it.row())] = 1;
    for (int i = 0; i < n; ++i)
      if (!seen[static_cast<size_t>(i)])
        throw SingularMnaError("singular MNA: node " + std::to_string(i) +
                               " has no connection");
    throw SingularMnaError("singular MNA system matrix");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (!x0.empty()) {
    if (static_cast<int>(x0.size()) != n)
      throw InputError("transient: initial state size mismatch");
    for (int i = 0; i < n; ++i) x(i) = x0[static_cast<size_t>(i)];
  }

  std::vector<Waveform> out(net.outputs.size());
  for (auto& w : out) {
    w.t0 = 0.0;
    w.dt = cfg.dt;
    w.samples.reserve(nsteps + 1);
  }
  for (size_t j = 0; j < out.size(); ++j)
    out[j].samples.push_back(x(net.outputs[j]));
  if (state_trace) state_trace->push_back({x.data(), x.data() + n});

  double u_prev = cfg.input_at(0.0);
  Eigen::VectorXd rhs(n);
  for (size_t k = 1; k <= nsteps; ++k) {
    const double t = cfg.dt * static_cast<double>(k);
    const double u = cfg.input_at(t);
    rhs = M2 * x + (cfg.dt * 0.5 * (u + u_prev)) * as.B + (u - u_prev) * as.F;
    x = lu.solve(rhs);
    u_prev = u;
    for (size_t j = 0; j < out.size(); ++j)
      out[j].samples.push_back(x(net.outputs[j]));
    if (state_trace) state_trace->push_back({x.data(), x.data() + n});
    if ((k & 63u) == 0 || k == nsteps) {
      if (!x.allFinite())
        throw DivergedError("integration diverged at t=" + std::to_string(t));
    }
  }
  return out;
}

double stored_energy(const LadderNetlist& net, const std::vector<double>& state) {
  const int nn = net.num_nodes;
  auto v = [&](int node) { return node < 0 ? 0.0 : state[static_cast<size_t>(node)]; };
  double e = 0.0;
  for (const auto& c : net.caps) {
    const double dv = v(c.a) - v(c.b);
    e += 0.5 * c.c * dv * dv;
  }
  for (const auto& rc : net.rail_caps) e += 0.5 * rc.c * v(rc.node) * v(rc.node);
  for (size_t k = 0; k < net.branches.size(); ++k) {
    const double i = state[static_cast<size_t>(nn) + k];
    e += 0.5 * net.branches[k].l * i * i;
  }
  for (const auto& mu : net.mutuals) {
    const double i1 = state[static_cast<size_t>(nn + mu.b1)];
    const double i2 = state[static_cast<size_t>(nn + mu.b2)];
    e += mu.m * i1 * i2;
  }
  return e;
}

}  // namespace xtalk
