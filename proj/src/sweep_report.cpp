#include "xtalk/sweep_report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "xtalk/errors.hpp"
#include "xtalk/ladder_sim.hpp"
#include "xtalk/rc2pi.hpp"
#include "xtalk/rlc_decouple.hpp"

namespace xtalk {

namespace {

// mt19937_64 is fully specified; mapping the top 53 bits keeps draws
// identical across standard libraries.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(const ParamRange& r) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return r.lo + (r.hi - r.lo) * u;
  }
};

// Deterministic parallel map: results land by index regardless of scheduling.
template <typename F>
void parallel_for(int n, F&& f) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || n < 4) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::exception_ptr err;
  std::mutex err_mu;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

SimConfig default_rc_sim(const VictimNetGeometry& g) {
  const auto lumped = derive_lumped(g);
  const auto m = reduce(lumped, g.rd, g.cload, g.tr, g.vdd);
  const auto [tx, tv] = dominant_pole_metrics(m);
  (void)tx;
  SimConfig cfg;
  cfg.input = InputKind::Ramp;
  cfg.tr = g.tr;
  cfg.vdd = g.vdd;
  cfg.dt = std::min(g.tr, tv > 0 ? tv : g.tr) / 100.0;
  cfg.t_stop = g.tr + 8.0 * tv;
  return cfg;
}

SimConfig default_rlc_sim(const CoupledRlcPair& p) {
  const auto [common, diff] = decouple(p);
  const double tf1 = common.tf(), tf2 = diff.tf();
  const double tfmax = std::max(tf1, tf2);
  auto tau = [](const DecoupledLine& m) {
    const double ctot = m.c_mode * m.h;
    return m.rs_drv * (ctot + m.cl_load) + m.r * m.h * (ctot / 2.0 + m.cl_load);
  };
  SimConfig cfg;
  cfg.input = InputKind::Step;
  cfg.vdd = p.vdd;
  cfg.dt = std::min(tf1, tf2) / 200.0;
  cfg.t_stop = 3.0 * tfmax + 6.0 * std::max({tau(common), tau(diff), tfmax / 2.0});
  return cfg;
}

OracleRcResult rc_oracle(const VictimNetGeometry& g, double seg_len_um) {
  const auto net = build_rc_victim(g, seg_len_um);
  const auto cfg = default_rc_sim(g);
  const auto waves = transient(net, cfg);
  const auto& w = waves.front();
  OracleRcResult r;
  const auto m = waveform_metrics(w, 0.0);
  r.peak = m.peak;
  r.t_peak = m.t_peak;
  const auto mh = waveform_metrics(w, m.peak / 2.0);
  r.width = mh.width;
  return r;
}

OracleRlcResult rlc_oracle(const CoupledRlcPair& p, double seg_len_um,
                           bool zero_inductance) {
  const auto cfg = default_rlc_sim(p);  // same grid either way
  CoupledRlcPair q = p;
  if (zero_inductance) {
    q.l = 0.0;
    q.lm = 0.0;
    q.dl = 0.0;
  }
  const auto waves = transient(build_coupled(q, seg_len_um), cfg);
  const auto& vic = waves[1];
  OracleRlcResult r;
  auto [pk, tpk] = peak_abs(vic);
  r.peak = std::abs(pk);
  (void)tpk;
  Waveform neg = vic;
  for (auto& s : neg.samples) s = -s;
  const auto mn = waveform_metrics(neg, std::numeric_limits<double>::infinity());
  r.v_min = -mn.peak;
  r.t_min = mn.t_peak;
  return r;
}

std::vector<VictimNetGeometry> draw_rc_cases(const Corpus& c) {
  Rng rng(c.seed);
  std::vector<VictimNetGeometry> cases(static_cast<size_t>(c.count));
  for (auto& g : cases) {
    g.ls_len = rng.uniform(c.rc.ls);
    g.lc_len = rng.uniform(c.rc.lc);
    g.le_len = rng.uniform(c.rc.le);
    g.r_pul = rng.uniform(c.rc.r_pul);
    g.c_pul = rng.uniform(c.rc.c_pul) * 1e-15;   // fF/um -> F/um
    g.cc_pul = rng.uniform(c.rc.cc_pul) * 1e-15;
    g.rd = rng.uniform(c.rc.rd);
    g.cload = rng.uniform(c.rc.cload) * 1e-15;   // fF -> F
    g.tr = rng.uniform(c.rc.tr) * 1e-12;         // ps -> s
    g.vdd = 1.0;
  }
  return cases;
}

std::vector<CoupledRlcPair> draw_rlc_cases(const Corpus& c) {
  Rng rng(c.seed);
  std::vector<CoupledRlcPair> cases(static_cast<size_t>(c.count));
  for (auto& p : cases) {
    double zeta, rt, ct, rr;
    do {  // redraw combinations where the target zeta needs rr <= 0
      zeta = rng.uniform(c.rlc.zeta);
      rt = rng.uniform(c.rlc.rt);
      ct = rng.uniform(c.rlc.ct);
      rr = rr_for_zeta(zeta, rt, ct);
    } while (!(rr > 0.01));
    const double kc = rng.uniform(c.rlc.kc);
    const double kl = rng.uniform(c.rlc.kl);
    const double dc = c.rlc.symmetric ? 0.0 : rng.uniform(c.rlc.dc);
    const double dl = c.rlc.symmetric ? 0.0 : rng.uniform(c.rlc.dl);
    p = pair_from_normalized(rr, rt, ct, kc, kl, dc, dl, c.rlc.z0, c.rlc.tf,
                             c.rlc.h);
  }
  return cases;
}

ErrorStats make_stats(std::vector<CaseError> cases) {
  ErrorStats s;
  s.cases = std::move(cases);
  double sum = 0.0;
  for (const auto& ce : s.cases) {
    if (ce.excluded) {
      ++s.n_excluded;
      continue;
    }
    ++s.n_cases;
    sum += ce.rel_err;
    if (ce.rel_err > s.max_abs_err) {
      s.max_abs_err = ce.rel_err;
      s.worst_case_id = ce.id;
    }
  }
  s.mean_abs_err = s.n_cases > 0 ? sum / s.n_cases : 0.0;
  return s;
}

RcCorpusResult run_rc_corpus(const Corpus& c, double seg_len_um) {
  if (c.kind != "rc") throw InputError("run_rc_corpus: corpus kind must be rc");
  if (c.count < 1) throw InputError("corpus count must be >= 1");
  const auto cases = draw_rc_cases(c);

  std::vector<CaseError> peak(cases.size()), width(cases.size());
  parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const auto& g = cases[static_cast<size_t>(i)];
    CaseError pe{i, 0, 0, 0, false, ""}, we{i, 0, 0, 0, false, ""};
    try {
      const auto lumped = derive_lumped(g);
      const auto m = reduce(lumped, g.rd, g.cload, g.tr, g.vdd);
      const auto metrics = analyze_rc(m);
      const auto oracle = rc_oracle(g, seg_len_um);
      pe.model = metrics.vmax;
      pe.oracle = oracle.peak;
      we.model = metrics.width;
      we.oracle = oracle.width;
      if (oracle.peak < kOracleFloor * g.vdd) {
        pe.excluded = we.excluded = true;
        pe.note = we.note = "oracle peak below floor";
      } else {
        pe.rel_err = std::abs(pe.model - pe.oracle) / pe.oracle;
        we.rel_err = we.oracle > 0
                         ? std::abs(we.model - we.oracle) / we.oracle
                         : 0.0;
      }
    } catch (const NumericalError& e) {
      pe.excluded = we.excluded = true;
      pe.note = we.note = std::string("oracle aborted: ") + e.what();
    }
    peak[static_cast<size_t>(i)] = std::move(pe);
    width[static_cast<size_t>(i)] = std::move(we);
  });
  return {make_stats(std::move(peak)), make_stats(std::move(width))};
}

ErrorStats run_rlc_corpus(const Corpus& c, double seg_len_um) {
  if (c.kind != "rlc") throw InputError("run_rlc_corpus: corpus kind must be rlc");
  if (c.count < 1) throw InputError("corpus count must be >= 1");
  const auto cases = draw_rlc_cases(c);

  std::vector<CaseError> errs(cases.size());
  parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const auto& p = cases[static_cast<size_t>(i)];
    CaseError ce{i, 0, 0, 0, false, ""};
    try {
      const auto est = peak_noise_rlc(p, TransientMethod::Ladder, seg_len_um);
      const auto oracle = rlc_oracle(p, seg_len_um);
      ce.model = est.v_peak;
      ce.oracle = oracle.peak;
      if (oracle.peak < kOracleFloor * p.vdd) {
        ce.excluded = true;
        ce.note = "oracle peak below floor";
      } else {
        ce.rel_err = std::abs(ce.model - ce.oracle) / ce.oracle;
      }
    } catch (const NumericalError& e) {
      ce.excluded = true;
      ce.note = std::string("oracle aborted: ") + e.what();
    }
    errs[static_cast<size_t>(i)] = std::move(ce);
  });
  return make_stats(std::move(errs));
}

std::vector<SweepRow> sweep(const std::string& param,
                            const std::vector<double>& grid,
                            const SweepConfig& fixed) {
  const bool is_rc = (param == "tr" || param == "coupling-position");
  if (is_rc && !fixed.rc_base)
    throw InputError("sweep over " + param + " needs an rc geometry");

  std::vector<SweepRow> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    SweepRow row;
    row.param = param;
    row.value = grid[static_cast<size_t>(i)];
    try {
      if (is_rc) {
        VictimNetGeometry g = *fixed.rc_base;
        if (param == "tr") {
          if (!(row.value > 0)) throw InputError("tr must be > 0");
          g.tr = row.value;
        } else {
          if (row.value < 0.0 || row.value > 1.0)
            throw InputError("coupling position must be in [0, 1]");
          const double slack = g.ls_len + g.le_len;
          g.ls_len = row.value * slack;
          g.le_len = slack - g.ls_len;
        }
        const auto m = reduce(derive_lumped(g), g.rd, g.cload, g.tr, g.vdd);
        row.model_peak = peak_noise(m).first;
        row.oracle_peak = rc_oracle(g, fixed.seg_len_um).peak;
      } else {
        double zeta = fixed.zeta, rt = fixed.rt, ct = fixed.ct;
        double kc = fixed.kc, kl = fixed.kl;
        double rr;
        if (param == "zeta") {
          zeta = row.value;
          rr = rr_for_zeta(zeta, rt, ct);
        } else if (param == "ct") {
          ct = row.value;  // zeta held, line re-damped to keep it
          rr = rr_for_zeta(zeta, rt, ct);
        } else if (param == "rt") {
          rt = row.value;  // the line itself stays fixed
          rr = rr_for_zeta(fixed.zeta, fixed.rt, fixed.ct);
        } else if (param == "kl") {
          kl = row.value;
          rr = rr_for_zeta(zeta, rt, ct);
        } else if (param == "kc") {
          kc = row.value;
          rr = rr_for_zeta(zeta, rt, ct);
        } else {
          throw InputError("unknown sweep parameter: " + param);
        }
        if (!(rr > 0))
          throw InputError("zeta unreachable for the fixed rt, ct");
        const auto p = pair_from_normalized(rr, rt, ct, kc, kl, 0.0, 0.0,
                                            fixed.z0, fixed.tf, fixed.h);
        if (auto v = validate(p); !v.empty()) throw InputError(v.front());
        row.model_peak =
            peak_noise_rlc(p, TransientMethod::Ladder, fixed.seg_len_um).v_peak;
        row.oracle_peak = rlc_oracle(p, fixed.seg_len_um).peak;
        if (param == "zeta") row.value = zeta_of(rt, ct, rr);
      }
      row.rel_err = row.oracle_peak > 0
                        ? std::abs(row.model_peak - row.oracle_peak) / row.oracle_peak
                        : 0.0;
    } catch (const InputError& e) {
      row.rejected = true;
      row.note = e.what();
    }
    rows[static_cast<size_t>(i)] = std::move(row);
  });
  return rows;
}

namespace {

void csv_num(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  os << buf;
}

}  // namespace

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "param,value,model_peak,oracle_peak,rel_err\n";
  for (const auto& r : rows) {
    if (r.rejected) continue;
    os << r.param << ',';
    csv_num(os, r.value);
    os << ',';
    csv_num(os, r.model_peak);
    os << ',';
    csv_num(os, r.oracle_peak);
    os << ',';
    csv_num(os, r.rel_err);
    os << '\n';
  }
}

void emit_csv(const ErrorStats& stats, std::ostream& os) {
  os << "case_id,model,oracle,rel_err,excluded\n";
  for (const auto& c : stats.cases) {
    os << c.id << ',';
    csv_num(os, c.model);
    os << ',';
    csv_num(os, c.oracle);
    os << ',';
    csv_num(os, c.rel_err);
    os << ',' << (c.excluded ? 1 : 0) << '\n';
  }
}

namespace {

template <typename T>
void emit_to_file(const T& data, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open for writing: " + path);
  emit_csv(data, f);
  f.flush();
  if (!f) throw InputError("write failed: " + path);
}

}  // namespace

void emit_csv_file(const std::vector<SweepRow>& rows, const std::string& path) {
  emit_to_file(rows, path);
}

void emit_csv_file(const ErrorStats& stats, const std::string& path) {
  emit_to_file(stats, path);
}

}  // namespace xtalk
