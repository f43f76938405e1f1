// Command-line front end: crosstalk noise analysis for RC and coupled RLC
// interconnects, with a lumped-ladder transient simulator as the reference.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xtalk/config.hpp"
#include "xtalk/errors.hpp"
#include "xtalk/ladder_sim.hpp"
#include "xtalk/rc2pi.hpp"
#include "xtalk/rlc_decouple.hpp"
#include "xtalk/sweep_report.hpp"

namespace {

using nlohmann::json;
using namespace xtalk;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open for writing: " + path);
  f << text;
  if (!f) throw InputError("write failed: " + path);
}

void emit_waveforms(const std::vector<Waveform>& waves, const std::string& out) {
  std::ostringstream ss;
  write_csv(waves, ss);
  if (out.empty())
    std::cout << ss.str();
  else
    write_text(out, ss.str());
}

json stats_json(const ErrorStats& s) {
  return json{{"mean_abs_err", s.mean_abs_err},
              {"max_abs_err", s.max_abs_err},
              {"n_cases", s.n_cases},
              {"n_excluded", s.n_excluded},
              {"worst_case_id", s.worst_case_id}};
}

int run_analyze_rc(const std::string& cfg_path, const std::string& out,
                   int samples_flag) {
  const auto cfg = parse_config(slurp(cfg_path));
  if (cfg.mode != "rc") throw InputError("analyze-rc needs an rc config");

  const auto lumped = derive_lumped(cfg.geom);
  const auto model = reduce(lumped, cfg.geom.rd, cfg.geom.cload, cfg.geom.tr,
                            cfg.geom.vdd);
  const auto metrics = analyze_rc(model);

  json rep;
  rep["config"] = cfg.resolved;
  rep["metrics"] = {{"tx", metrics.tx},
                    {"tv", metrics.tv},
                    {"vmax", metrics.vmax},
                    {"t_peak", metrics.t_peak},
                    {"width", metrics.width},
                    {"vmax_first_order", peak_noise_first_order(model)}};
  std::cout << rep.dump(2) << "\n";

  if (!out.empty()) {
    // exact third-order waveform, sampled
    const auto pr = pole_residue(transfer_coeffs(model));
    const RampInput ramp{model.tr, model.vdd};
    const int n = samples_flag > 0 ? samples_flag
                                   : (cfg.samples > 0 ? cfg.samples : 500);
    Waveform w;
    w.t0 = 0.0;
    const double t_stop =
        cfg.t_stop.value_or(model.tr + 8.0 * std::max(metrics.tv, metrics.tx));
    w.dt = t_stop / n;
    w.samples.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      w.samples[static_cast<size_t>(i)] = waveform_exact(pr, ramp, w.dt * i);
    std::ostringstream ss;
    write_csv(w, ss);
    write_text(out, ss.str());
  }
  return 0;
}

int run_analyze_rlc(const std::string& cfg_path, bool use_twa,
                    bool ccprime_printed) {
  const auto cfg = parse_config(slurp(cfg_path));
  if (cfg.mode != "rlc") throw InputError("analyze-rlc needs an rlc config");

  const auto variant =
      ccprime_printed ? CcPrimeVariant::Printed : CcPrimeVariant::Consistent;
  const auto method = use_twa ? TransientMethod::Twa : TransientMethod::Ladder;
  const auto est = peak_noise_rlc(cfg.pair, method, cfg.seg_len_um, variant);
  const auto nv = normalized_vars(cfg.pair);

  json rep;
  rep["config"] = cfg.resolved;
  rep["normalized"] = {{"z0", nv.z0}, {"tf", nv.tf},   {"rr", nv.rr},
                       {"rt", nv.rt}, {"ct", nv.ct},   {"kc", nv.kc},
                       {"kl", nv.kl}, {"zeta", nv.zeta}};
  rep["estimate"] = {{"tf1", est.tf1},       {"tf2", est.tf2},
                     {"tf_max", est.tf_max}, {"v_neg", est.v_neg},
                     {"v_pos", est.v_pos},   {"v_peak", est.v_peak},
                     {"method", use_twa ? "twa" : "ladder"},
                     {"ccprime", ccprime_printed ? "printed" : "consistent"}};
  std::cout << rep.dump(2) << "\n";
  return 0;
}

int run_simulate(const std::string& cfg_path, const std::string& out,
                 double dt_ps, double tstop_ps, double seg_um) {
  const auto cfg = parse_config(slurp(cfg_path));
  const double seg = seg_um > 0 ? seg_um : cfg.seg_len_um;

  if (cfg.mode == "rc") {
    auto sim = default_rc_sim(cfg.geom);
    if (cfg.dt) sim.dt = *cfg.dt;
    if (cfg.t_stop) sim.t_stop = *cfg.t_stop;
    if (dt_ps > 0) sim.dt = dt_ps * 1e-12;
    if (tstop_ps > 0) sim.t_stop = tstop_ps * 1e-12;
    emit_waveforms(transient(build_rc_victim(cfg.geom, seg), sim), out);
  } else {
    auto sim = default_rlc_sim(cfg.pair);
    if (cfg.dt) sim.dt = *cfg.dt;
    if (cfg.t_stop) sim.t_stop = *cfg.t_stop;
    if (dt_ps > 0) sim.dt = dt_ps * 1e-12;
    if (tstop_ps > 0) sim.t_stop = tstop_ps * 1e-12;
    emit_waveforms(transient(build_coupled(cfg.pair, seg), sim), out);
  }
  return 0;
}

int run_validate(const std::string& kind, std::uint64_t seed, int count,
                 bool symmetric, double seg_um, const std::string& out) {
  Corpus corpus;
  corpus.kind = kind;
  corpus.seed = seed;
  corpus.count = count;
  corpus.rlc.symmetric = symmetric;

  json rep;
  rep["config"] = {{"kind", kind},
                   {"seed", seed},
                   {"count", count},
                   {"symmetric", symmetric},
                   {"segment_um", seg_um},
                   {"oracle_floor", kOracleFloor}};
  if (kind == "rc") {
    const auto res = run_rc_corpus(corpus, seg_um);
    rep["peak"] = stats_json(res.peak);
    rep["width"] = stats_json(res.width);
  } else if (kind == "rlc") {
    rep["peak"] = stats_json(run_rlc_corpus(corpus, seg_um));
  } else {
    throw InputError("validate --kind must be rc or rlc");
  }
  const std::string text = rep.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return 0;
}

int run_sweep(const std::string& param, const std::string& grid_str,
              const std::string& cfg_path, const std::string& out,
              double seg_um) {
  std::vector<double> grid;
  std::stringstream ss(grid_str);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      grid.push_back(std::stod(tok));
    } catch (...) {
      throw InputError("bad grid value: \"" + tok + "\"");
    }
  }
  if (grid.empty()) throw InputError("sweep needs a nonempty --grid");

  SweepConfig fixed;
  fixed.seg_len_um = seg_um > 0 ? seg_um : 10.0;
  if (!cfg_path.empty()) {
    const auto cfg = parse_config(slurp(cfg_path));
    if (cfg.mode == "rc") {
      fixed.rc_base = cfg.geom;
    } else {
      const auto nv = normalized_vars(cfg.pair);
      fixed.zeta = nv.zeta;
      fixed.rt = nv.rt;
      fixed.ct = nv.ct;
      fixed.kc = nv.kc;
      fixed.kl = nv.kl;
      fixed.z0 = nv.z0;
      fixed.tf = nv.tf;
      fixed.h = cfg.pair.h;
    }
  }
  if (param == "tr")  // grid arrives in ps at the CLI boundary
    for (auto& v : grid) v *= 1e-12;

  const auto rows = sweep(param, grid, fixed);
  for (const auto& r : rows)
    if (r.rejected)
      std::cerr << "rejected " << r.param << "=" << r.value << ": " << r.note
                << "\n";
  std::ostringstream os;
  emit_csv(rows, os);
  if (out.empty())
    std::cout << os.str();
  else
    write_text(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crosstalk noise analysis for RC and coupled RLC interconnects"};
  app.require_subcommand(1);

  std::string cfg_path, out, kind = "rc", param, grid;
  int samples = 0, count = 100;
  std::uint64_t seed = 1;
  bool use_twa = false, ccprime_printed = false, symmetric = false;
  double dt_ps = 0, tstop_ps = 0, seg_um = 0;

  auto* a_rc = app.add_subcommand("analyze-rc", "2-pi closed-form noise metrics");
  a_rc->add_option("config", cfg_path, "JSON config")->required();
  a_rc->add_option("--out", out, "write the exact waveform CSV here");
  a_rc->add_option("--samples", samples, "waveform sample count");

  auto* a_rlc = app.add_subcommand("analyze-rlc", "RLC decoupled peak estimate");
  a_rlc->add_option("config", cfg_path, "JSON config")->required();
  a_rlc->add_flag("--twa", use_twa, "traveling-wave fast path");
  a_rlc->add_flag("--ccprime-printed", ccprime_printed,
                  "use the printed c'_c variant");

  auto* a_sim = app.add_subcommand("simulate", "transient oracle waveform CSV");
  a_sim->add_option("config", cfg_path, "JSON config")->required();
  a_sim->add_option("--out", out, "CSV path (default stdout)");
  a_sim->add_option("--dt", dt_ps, "time step, ps");
  a_sim->add_option("--tstop", tstop_ps, "end time, ps");
  a_sim->add_option("--segment-um", seg_um, "segment length, um");

  auto* a_val = app.add_subcommand("validate", "model-vs-oracle corpus stats");
  a_val->add_option("--kind", kind, "rc | rlc")->required();
  a_val->add_option("--seed", seed, "corpus seed");
  a_val->add_option("--count", count, "number of cases");
  a_val->add_flag("--symmetric", symmetric, "rlc: force dc = dl = 0");
  a_val->add_option("--segment-um", seg_um, "segment length, um");
  a_val->add_option("--out", out, "report path (default stdout)");

  auto* a_swp = app.add_subcommand("sweep", "parameter sweep CSV");
  a_swp->add_option("--param", param,
                    "zeta | ct | rt | kl | kc | tr | coupling-position")
      ->required();
  a_swp->add_option("--grid", grid, "comma-separated values")->required();
  a_swp->add_option("config", cfg_path, "JSON config for the fixed point");
  a_swp->add_option("--out", out, "CSV path (default stdout)");
  a_swp->add_option("--segment-um", seg_um, "segment length, um");

  CLI11_PARSE(app, argc, argv);

  try {
    if (a_rc->parsed()) return run_analyze_rc(cfg_path, out, samples);
    if (a_rlc->parsed()) return run_analyze_rlc(cfg_path, use_twa, ccprime_printed);
    if (a_sim->parsed()) return run_simulate(cfg_path, out, dt_ps, tstop_ps, seg_um);
    if (a_val->parsed())
      return run_validate(kind, seed, count, symmetric,
                          seg_um > 0 ? seg_um : 10.0, out);
    if (a_swp->parsed()) return run_sweep(param, grid, cfg_path, out, seg_um);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
