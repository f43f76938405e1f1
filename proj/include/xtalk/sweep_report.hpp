#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xtalk/ladder_sim.hpp"
#include "xtalk/net_model.hpp"
#include "xtalk/rlc_pair.hpp"

namespace xtalk {

struct ParamRange {
  double lo = 0.0, hi = 0.0;
};

// Desk-scale RC draw ranges (0.1-10 mm nets, near-driver through
// near-receiver coupling). Lengths um, caps fF/um and fF, times ps.
struct RcCorpusRanges {
  ParamRange ls{50, 2000}, lc{50, 2000}, le{50, 2000};
  ParamRange r_pul{0.02, 0.4};    // ohm/um
  ParamRange c_pul{0.05, 0.4};    // fF/um
  ParamRange cc_pul{0.02, 0.5};   // fF/um
  ParamRange rd{20, 500};         // ohm
  ParamRange cload{1, 50};        // fF
  ParamRange tr{10, 500};         // ps
};

// RLC draws in the normalized coordinates (zeta, rt, ct, kc, kl); rr is
// derived from zeta, redrawing when the combination is unreachable.
struct RlcCorpusRanges {
  ParamRange zeta{0.25, 1.5};
  ParamRange rt{0.1, 1.0};
  ParamRange ct{0.01, 0.1};
  ParamRange kc{0.05, 0.8};
  ParamRange kl{0.05, 0.8};
  ParamRange dc{-0.3, 0.3};
  ParamRange dl{-0.3, 0.3};
  bool symmetric = false;  // force dc = dl = 0
  double z0 = 50.0;        // ohm
  double tf = 1e-11;       // s
  double h = 1000.0;       // um
};

struct Corpus {
  std::uint64_t seed = 1;
  int count = 100;
  std::string kind = "rc";  // "rc" | "rlc"
  RcCorpusRanges rc;
  RlcCorpusRanges rlc;
};

// Reproducible draws.
std::vector<VictimNetGeometry> draw_rc_cases(const Corpus& c);
std::vector<CoupledRlcPair> draw_rlc_cases(const Corpus& c);

struct CaseError {
  int id = 0;
  double model = 0.0;
  double oracle = 0.0;
  double rel_err = 0.0;   // |model - oracle| / oracle
  bool excluded = false;  // oracle peak below floor, not counted
  std::string note;
};

struct ErrorStats {
  std::vector<CaseError> cases;
  double mean_abs_err = 0.0;
  double max_abs_err = 0.0;
  int n_cases = 0;
  int n_excluded = 0;
  int worst_case_id = -1;
};

ErrorStats make_stats(std::vector<CaseError> cases);

// Oracle peaks below this fraction of vdd are excluded from the statistics.
inline constexpr double kOracleFloor = 1e-6;

struct RcCorpusResult {
  ErrorStats peak;
  ErrorStats width;
};

// Full pipeline per draw: geometry -> 2-pi closed forms, against the
// distributed victim ladder with ramp injection. Peak and width statistics.
RcCorpusResult run_rc_corpus(const Corpus& c, double seg_len_um = 10.0);

// peak_noise_rlc (ladder path) against the coupled two-line ladder victim.
ErrorStats run_rlc_corpus(const Corpus& c, double seg_len_um = 10.0);

// Default oracle simulation settings: dt tied to the fastest relevant time
// scale (tr/100, tv/100, mode tf/200), t_stop covering the pulse and decay.
SimConfig default_rc_sim(const VictimNetGeometry& g);
SimConfig default_rlc_sim(const CoupledRlcPair& p);

// Distributed-ladder oracle peaks used by the corpora and sweeps.
struct OracleRcResult {
  double peak = 0.0;
  double t_peak = 0.0;
  double width = 0.0;  // at half the oracle peak
};
OracleRcResult rc_oracle(const VictimNetGeometry& g, double seg_len_um = 10.0);

struct OracleRlcResult {
  double peak = 0.0;    // max |victim| as a fraction of vdd
  double t_min = 0.0;   // time of the most negative victim sample
  double v_min = 0.0;
};
// zero_inductance replays the same configuration as a coupled RC ladder.
OracleRlcResult rlc_oracle(const CoupledRlcPair& p, double seg_len_um = 10.0,
                           bool zero_inductance = false);

// Fixed configuration a sweep varies one parameter of.
struct SweepConfig {
  // normalized RLC base; rr derives from zeta except in rt sweeps
  double zeta = 1.0;
  double rt = 0.25;
  double ct = 0.05;
  double kc = 0.217;
  double kl = 0.769;
  double z0 = 50.0;   // ohm
  double tf = 1e-11;  // s
  double h = 1000.0;  // um
  // rc base for "tr" and "coupling-position" sweeps
  std::optional<VictimNetGeometry> rc_base;
  double seg_len_um = 10.0;
};

struct SweepRow {
  std::string param;
  double value = 0.0;
  double model_peak = 0.0;
  double oracle_peak = 0.0;
  double rel_err = 0.0;
  bool rejected = false;  // grid point violates type invariants
  std::string note;
};

// param is one of: zeta, ct, rt, kl, kc, tr, coupling-position.
// zeta varies rr at fixed (rt, ct); ct/kl/kc hold zeta fixed (rr re-derived);
// rt holds the line itself fixed (rr from the base zeta at the base rt).
std::vector<SweepRow> sweep(const std::string& param,
                            const std::vector<double>& grid,
                            const SweepConfig& fixed);

// Deterministic CSV: 9 significant digits, newline-terminated final row.
// Sweep schema: param,value,model_peak,oracle_peak,rel_err
// Stats schema: case_id,model,oracle,rel_err,excluded
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void emit_csv(const ErrorStats& stats, std::ostream& os);
void emit_csv_file(const std::vector<SweepRow>& rows, const std::string& path);
void emit_csv_file(const ErrorStats& stats, const std::string& path);

}  // namespace xtalk
