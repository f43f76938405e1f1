#include "xtalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xtalk/errors.hpp"
#include "xtalk/rlc_decouple.hpp"

namespace xtalk {

namespace {

using nlohmann::json;

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

[[noreturn]] void unknown_key(const std::string& section, const std::string& key,
                              const std::vector<std::string>& known) {
  std::string best;
  int best_d = 1 << 30;
  for (const auto& k : known) {
    const int d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  std::string msg = "unknown key \"" + key + "\" in " + section;
  if (!best.empty() && best_d <= static_cast<int>(std::max(key.size(), best.size())))
    msg += "; did you mean \"" + best + "\"?";
  throw InputError(msg);
}

void check_keys(const json& obj, const std::string& section,
                const std::vector<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      unknown_key(section, it.key(), known);
}

double require_number(const json& obj, const std::string& section,
                      const std::string& key) {
  if (!obj.contains(key))
    throw InputError("missing key \"" + key + "\" in " + section);
  if (!obj[key].is_number())
    throw InputError("key \"" + key + "\" in " + section + " must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw InputError("key \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

constexpr double kFf = 1e-15;  // fF -> F
constexpr double kPh = 1e-12;  // pH -> H
constexpr double kPs = 1e-12;  // ps -> s

}  // namespace

AnalysisConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("config root must be a JSON object");

  check_keys(root, "config",
             {"mode", "geometry", "pair", "pair_normalized", "sim", "output"});
  if (!root.contains("mode") || !root["mode"].is_string())
    throw InputError("config needs a \"mode\" of \"rc\" or \"rlc\"");

  AnalysisConfig cfg;
  cfg.mode = root["mode"].get<std::string>();
  if (cfg.mode != "rc" && cfg.mode != "rlc")
    throw InputError("mode must be \"rc\" or \"rlc\", got \"" + cfg.mode + "\"");

  json resolved;
  resolved["mode"] = cfg.mode;

  if (cfg.mode == "rc") {
    if (!root.contains("geometry"))
      throw InputError("rc config needs a \"geometry\" section");
    if (root.contains("pair") || root.contains("pair_normalized"))
      throw InputError("rc config cannot carry a pair section");
    const json& g = root["geometry"];
    check_keys(g, "geometry",
               {"ls_len", "lc_len", "le_len", "r_pul", "c_pul", "cc_pul", "rd",
                "cload", "tr", "vdd"});
    // um, ohm/um, fF/um, ohm, fF, ps
    cfg.geom.ls_len = number_or(g, "ls_len", 0.0);
    cfg.geom.lc_len = require_number(g, "geometry", "lc_len");
    cfg.geom.le_len = number_or(g, "le_len", 0.0);
    cfg.geom.r_pul = require_number(g, "geometry", "r_pul");
    cfg.geom.c_pul = require_number(g, "geometry", "c_pul") * kFf;
    cfg.geom.cc_pul = require_number(g, "geometry", "cc_pul") * kFf;
    cfg.geom.rd = require_number(g, "geometry", "rd");
    cfg.geom.cload = require_number(g, "geometry", "cload") * kFf;
    cfg.geom.tr = require_number(g, "geometry", "tr") * kPs;
    cfg.geom.vdd = number_or(g, "vdd", 1.0);
    if (auto v = validate(cfg.geom); !v.empty())
      throw InputError("geometry: " + v.front());
    resolved["geometry"] = {{"ls_len", cfg.geom.ls_len},
                            {"lc_len", cfg.geom.lc_len},
                            {"le_len", cfg.geom.le_len},
                            {"r_pul", cfg.geom.r_pul},
                            {"c_pul", cfg.geom.c_pul / kFf},
                            {"cc_pul", cfg.geom.cc_pul / kFf},
                            {"rd", cfg.geom.rd},
                            {"cload", cfg.geom.cload / kFf},
                            {"tr", cfg.geom.tr / kPs},
                            {"vdd", cfg.geom.vdd}};
  } else {
    const bool phys = root.contains("pair");
    const bool norm = root.contains("pair_normalized");
    if (phys == norm)
      throw InputError(
          "rlc config needs exactly one of \"pair\" or \"pair_normalized\"");
    if (phys) {
      const json& p = root["pair"];
      check_keys(p, "pair",
                 {"r", "dr", "l", "dl", "lm", "cg", "dc", "cc", "h", "rs_drv",
                  "cl_load", "vdd"});
      // ohm/um, pH/um, fF/um, um, ohm, fF
      cfg.pair.r = require_number(p, "pair", "r");
      cfg.pair.dr = number_or(p, "dr", 0.0);
      cfg.pair.l = require_number(p, "pair", "l") * kPh;
      cfg.pair.dl = number_or(p, "dl", 0.0);
      cfg.pair.lm = require_number(p, "pair", "lm") * kPh;
      cfg.pair.cg = require_number(p, "pair", "cg") * kFf;
      cfg.pair.dc = number_or(p, "dc", 0.0);
      cfg.pair.cc = require_number(p, "pair", "cc") * kFf;
      cfg.pair.h = require_number(p, "pair", "h");
      cfg.pair.rs_drv = require_number(p, "pair", "rs_drv");
      cfg.pair.cl_load = require_number(p, "pair", "cl_load") * kFf;
      cfg.pair.vdd = number_or(p, "vdd", 1.0);
    } else {
      const json& p = root["pair_normalized"];
      check_keys(p, "pair_normalized",
                 {"rr", "zeta", "rt", "ct", "kc", "kl", "dc", "dl", "z0", "tf",
                  "h", "vdd"});
      const double rt = number_or(p, "rt", 0.25);
      const double ct = number_or(p, "ct", 0.05);
      double rr;
      if (p.contains("rr")) {
        rr = require_number(p, "pair_normalized", "rr");
      } else {
        const double zeta = number_or(p, "zeta", 1.0);
        rr = rr_for_zeta(zeta, rt, ct);
        if (!(rr > 0))
          throw InputError("zeta unreachable for the given rt, ct");
      }
      cfg.pair = pair_from_normalized(
          rr, rt, ct, number_or(p, "kc", 0.217), number_or(p, "kl", 0.769),
          number_or(p, "dc", 0.0), number_or(p, "dl", 0.0),
          number_or(p, "z0", 50.0), number_or(p, "tf", 10.0) * kPs,
          number_or(p, "h", 1000.0));
      cfg.pair.vdd = number_or(p, "vdd", 1.0);
    }
    if (cfg.pair.dr != 0.0)
      throw InputError(
          "asymmetric resistance unsupported: the decoupled model requires "
          "dr = 0 (equal line resistances)");
    if (auto v = validate(cfg.pair); !v.empty())
      throw InputError("pair: " + v.front());
    resolved["pair"] = {{"r", cfg.pair.r},
                        {"dr", cfg.pair.dr},
                        {"l", cfg.pair.l / kPh},
                        {"dl", cfg.pair.dl},
                        {"lm", cfg.pair.lm / kPh},
                        {"cg", cfg.pair.cg / kFf},
                        {"dc", cfg.pair.dc},
                        {"cc", cfg.pair.cc / kFf},
                        {"h", cfg.pair.h},
                        {"rs_drv", cfg.pair.rs_drv},
                        {"cl_load", cfg.pair.cl_load / kFf},
                        {"vdd", cfg.pair.vdd}};
  }

  if (root.contains("sim")) {
    const json& s = root["sim"];
    check_keys(s, "sim", {"dt", "t_stop", "segment_um"});
    if (s.contains("dt")) cfg.dt = require_number(s, "sim", "dt") * kPs;
    if (s.contains("t_stop")) cfg.t_stop = require_number(s, "sim", "t_stop") * kPs;
    cfg.seg_len_um = number_or(s, "segment_um", 10.0);
    if (!(cfg.seg_len_um > 0)) throw InputError("segment_um must be > 0");
    if (cfg.dt && !(*cfg.dt > 0)) throw InputError("dt must be > 0");
    if (cfg.t_stop && !(*cfg.t_stop > 0)) throw InputError("t_stop must be > 0");
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"samples"});
    cfg.samples = static_cast<int>(number_or(o, "samples", 0.0));
    if (cfg.samples < 0) throw InputError("samples must be >= 0");
  }
  json sim;
  if (cfg.dt) sim["dt"] = *cfg.dt / kPs;
  if (cfg.t_stop) sim["t_stop"] = *cfg.t_stop / kPs;
  sim["segment_um"] = cfg.seg_len_um;
  resolved["sim"] = sim;
  resolved["output"] = {{"samples", cfg.samples}};

  cfg.resolved = std::move(resolved);
  return cfg;
}

}  // namespace xtalk
