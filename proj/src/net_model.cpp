#include "xtalk/net_model.hpp"

#include <cmath>

#include "xtalk/errors.hpp"

namespace xtalk {

std::vector<std::string> validate(const VictimNetGeometry& g) {
  std::vector<std::string> v;
  if (!(g.ls_len >= 0)) v.push_back("ls_len must be >= 0");
  if (!(g.lc_len > 0)) v.push_back("lc_len must be > 0");
  if (!(g.le_len >= 0)) v.push_back("le_len must be >= 0");
  if (!(g.r_pul >= 0)) v.push_back("r_pul must be >= 0");
  if (!(g.c_pul >= 0)) v.push_back("c_pul must be >= 0");
  if (!(g.cc_pul >= 0)) v.push_back("cc_pul must be >= 0");
  if (!(g.rd > 0)) v.push_back("rd must be > 0");
  if (!(g.cload >= 0)) v.push_back("cload must be >= 0");
  if (!(g.tr > 0)) v.push_back("tr must be > 0");
  if (!(g.vdd > 0)) v.push_back("vdd must be > 0");
  return v;
}

LumpedVictimParams derive_lumped(const VictimNetGeometry& g) {
  if (g.lc_len <= 0) throw NoCouplingError();
  auto violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "invalid geometry:";
    for (const auto& s : violations) msg += " " + s + ";";
    throw InputError(msg);
  }

  const double total = g.total_len();
  const double x2 = g.ls_len + g.lc_len / 2.0;  // coupling node position

  LumpedVictimParams p;
  p.rs_up = g.r_pul * x2;
  p.cs_up = g.c_pul * x2;
  // complements off the totals so upstream + downstream reproduces them
  p.re_down = g.r_pul * total - p.rs_up;
  p.ce_down = g.c_pul * total - p.cs_up;
  p.cx = g.cc_pul * g.lc_len;
  return p;
}

}  // namespace xtalk
