#pragma once

#include <string>
#include <vector>

namespace xtalk {

// Layout view of a victim net with one aggressor coupled over part of it.
// Lengths in um; per-unit-length values in ohm/um and F/um; lumped values in
// ohm and F; times in seconds. Voltages are fractions of vdd throughout.
struct VictimNetGeometry {
  double ls_len = 0.0;  // um before the coupled span
  double lc_len = 0.0;  // um of the coupled span
  double le_len = 0.0;  // um after the coupled span
  double r_pul = 0.0;   // ohm/um
  double c_pul = 0.0;   // F/um to ground
  double cc_pul = 0.0;  // F/um to the aggressor, over lc_len only
  double rd = 0.0;      // victim driver effective resistance, ohm
  double cload = 0.0;   // receiver input capacitance, F
  double tr = 0.0;      // aggressor transition time, s
  double vdd = 1.0;

  double total_len() const { return ls_len + lc_len + le_len; }
};

// Wire totals split at the coupling node (center of the coupled span).
struct LumpedVictimParams {
  double rs_up = 0.0;    // upstream resistance, ohm
  double cs_up = 0.0;    // upstream capacitance, F
  double re_down = 0.0;  // downstream resistance, ohm
  double ce_down = 0.0;  // downstream capacitance, F
  double cx = 0.0;       // total coupling capacitance, F
};

// Empty when all invariants hold, otherwise one message per violation.
std::vector<std::string> validate(const VictimNetGeometry& g);

// Splits wire R/C at ls + lc/2 from the source and lumps the coupling C.
// Throws NoCouplingError when lc_len = 0, InputError on other violations.
LumpedVictimParams derive_lumped(const VictimNetGeometry& g);

}  // namespace xtalk
