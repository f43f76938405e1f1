#pragma once

#include <string>
#include <vector>

namespace xtalk {

// Two coupled lines over length h. Line 1 carries the (1+d*) values and line
// 2 the (1-d*) values; line 1 is the aggressor in all built netlists.
// Units: ohm/um, H/um, F/um, um, ohm, F.
struct CoupledRlcPair {
  double r = 0.0;    // ohm/um, each line (dr must stay 0 for the closed forms)
  double dr = 0.0;
  double l = 0.0;    // H/um self-inductance
  double dl = 0.0;
  double lm = 0.0;   // H/um mutual inductance
  double cg = 0.0;   // F/um ground capacitance
  double dc = 0.0;
  double cc = 0.0;   // F/um coupling capacitance
  double h = 0.0;    // um
  double rs_drv = 0.0;   // ohm, driver on each line
  double cl_load = 0.0;  // F, load on each line
  double vdd = 1.0;
};

std::vector<std::string> validate(const CoupledRlcPair& p);

}  // namespace xtalk
