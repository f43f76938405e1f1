#pragma once

#include <stdexcept>
#include <string>

namespace xtalk {

// Bad inputs or parameters. The CLI maps this family to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures during analysis. The CLI maps this family to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lc_len = 0: no coupling, the reduced noise model is undefined.
struct NoCouplingError : InputError {
  NoCouplingError() : InputError("no coupling: lc_len must be > 0") {}
};

// noise_width called with a threshold the pulse never reaches.
struct ThresholdAbovePeakError : InputError {
  explicit ThresholdAbovePeakError(double vt, double vmax)
      : InputError("threshold above peak: vt=" + std::to_string(vt) +
                    " >= vmax=" + std::to_string(vmax)) {}
};

// The decoupled closed forms require equal line resistances (dr = 0).
struct AsymmetricResistanceError : InputError {
  AsymmetricResistanceError()
      : InputError("asymmetric resistance unsupported: decoupling requires dr = 0") {}
};

// TWA fast path refused: the mode is RC-dominated and wave arrivals are not
// meaningful. Callers should use the ladder method.
struct TwaOverdampedError : InputError {
  explicit TwaOverdampedError(double zeta)
      : InputError("twa rejected: mode is overdamped (zeta=" +
                    std::to_string(zeta) + " > 1.5); use the ladder method") {}
};

struct SingularMnaError : NumericalError {
  explicit SingularMnaError(const std::string& what) : NumericalError(what) {}
};

struct DivergedError : NumericalError {
  explicit DivergedError(const std::string& what) : NumericalError(what) {}
};

}  // namespace xtalk
