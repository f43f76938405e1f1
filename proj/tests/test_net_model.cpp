#include <doctest.h>

#include "oracles.hpp"
#include "xtalk/errors.hpp"
#include "xtalk/net_model.hpp"

using namespace xtalk;

namespace {

VictimNetGeometry base_geometry() {
  VictimNetGeometry g;
  g.ls_len = 100.0;
  g.lc_len = 200.0;
  g.le_len = 100.0;
  g.r_pul = 0.1;
  g.c_pul = 0.2e-15;
  g.cc_pul = 0.25e-15;
  g.rd = 100.0;
  g.cload = 5e-15;
  g.tr = 100e-12;
  return g;
}

}  // namespace

TEST_CASE("derive_lumped splits at the center of the coupled span") {
  const auto p = derive_lumped(base_geometry());
  // x2 = 100 + 200/2 = 200 um
  CHECK(p.rs_up == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(p.re_down == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(p.cs_up == doctest::Approx(40e-15).epsilon(1e-12));
  CHECK(p.ce_down == doctest::Approx(40e-15).epsilon(1e-12));
  CHECK(p.cx == doctest::Approx(50e-15).epsilon(1e-12));
}

TEST_CASE("derive_lumped rejects a net with no coupling") {
  auto g = base_geometry();
  g.lc_len = 0.0;
  CHECK_THROWS_AS(derive_lumped(g), NoCouplingError);
}

TEST_CASE("coupling over the whole net splits symmetrically") {
  auto g = base_geometry();
  g.ls_len = 0.0;
  g.le_len = 0.0;
  const auto p = derive_lumped(g);
  CHECK(p.rs_up == doctest::Approx(p.re_down).epsilon(1e-12));
  CHECK(p.cs_up == doctest::Approx(p.ce_down).epsilon(1e-12));
}

TEST_CASE("derive_lumped conserves wire totals") {
  oracles::TestRng rng(11);
  for (int i = 0; i < 200; ++i) {
    VictimNetGeometry g = base_geometry();
    g.ls_len = rng.uniform(0, 2000);
    g.lc_len = rng.uniform(1, 2000);
    g.le_len = rng.uniform(0, 2000);
    g.r_pul = rng.uniform(0.01, 0.5);
    g.c_pul = rng.uniform(0.01, 0.5) * 1e-15;
    g.cc_pul = rng.uniform(0.01, 0.5) * 1e-15;
    const auto p = derive_lumped(g);
    CHECK(p.rs_up + p.re_down ==
          doctest::Approx(g.r_pul * g.total_len()).epsilon(1e-15));
    CHECK(p.cs_up + p.ce_down ==
          doctest::Approx(g.c_pul * g.total_len()).epsilon(1e-15));
    CHECK(p.rs_up >= 0);
    CHECK(p.re_down >= 0);
  }
}

TEST_CASE("derive_lumped is linear in the per-unit-length parameters") {
  auto g = base_geometry();
  const auto p1 = derive_lumped(g);
  g.c_pul *= 2.0;
  const auto p2 = derive_lumped(g);
  CHECK(p2.cs_up == doctest::Approx(2.0 * p1.cs_up).epsilon(1e-12));
  CHECK(p2.ce_down == doctest::Approx(2.0 * p1.ce_down).epsilon(1e-12));
  CHECK(p2.rs_up == p1.rs_up);
  CHECK(p2.re_down == p1.re_down);
}

TEST_CASE("validate reports one entry per violation") {
  CHECK(validate(base_geometry()).empty());

  auto g = base_geometry();
  g.tr = 0.0;
  auto v = validate(g);
  REQUIRE(v.size() == 1);
  CHECK(v.front() == "tr must be > 0");

  g = base_geometry();
  g.lc_len = -5.0;
  v = validate(g);
  REQUIRE(v.size() == 1);
  CHECK(v.front() == "lc_len must be > 0");

  g = base_geometry();
  g.tr = 0.0;
  g.rd = -1.0;
  CHECK(validate(g).size() == 2);
}
