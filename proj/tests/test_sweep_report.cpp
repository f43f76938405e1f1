#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "xtalk/errors.hpp"
#include "xtalk/rlc_decouple.hpp"
#include "xtalk/sweep_report.hpp"

using namespace xtalk;

TEST_CASE("corpus draws are reproducible from the seed") {
  Corpus c;
  c.kind = "rc";
  c.seed = 7;
  c.count = 5;
  const auto a = draw_rc_cases(c);
  const auto b = draw_rc_cases(c);
  REQUIRE(a.size() == 5);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ls_len == b[i].ls_len);
    CHECK(a[i].tr == b[i].tr);
    CHECK(a[i].cc_pul == b[i].cc_pul);
  }
  c.seed = 8;
  const auto d = draw_rc_cases(c);
  CHECK(d[0].ls_len != a[0].ls_len);

  c.kind = "rlc";
  const auto p = draw_rlc_cases(c);
  const auto q = draw_rlc_cases(c);
  for (size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i].lm == q[i].lm);
    CHECK(p[i].dc == q[i].dc);
    CHECK(validate(p[i]).empty());
  }
}

TEST_CASE("symmetric corpora force the asymmetries to zero") {
  Corpus c;
  c.kind = "rlc";
  c.count = 4;
  c.rlc.symmetric = true;
  for (const auto& p : draw_rlc_cases(c)) {
    CHECK(p.dc == 0.0);
    CHECK(p.dl == 0.0);
  }
}

TEST_CASE("stats aggregation and the worst case") {
  std::vector<CaseError> cases;
  cases.push_back({0, 1.0, 1.0, 0.05, false, ""});
  cases.push_back({1, 1.0, 1.0, 0.20, false, ""});
  cases.push_back({2, 0.0, 0.0, 0.0, true, "floor"});
  const auto s = make_stats(std::move(cases));
  CHECK(s.n_cases == 2);
  CHECK(s.n_excluded == 1);
  CHECK(s.mean_abs_err == doctest::Approx(0.125));
  CHECK(s.max_abs_err == doctest::Approx(0.20));
  CHECK(s.worst_case_id == 1);
  CHECK(s.mean_abs_err <= s.max_abs_err);
}

TEST_CASE("identical seeds give identical corpus statistics") {
  Corpus c;
  c.kind = "rc";
  c.seed = 3;
  c.count = 3;
  const auto r1 = run_rc_corpus(c);
  const auto r2 = run_rc_corpus(c);
  CHECK(r1.peak.mean_abs_err == r2.peak.mean_abs_err);
  CHECK(r1.width.mean_abs_err == r2.width.mean_abs_err);
  CHECK(r1.peak.n_cases == 3);
  CHECK(r1.peak.mean_abs_err < 0.5);  // sane model error on a tiny corpus

  std::ostringstream a, b;
  emit_csv(r1.peak, a);
  emit_csv(r2.peak, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("decoupled draws fall below the oracle floor and are excluded") {
  Corpus c;
  c.kind = "rlc";
  c.count = 2;
  c.rlc.kc = {0.0, 0.0};
  c.rlc.kl = {0.0, 0.0};
  c.rlc.symmetric = true;
  const auto s = run_rlc_corpus(c);
  CHECK(s.n_excluded == 2);
  CHECK(s.n_cases == 0);
}

TEST_CASE("small rlc corpus runs clean") {
  Corpus c;
  c.kind = "rlc";
  c.seed = 5;
  c.count = 2;
  const auto s = run_rlc_corpus(c);
  CHECK(s.n_cases == 2);
  CHECK(s.max_abs_err < 1.0);
  for (const auto& ce : s.cases) CHECK(ce.oracle > 0);
}

TEST_CASE("corpus kind mismatches are rejected") {
  Corpus c;
  c.kind = "rc";
  CHECK_THROWS_AS(run_rlc_corpus(c), InputError);
  c.kind = "rlc";
  CHECK_THROWS_AS(run_rc_corpus(c), InputError);
  c.kind = "rc";
  c.count = 0;
  CHECK_THROWS_AS(run_rc_corpus(c), InputError);
}

TEST_CASE("sweep csv schema and determinism") {
  std::vector<SweepRow> rows;
  rows.push_back({"kl", 0.3, 0.123456789123, 0.2, 0.1, false, ""});
  rows.push_back({"kl", 0.9, 0, 0, 0, true, "bad"});  // rejected rows are dropped
  std::ostringstream a, b;
  emit_csv(rows, a);
  emit_csv(rows, b);
  CHECK(a.str() == b.str());
  CHECK(a.str() ==
        "param,value,model_peak,oracle_peak,rel_err\n"
        "kl,0.3,0.123456789,0.2,0.1\n");

  std::ostringstream empty;
  emit_csv(std::vector<SweepRow>{}, empty);
  CHECK(empty.str() == "param,value,model_peak,oracle_peak,rel_err\n");
}

TEST_CASE("sweep rejects out-of-range grid points") {
  SweepConfig fixed;
  const auto rows = sweep("zeta", {-2.0}, fixed);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rejected);

  VictimNetGeometry g;
  g.ls_len = 100;
  g.lc_len = 200;
  g.le_len = 100;
  g.r_pul = 0.1;
  g.c_pul = 0.2e-15;
  g.cc_pul = 0.25e-15;
  g.rd = 100;
  g.cload = 5e-15;
  g.tr = 100e-12;
  SweepConfig rc;
  rc.rc_base = g;
  const auto bad = sweep("coupling-position", {1.5}, rc);
  CHECK(bad[0].rejected);

  CHECK_THROWS_AS(sweep("tr", {1e-10}, fixed), InputError);  // no rc base
  CHECK_THROWS_AS(sweep("bogus", {1.0}, fixed), InputError);
}

TEST_CASE("rc sweeps run the full pipeline per point") {
  VictimNetGeometry g;
  g.ls_len = 100;
  g.lc_len = 200;
  g.le_len = 100;
  g.r_pul = 0.1;
  g.c_pul = 0.2e-15;
  g.cc_pul = 0.25e-15;
  g.rd = 100;
  g.cload = 5e-15;
  g.tr = 100e-12;
  SweepConfig fixed;
  fixed.rc_base = g;

  const auto rows = sweep("tr", {5e-11, 2e-10}, fixed);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(!r.rejected);
    CHECK(r.model_peak > 0);
    CHECK(r.oracle_peak > 0);
    CHECK(r.rel_err < 0.3);
  }
  CHECK(rows[0].model_peak > rows[1].model_peak);  // slower ramp, less noise

  const auto pos = sweep("coupling-position", {0.1, 0.9}, fixed);
  for (const auto& r : pos) CHECK(!r.rejected);
  // near-receiver coupling hurts more than near-driver coupling
  CHECK(pos[1].model_peak > pos[0].model_peak);
}

TEST_CASE("rlc sweep reports the realized zeta") {
  SweepConfig fixed;
  const auto rows = sweep("zeta", {0.5}, fixed);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].rejected);
  CHECK(rows[0].value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rows[0].model_peak > 0);
  CHECK(rows[0].oracle_peak > 0);
}

TEST_CASE("csv file emission round-trips") {
  std::vector<SweepRow> rows;
  rows.push_back({"ct", 0.05, 0.11, 0.12, 0.0833333333, false, ""});
  const std::string path = "sweep_roundtrip_test.csv";
  emit_csv_file(rows, path);
  std::ifstream f(path);
  REQUIRE(f.good());
  std::string header, line;
  std::getline(f, header);
  CHECK(header == "param,value,model_peak,oracle_peak,rel_err");
  std::getline(f, line);
  std::stringstream ss(line);
  std::string tok;
  std::getline(ss, tok, ',');
  CHECK(tok == "ct");
  std::getline(ss, tok, ',');
  CHECK(std::stod(tok) == doctest::Approx(0.05));
  std::getline(ss, tok, ',');
  CHECK(std::stod(tok) == doctest::Approx(0.11));
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_csv_file(rows, "/nonexistent_dir/x.csv"), InputError);
}
