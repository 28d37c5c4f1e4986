#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "limprob/convergence.hpp"

using namespace limprob;

namespace {
const Rational kHalf(1, 2);
}

TEST_CASE("probability paths") {
  SECTION("record index through the growing ray, exact") {
    auto family = record_index_family<Rational>(kHalf);
    auto path = probability_path(family, ray_growth_rule(), 3);
    REQUIRE(path == std::vector<Rational>{Rational(0), Rational(1, 4), Rational(3, 8)});
    // closed form q - q^n, strictly increasing
    auto longer = probability_path(family, ray_growth_rule(), 40);
    for (int n = 1; n <= 40; ++n)
      REQUIRE(longer[n - 1] == kHalf - pow_rational(kHalf, n));
    for (int n = 1; n < 40; ++n) REQUIRE(longer[n - 1] < longer[n]);
  }
  SECTION("walking dirac through its own singleton: all ones") {
    auto path = probability_path(dirac_walk_family<Rational>(), singleton_shift_rule(), 12);
    for (const auto& v : path) REQUIRE(v == 1);
  }
  SECTION("shrinking dirac against a fixed ray: all zeros") {
    auto rule = identity_rule(EventSet::ray_below(ExtendedReal(0), true));
    auto path = probability_path(dirac_recip_family<Rational>(), rule, 12);
    for (const auto& v : path) REQUIRE(v == 0);
  }
}

TEST_CASE("numeric limit of tail windows") {
  std::vector<double> geometric, complement_path, alternating;
  const double q = 0.5;
  for (int n = 1; n <= 200; ++n) {
    geometric.push_back(q - std::pow(q, n));
    complement_path.push_back(1 - q + std::pow(q, n));
    alternating.push_back(n % 2);
  }
  auto a = numeric_limit(geometric);
  REQUIRE(a.has_value());
  CHECK(*a == Catch::Approx(q).margin(1e-12));
  auto b = numeric_limit(complement_path);
  REQUIRE(b.has_value());
  CHECK(*b == Catch::Approx(1 - q).margin(1e-12));
  CHECK_FALSE(numeric_limit(alternating).has_value());
  CHECK_THROWS_AS(numeric_limit(std::vector<double>{}), std::invalid_argument);

  // short sequences use what they have
  std::vector<double> constant(5, 0.25);
  auto c = numeric_limit(constant);
  REQUIRE(c.has_value());
  CHECK(*c == 0.25);
}

TEST_CASE("tightness verdicts") {
  auto bernoulli = bernoulli_marginal_family<double>(kHalf);
  auto maxima = running_max_family<double>(kHalf);
  auto records = record_index_family<double>(kHalf);
  auto walk = dirac_walk_family<double>();

  for (double eps : {0.1, 0.01}) {
    auto bv = tightness_check(bernoulli, eps, 500, 64.0);
    REQUIRE(bv.tight);
    CHECK(format_event(bv.interval) == "[0,1]");
    auto gv = tightness_check(maxima, eps, 500, 64.0);
    REQUIRE(gv.tight);
    CHECK(format_event(gv.interval) == "[0,1]");
  }

  const double eps = 0.5;  // 1 - q
  auto rv = tightness_check(records, eps, 500, 64.0);
  REQUIRE_FALSE(rv.tight);
  REQUIRE_FALSE(rv.witnesses.empty());
  for (const auto& w : rv.witnesses) {
    REQUIRE(w.mass_outside >= eps);
    // the witness index carries mass 1 - q + q^n beyond the bound; the strict
    // excess over 1 - q only survives in exact arithmetic
    Rational top = record_index<Rational>(kHalf, w.n).mass_at(ExtendedReal(w.n));
    CHECK(top == 1 - kHalf + pow_rational(kHalf, w.n));
    CHECK(top > 1 - kHalf);
    CHECK(records(w.n).mass_at(ExtendedReal(w.n)) == Catch::Approx(to_double(top)));
    CHECK(double(w.n) > w.bound);
  }

  auto wv = tightness_check(walk, eps, 500, 64.0);
  REQUIRE_FALSE(wv.tight);
  for (const auto& w : wv.witnesses) REQUIRE(w.mass_outside == 1.0);

  CHECK_THROWS_AS(tightness_check(bernoulli, 0.0, 10, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(tightness_check(bernoulli, 1.0, 10, 8.0), std::invalid_argument);
}

TEST_CASE("tightness is monotone in epsilon") {
  auto bernoulli = bernoulli_marginal_family<double>(Rational(3, 10));
  auto shrink = dirac_recip_family<double>();
  for (auto* family : {&bernoulli, &shrink}) {
    auto strict = tightness_check(*family, 0.01, 200, 64.0);
    REQUIRE(strict.tight);
    for (double eps : {0.02, 0.1, 0.5}) {
      auto relaxed = tightness_check(*family, eps, 200, 64.0);
      REQUIRE(relaxed.tight);
      // the strict interval still suffices at the larger epsilon
      const auto& comp = strict.interval.components()[0];
      for (int n = 1; n <= 200; ++n) {
        auto m = (*family)(n);
        double outside = 1.0;
        for (const auto& a : m.atoms())
          if (strict.interval.contains(a.point)) outside -= a.mass;
        REQUIRE(outside < eps);
      }
      // and the relaxed interval nests inside the strict one
      REQUIRE(relaxed.interval.subset_of(strict.interval));
      (void)comp;
    }
  }
}

TEST_CASE("escape accounting") {
  auto records = record_index_family<double>(kHalf);
  auto account = escaped_mass(records);
  CHECK(account.settled);
  CHECK(account.mass_to_plus_inf == Catch::Approx(1.0).margin(1e-9));
  CHECK(account.mass_to_minus_inf == 0.0);
  double retained = 0.0;
  for (const auto& a : account.retained) retained += a.mass;
  CHECK(account.mass_to_plus_inf + account.mass_to_minus_inf + retained ==
        Catch::Approx(1.0).margin(1e-9));

  auto walk_account = escaped_mass(dirac_walk_family<double>());
  CHECK(walk_account.settled);
  CHECK(walk_account.mass_to_plus_inf == 1.0);
  CHECK(walk_account.retained.empty());

  auto bernoulli_account = escaped_mass(bernoulli_marginal_family<double>(kHalf));
  CHECK(bernoulli_account.mass_to_plus_inf == 0.0);
  CHECK(bernoulli_account.mass_to_minus_inf == 0.0);
  REQUIRE(bernoulli_account.retained.size() == 2);
  CHECK(bernoulli_account.retained[0].mass == 0.5);

  std::vector<std::pair<int, double>> bad = {{10, 4.0}, {5, 8.0}};
  CHECK_THROWS_AS(escaped_mass(records, bad), std::invalid_argument);
}

TEST_CASE("weak limit verification") {
  auto shrink = dirac_recip_family<double>();
  CHECK(verify_weak_limit(shrink, dirac<double>(ExtendedReal(0))).verdict ==
        LimitVerdict::confirmed);

  auto maxima = running_max_family<double>(kHalf);
  CHECK(verify_weak_limit(maxima, dirac<double>(ExtendedReal(1))).verdict ==
        LimitVerdict::confirmed);

  auto records = record_index_family<double>(kHalf);
  for (auto candidate : {dirac<double>(ExtendedReal(0)), dirac<double>(ExtendedReal(5)),
                         bernoulli_marginal<double>(kHalf, 1)}) {
    auto check = verify_weak_limit(records, candidate);
    REQUIRE(check.verdict == LimitVerdict::refuted);
    REQUIRE_FALSE(check.witness.empty());
  }

  CHECK_THROWS_AS(
      verify_weak_limit(shrink, dirac<double>(ExtendedReal::plus_infinity())),
      std::invalid_argument);
}

TEST_CASE("declared limits confirm; perturbed candidates refute") {
  auto families = std::vector<MeasureFamily<double>>{
      bernoulli_marginal_family<double>(Rational(3, 10)),
      running_max_family<double>(Rational(3, 10)),
      dirac_recip_family<double>(),
  };
  for (const auto& family : families) {
    REQUIRE(family.limit_on_R.has_value());
    CHECK(verify_weak_limit(family, *family.limit_on_R).verdict == LimitVerdict::confirmed);

    // shift 0.05 of mass onto a fresh point
    std::vector<DiscreteMeasure<double>::Atom> atoms = family.limit_on_R->atoms();
    atoms[0].mass -= 0.05;
    atoms.push_back({ExtendedReal(Rational(17, 2)), 0.05});
    auto perturbed = DiscreteMeasure<double>(std::move(atoms));
    CHECK(verify_weak_limit(family, perturbed).verdict == LimitVerdict::refuted);
  }
}

TEST_CASE("binomial scheme approaches the truncated poisson") {
  auto family = binomial_family<double>(Rational(1));
  REQUIRE(family.limit_on_R.has_value());
  CHECK(verify_weak_limit(family, *family.limit_on_R, 1000, 1e-3).verdict ==
        LimitVerdict::confirmed);

  double previous = 1.0;
  for (int n : {10, 100, 1000}) {
    double tv = tv_distance(family(n), *family.limit_on_R);
    REQUIRE(tv <= 1.0 / n);
    REQUIRE(tv < previous);
    previous = tv;
  }
}

TEST_CASE("extended limits") {
  auto records = record_index_family<double>(kHalf);
  auto mu_limit = extended_limit(records);
  REQUIRE(mu_limit.has_value());
  CHECK(*mu_limit == dirac<double>(ExtendedReal::plus_infinity()));
  CHECK(mu_limit->mass_of(EventSet::full_line(Universe::real_line)) == 0.0);

  auto walk_limit = extended_limit(dirac_walk_family<double>());
  REQUIRE(walk_limit.has_value());
  CHECK(*walk_limit == dirac<double>(ExtendedReal::plus_infinity()));

  auto bern = bernoulli_marginal_family<double>(Rational(3, 10));
  auto bern_limit = extended_limit(bern);
  REQUIRE(bern_limit.has_value());
  CHECK(*bern_limit == *bern.limit_on_R);

  // total extended mass is 1 including the atoms at the infinities
  for (const auto* limit : {&*mu_limit, &*walk_limit, &*bern_limit}) {
    double total = 0.0;
    for (const auto& a : limit->atoms()) total += a.mass;
    REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
  }

  // slow-mixing parameter still lands on the dirac at +inf
  auto slow = extended_limit(record_index_family<double>(Rational(9, 10)), 200, 1e-6);
  REQUIRE(slow.has_value());
  CHECK(slow->mass_at(ExtendedReal::plus_infinity()) == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("coincidence classification of the six canonical pairs") {
  const int N = 200;
  const double tol = 1e-9;

  SECTION("walking dirac through its own singleton") {
    auto report = coincidence_report(dirac_walk_family<double>(), singleton_shift_rule(), N, tol);
    CHECK(report.classification == Coincidence::limit_not_a_probability);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == 1.0);
    CHECK(std::holds_alternative<LimitInRbarOnly>(report.limit_event_result));
    CHECK_FALSE(report.limit_measure_R.has_value());
    REQUIRE(report.measure_side_Rbar.has_value());
    CHECK(*report.measure_side_Rbar == 1.0);
  }
  SECTION("shrinking dirac against the fixed ray (-inf,0]") {
    auto rule = identity_rule(EventSet::ray_below(ExtendedReal(0), true));
    auto report = coincidence_report(dirac_recip_family<double>(), rule, N, tol);
    CHECK(report.classification == Coincidence::mismatch);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == 0.0);
    REQUIRE(report.measure_side_R.has_value());
    CHECK(*report.measure_side_R == 1.0);
  }
  SECTION("shrinking dirac through the walking singleton") {
    auto report = coincidence_report(dirac_recip_family<double>(), singleton_shift_rule(), N, tol);
    CHECK(report.classification == Coincidence::limit_not_a_probability);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == 0.0);
    // the limit measure on R exists; the event limit does not stay in R
    CHECK(report.limit_measure_R.has_value());
    CHECK_FALSE(limit_is_in_R(report.limit_event_result));
  }
  SECTION("record index through its own top atom") {
    auto report =
        coincidence_report(record_index_family<double>(kHalf), singleton_shift_rule(), N, tol);
    CHECK(report.classification == Coincidence::limit_not_a_probability);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == Catch::Approx(0.5).margin(1e-9));
  }
  SECTION("record index through the growing ray") {
    auto report =
        coincidence_report(record_index_family<double>(kHalf), ray_growth_rule(), N, tol);
    CHECK(report.classification == Coincidence::limit_not_a_probability);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(report.measure_side_Rbar.has_value());
    CHECK(*report.measure_side_Rbar == 0.0);
  }
  SECTION("single trial against its fixed singleton") {
    auto rule = identity_rule(EventSet::singleton(ExtendedReal(0)));
    auto report =
        coincidence_report(bernoulli_marginal_family<double>(kHalf), rule, N, tol);
    CHECK(report.classification == Coincidence::coincides);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(report.measure_side_R.has_value());
    CHECK(*report.measure_side_R == 0.5);
  }
  SECTION("running maximum against its fixed singleton") {
    auto rule = identity_rule(EventSet::singleton(ExtendedReal(0)));
    auto report = coincidence_report(running_max_family<double>(kHalf), rule, N, tol);
    CHECK(report.classification == Coincidence::coincides);
    REQUIRE(report.numeric_limit.has_value());
    CHECK(*report.numeric_limit == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(report.measure_side_R.has_value());
    CHECK(*report.measure_side_R == 0.0);
  }
  SECTION("oscillating path yields no numeric limit") {
    // alternate between two fixed singletons so the path flips q, 1-q, ...
    EventRule flip;
    flip.name = "flip";
    flip.seed = EventSet::singleton(ExtendedReal(0));
    flip.closed_form = [](int n) {
      return EventSet::singleton(ExtendedReal(n % 2 == 1 ? 0 : 1));
    };
    auto report = coincidence_report(bernoulli_marginal_family<double>(Rational(3, 10)), flip,
                                     N, tol);
    CHECK(report.classification == Coincidence::no_numeric_limit);
    CHECK_FALSE(report.numeric_limit.has_value());
  }
}

TEST_CASE("identity report: both routes agree exactly, limits split") {
  auto report = inconsistency_demo(kHalf, 50);
  REQUIRE(report.rows.size() == 50);
  for (const auto& row : report.rows) {
    REQUIRE(row.residual == 0);
    REQUIRE(row.lhs == kHalf - pow_rational(kHalf, row.n));
    REQUIRE(row.rhs == row.lhs);
  }
  REQUIRE(report.left_numeric_limit.has_value());
  REQUIRE(report.right_numeric_limit.has_value());
  CHECK(*report.left_numeric_limit == Catch::Approx(0.5).margin(1e-9));
  CHECK(*report.right_numeric_limit == Catch::Approx(0.5).margin(1e-9));
  CHECK(report.right_side_classification == Coincidence::limit_not_a_probability);
  CHECK(report.extended_trial_fail_mass == Catch::Approx(0.5).margin(1e-12));
  CHECK(report.extended_record_mass_on_R == 0.0);

  for (int tenths = 1; tenths <= 9; ++tenths) {
    auto r = inconsistency_demo(Rational(tenths, 10), 50, 1e-6);
    for (const auto& row : r.rows) REQUIRE(row.residual == 0);
  }
}

TEST_CASE("report json is stable and complete") {
  auto report = coincidence_report(record_index_family<double>(kHalf), ray_growth_rule());
  auto j = to_json(report);
  CHECK(j["classification"] == "limit_not_a_probability");
  CHECK(j["numeric_limit"].get<double>() == Catch::Approx(0.5).margin(1e-9));
  CHECK(j["measure_side_R"].is_null());
  CHECK(j["measure_side_Rbar"].get<double>() == 0.0);
  CHECK(j["limit_event"]["kind"] == "in_R");
  CHECK(j.dump() == to_json(coincidence_report(record_index_family<double>(kHalf),
                                               ray_growth_rule()))
                        .dump());

  auto tv = to_json(tightness_check(record_index_family<double>(kHalf), 0.5, 100, 16.0));
  CHECK(tv["outcome"] == "not_tight");
  CHECK(tv["witnesses"].size() >= 1);

  auto ev = to_json(escaped_mass(record_index_family<double>(kHalf)));
  CHECK(ev["mass_to_plus_inf"].get<double>() == Catch::Approx(1.0).margin(1e-9));

  auto iv = to_json(inconsistency_demo(kHalf, 5));
  CHECK(iv["rows"].size() == 5);
  CHECK(iv["rows"][2]["residual"] == "0");
  CHECK(iv["extended_pair"]["trial_fail_mass_at_0"].get<double>() ==
        Catch::Approx(0.5).margin(1e-12));
  CHECK(iv["extended_pair"]["record_mass_on_R"].get<double>() == 0.0);
}
