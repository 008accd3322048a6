#include <catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "subhc/orbit/witness.hpp"

using namespace subhc;
using Catch::Approx;
using Rational = boost::multiprecision::cpp_rational;

namespace {
constexpr auto B = SpaceKind::bilateral;
constexpr auto U = SpaceKind::unilateral;

const WeightedShiftOperator kHalfTwo(WeightSequence::piecewise(0.5, 2.0), B);
const CoordinateSubspace kFull = CoordinateSubspace::full(B);
const CoordinateSubspace kEven = CoordinateSubspace::residues(B, 2, {0});

SparseVector random_vector(std::mt19937_64& rng, SpaceKind kind, Index lo, Index hi, int terms) {
  SparseVector v(kind);
  for (int i = 0; i < terms; ++i) {
    const Index idx = lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    v.add(idx, static_cast<double>(static_cast<int>(rng() % 9) - 4) / 4.0);
  }
  return v;
}
}  // namespace

// ---------------------------------------------------------------------------
// Orbits

TEST_CASE("orbit: backward annihilation under 2B") {
  const auto o = compute_orbit(OperatorExpr::rolewicz(2.0), SparseVector::basis(U, 5), 10,
                               CoordinateSubspace::full(U));
  REQUIRE(o.records().size() == 11);
  for (const auto& r : o.records()) {
    if (r.n <= 5) {
      CHECK(r.support_size == 1);
      CHECK(r.support_min == 5 - r.n);
      CHECK(r.log_norm == Approx(static_cast<double>(r.n) * std::log(2.0)).margin(1e-14));
    } else {
      CHECK(r.support_size == 0);
      CHECK(r.log_norm == -std::numeric_limits<double>::infinity());
    }
  }
}

TEST_CASE("orbit: constant 2 forward steps and L = 0") {
  const auto t = OperatorExpr::shift(WeightSequence::constant(2.0), B);
  const auto o = compute_orbit(t, SparseVector::basis(B, 0), 3, kFull);
  for (Index n = 1; n <= 3; ++n) {
    const auto& r = o.records()[static_cast<std::size_t>(n)];
    CHECK(r.support_min == n);
    CHECK(r.support_max == n);
    CHECK(std::exp(r.log_norm) == Approx(std::ldexp(1.0, static_cast<int>(n))));
  }
  const auto x = SparseVector::basis(B, 3, 0.25);
  const auto z = compute_orbit(t, x, 0, kFull);
  REQUIRE(z.records().size() == 1);
  CHECK(z.vector_at(0).materialize() == x);
  CHECK_THROWS_AS(compute_orbit(t, x, -1, kFull), std::invalid_argument);
}

TEST_CASE("orbit: distance to the designated subspace") {
  const auto t = OperatorExpr::forward(B);
  const auto o = compute_orbit(t, SparseVector::basis(B, 0, 3.0), 4, kEven);
  for (const auto& r : o.records()) {
    if (r.n % 2 == 0) CHECK(r.log_distance == -std::numeric_limits<double>::infinity());
    else CHECK(r.log_distance == Approx(std::log(3.0)));
  }
}

TEST_CASE("orbit: long orbits stay finite in log scale and match exact products") {
  const auto t = OperatorExpr::shift(WeightSequence::constant(2.0), B);
  const auto o = compute_orbit(t, SparseVector::basis(B, 0), 5000, kFull);
  CHECK(o.records().back().log_norm == Approx(5000 * std::log(2.0)).epsilon(1e-14));
  const auto blocks = OperatorExpr::shift(WeightSequence::blocks(4, {0.5, 2.0}, 0), B);
  const auto ob = compute_orbit(blocks, SparseVector::basis(B, 0), 1000, kFull);
  Rational p = 1;
  const auto& w = std::get<ShiftNode>(blocks.node().v).op.weights();
  for (Index n = 1; n <= 1000; ++n) {
    p *= w(n - 1) == 2.0 ? Rational(2) : Rational(1, 2);
    const double exact = static_cast<double>(boost::multiprecision::numerator(p)) /
                         static_cast<double>(boost::multiprecision::denominator(p));
    if (std::isfinite(exact) && exact > 0) {
      CHECK(ob.records()[static_cast<std::size_t>(n)].log_norm == Approx(std::log(exact)).margin(1e-9));
    }
  }
}

TEST_CASE("orbit: retained checkpoints and on-demand recomputation") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  const SparseVector x = SparseVector::basis(B, -40) + SparseVector::basis(B, 3, -0.5);
  OrbitOptions opt;
  opt.max_retained = 16;
  const auto o = compute_orbit(t, x, 300, kFull, opt);
  CHECK(o.retained().front().first == 0);
  CHECK(o.retained().back().first == 300);
  CHECK(o.retained().size() < 60);
  for (std::size_t i = 1; i < o.retained().size(); ++i) {
    CHECK(o.retained()[i].first > o.retained()[i - 1].first);
  }
  const auto full = compute_orbit(t, x, 300, kFull);
  CHECK(full.retained().size() == 301);
  for (Index n : {0, 1, 7, 77, 123, 299, 300}) {
    const auto a = o.vector_at(n).materialize();
    const auto b = apply_power(t, x, n);
    CHECK(norm(a - b) <= 1e-12 * std::max(1.0, norm(b)));
  }
  CHECK(o.records() == full.records());
  CHECK_THROWS_AS(o.vector_at(301), std::out_of_range);
}

TEST_CASE("orbit: support cap aborts with a diagnostic") {
  const auto t = OperatorExpr::compose(OperatorExpr::forward(B), OperatorExpr::identity());
  const auto sum = OperatorExpr::direct_sum(t, t);
  OrbitOptions opt;
  opt.support_cap = 1;
  const DirectSumVector p{SparseVector::basis(B, 0), SparseVector::basis(B, 0)};
  CHECK_THROWS_AS(compute_orbit(sum, p, 3, DirectSumSubspace{kFull, kFull}, opt), SupportOverflow);
}

// ---------------------------------------------------------------------------
// Density

TEST_CASE("density: the start covers itself at step 0") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  const auto x = SparseVector::basis(B, 2);
  const auto d = density_report(compute_orbit(t, x, 20, kFull), std::vector<SparseVector>{x}, 0.1);
  CHECK(d.coverage == 1.0);
  CHECK(d.entries[0].witness_step == 0);
  CHECK(d.entries[0].best_distance == 0.0);
  CHECK_THROWS_AS(density_report(compute_orbit(t, x, 5, kFull), std::vector<SparseVector>{}, 0.1), PreconditionError);
}

TEST_CASE("density: annihilated orbit covers the zero target") {
  const auto o = compute_orbit(OperatorExpr::rolewicz(2.0), SparseVector::basis(U, 2), 10, CoordinateSubspace::full(U));
  const auto d = density_report(o, std::vector<SparseVector>{SparseVector(U)}, 0.0);
  CHECK(d.coverage == 1.0);
  CHECK(d.entries[0].witness_step == 3);
}

TEST_CASE("density: contracting Rolewicz orbit misses most of the unit net") {
  const auto m = CoordinateSubspace::full(U);
  const SparseVector x = SparseVector::from_sorted(U, {{0, 0.5}, {1, 0.5}, {2, 0.5}, {3, 0.5}});
  const auto o = compute_orbit(OperatorExpr::rolewicz(0.5), x, 1000, m);
  std::vector<SparseVector> unit;
  for (const auto& v : make_net(m, 3, {-1.0, 0.0, 1.0}, 10.0)) {
    if (!v.empty()) unit.push_back(Coeff(1.0 / norm(v)) * v);
  }
  const auto d = density_report(o, unit, 0.5);
  CHECK(d.coverage < 1.0);
  // Oracle: a target can only be covered by an orbit point of norm >= 1/2.
  std::size_t possible = 0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    bool any = false;
    for (Index n = 0; n <= 1000; ++n) {
      const auto y = apply_power(OperatorExpr::rolewicz(0.5), x, n);
      if (norm(y - unit[i]) <= 0.5) any = true;
      if (norm(y) < 1e-3) break;
    }
    possible += any ? 1 : 0;
    CHECK(d.entries[i].covered == any);
  }
  CHECK(d.coverage == Approx(static_cast<double>(possible) / static_cast<double>(unit.size())));
}

TEST_CASE("property: projection law for direct-sum orbits", "[property]") {
  std::mt19937_64 rng(11);
  const auto t1 = OperatorExpr::shift(kHalfTwo);
  const auto t2 = OperatorExpr::shift(WeightSequence::blocks(4, {0.5, 2.0}, 1), B);
  const auto sum = OperatorExpr::direct_sum(t1, t2);
  const auto net = make_net(kEven, 2, {-1.0, 0.0, 1.0}, 10.0);
  for (int run = 0; run < 20; ++run) {
    const DirectSumVector start{random_vector(rng, B, -20, 20, 3), random_vector(rng, B, -20, 20, 3)};
    const auto o = compute_orbit(sum, start, 60, DirectSumSubspace{kFull, kFull});
    const auto [left, right] = project_orbit(o);
    CHECK(left.records().size() == o.records().size());
    std::vector<DirectSumVector> pairs;
    for (const auto& a : net) {
      for (const auto& b : net) pairs.push_back({a, b});
    }
    const auto dp = density_report(o, pairs, 0.5);
    const auto dl = density_report(left, net, 0.5);
    const auto dr = density_report(right, net, 0.5);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& e = dp.entries[i];
      if (!e.covered) continue;
      const auto li = i / net.size(), ri = i % net.size();
      CHECK(distance_to(left.vector_at(e.witness_step), net[li]) <= e.best_distance + 1e-12);
      CHECK(distance_to(right.vector_at(e.witness_step), net[ri]) <= e.best_distance + 1e-12);
      CHECK(dl.entries[li].covered);
      CHECK(dr.entries[ri].covered);
    }
    CHECK(dp.coverage <= std::max(dl.coverage, dr.coverage) + 1e-15);
  }
}

TEST_CASE("project_orbit: equal components and identity on zero") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  const auto e0 = SparseVector::basis(B, 0);
  const auto o = compute_orbit(OperatorExpr::direct_sum(t, t), DirectSumVector{e0, e0}, 30, DirectSumSubspace{kFull, kFull});
  const auto [l, r] = project_orbit(o);
  CHECK(l.records() == r.records());
  const auto oi = compute_orbit(OperatorExpr::direct_sum(t, OperatorExpr::identity()), DirectSumVector{e0, SparseVector(B)},
                                30, DirectSumSubspace{kFull, kFull});
  const auto [li, ri] = project_orbit(oi);
  for (const auto& rec : ri.records()) CHECK(rec.support_size == 0);
  CHECK(li.records() == l.records());
}

// ---------------------------------------------------------------------------
// Witnesses

TEST_CASE("witness: Rolewicz insertion") {
  const auto m = CoordinateSubspace::full(U);
  const auto w = transitivity_witness<SparseVector>(OperatorExpr::rolewicz(2.0), m, SparseVector::basis(U, 0),
                                                    SparseVector::basis(U, 1), 30);
  CHECK(w.err_near == std::ldexp(1.0, -30));
  CHECK(w.err_far == 0.0);
  CHECK(w.invariant_ok);
  CHECK(w.z_in_m);
  CHECK(apply_power(OperatorExpr::rolewicz(2.0), w.z, 30) == SparseVector::basis(U, 1));
  CHECK_THROWS_AS(transitivity_witness<SparseVector>(OperatorExpr::rolewicz(0.0), m, SparseVector::basis(U, 0),
                                                     SparseVector::basis(U, 1), 3),
                  NotInvertible);
  const auto f = OperatorExpr::shift(WeightSequence::constant(2.0), U);
  CHECK_THROWS_AS(transitivity_witness<SparseVector>(f, m, SparseVector::basis(U, 0), SparseVector::basis(U, 1), 3),
                  UnsupportedShape);
}

TEST_CASE("witness: bilateral contracting shift on even indices") {
  const auto e0 = SparseVector::basis(B, 0);
  const auto w = transitivity_witness(kHalfTwo, kEven, e0, e0, 20);
  CHECK(w.err_near == std::ldexp(1.0, -20));
  CHECK(w.err_far == std::ldexp(1.0, -20));
  CHECK(w.invariant_ok);
  CHECK(w.z_in_m);
  const auto odd = transitivity_witness(kHalfTwo, kEven, e0, e0, 3);
  CHECK_FALSE(odd.invariant_ok);
  CHECK_FALSE(odd.z_in_m);
  const auto zero = transitivity_witness(kHalfTwo, kEven, SparseVector(B), SparseVector(B), 7);
  CHECK(zero.z.empty());
  CHECK(zero.err_near == 0.0);
  CHECK(zero.err_far == 0.0);
}

TEST_CASE("property: witness identities are exact for dyadic shifts", "[property]") {
  std::mt19937_64 rng(3);
  const std::vector<double> vals{0.5, 2.0, 0.25, 4.0};
  for (int trial = 0; trial < 300; ++trial) {
    const WeightedShiftOperator t(WeightSequence::piecewise(vals[rng() % 4], vals[rng() % 4]), B);
    const auto e = OperatorExpr::shift(t);
    const auto u = random_vector(rng, B, -10, 10, 3);
    const auto v = random_vector(rng, B, -10, 10, 3);
    const Index n = static_cast<Index>(rng() % 25);
    const auto w = transitivity_witness(t, kFull, u, v, n);
    CHECK(w.z - u == apply_power(e, v, -n));
    CHECK(apply_power(e, w.z, n) - v == apply_power(e, u, n));
    // err_near from the index-shifted backward products over v's support.
    double sq = 0.0;
    for (const auto& [m, c] : v.entries()) {
      sq += std::norm(c) * std::exp(2.0 * shift_power_norm(t, m, n, Direction::backward, BackwardConvention::thm13));
    }
    CHECK(w.err_near == Approx(std::sqrt(sq)).epsilon(1e-12));
  }
}

// ---------------------------------------------------------------------------
// Return sets

TEST_CASE("return set: mixing, parity-restricted and divergent shifts") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  const auto e0 = SparseVector::basis(B, 0);
  const auto r = return_set<SparseVector>(t, kFull, e0, 0.5, e0, 0.5, 100);
  CHECK(r.classification == ReturnClass::cofinite_beyond);
  REQUIRE(r.n0);
  CHECK(*r.n0 == 2);
  CHECK(r.members.size() == 99);
  const auto even = return_set<SparseVector>(t, kEven, e0, 0.5, e0, 0.5, 100);
  CHECK(even.classification == ReturnClass::infinite_to_horizon);
  for (Index n : even.members) CHECK(n % 2 == 0);
  const auto two = return_set<SparseVector>(OperatorExpr::shift(WeightSequence::constant(2.0), B), kFull, e0, 0.5, e0,
                                            0.5, 100);
  CHECK(two.classification == ReturnClass::empty);
  CHECK_THROWS_AS(return_set<SparseVector>(t, kEven, SparseVector::basis(B, 1), 0.5, e0, 0.5, 10), PreconditionError);
  CHECK_THROWS_AS(return_set<SparseVector>(t, kEven, e0, 0.0, e0, 0.5, 10), std::invalid_argument);
}

TEST_CASE("return set: long horizons do not underflow the witness") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  const auto e0 = SparseVector::basis(B, 0);
  const auto r = return_set<SparseVector>(t, kFull, e0, 0.5, e0, 0.5, 3000);
  CHECK(r.members.size() == 2999);
  const auto t3 = OperatorExpr::shift(WeightSequence::piecewise(1.0 / 3.0, 3.0), B);
  const auto s = return_set<DirectSumVector>(OperatorExpr::direct_sum(t, t3), DirectSumSubspace{kFull, kFull},
                                             DirectSumVector{e0, e0}, 0.5, DirectSumVector{e0, e0}, 0.5, 2500);
  CHECK(s.classification == ReturnClass::cofinite_beyond);
}

TEST_CASE("property: return sets respect residue invariance", "[property]") {
  const auto t = OperatorExpr::shift(kHalfTwo);
  for (Index p = 2; p <= 6; ++p) {
    for (Index r0 = 0; r0 < p; ++r0) {
      const auto m = CoordinateSubspace::residues(B, p, {r0});
      const auto c = SparseVector::basis(B, r0);
      const auto rs = return_set<SparseVector>(t, m, c, 0.5, c, 0.5, 120);
      CHECK_FALSE(rs.members.empty());
      for (Index n : rs.members) CHECK(n % p == 0);
    }
  }
}

TEST_CASE("return set: classification calibration") {
  ReturnSet r;
  r.horizon = 100;
  for (Index n = 40; n <= 100; ++n) r.members.push_back(n);
  classify(r);
  CHECK(r.classification == ReturnClass::cofinite_beyond);
  CHECK(*r.n0 == 40);
  r.members = {1, 2, 3};
  classify(r);
  CHECK(r.classification == ReturnClass::finite);
  r.members.clear();
  for (Index n = 3; n <= 100; n += 3) r.members.push_back(n);
  classify(r);
  CHECK(r.classification == ReturnClass::infinite_to_horizon);
  r.calibration.infinite_fraction = 0.5;
  classify(r);
  CHECK(r.classification == ReturnClass::finite);
}

TEST_CASE("return set: transitive tail is contained in the mixing set") {
  const auto e0 = SparseVector::basis(B, 0);
  const auto mix = return_set<SparseVector>(OperatorExpr::shift(kHalfTwo), kFull, e0, 0.5, e0, 0.5, 1500);
  const auto tr = return_set<SparseVector>(OperatorExpr::shift(WeightSequence::blocks(4, {0.5, 2.0}, 0), B), kFull, e0,
                                           0.5, e0, 0.5, 1500);
  CHECK(tr.classification == ReturnClass::infinite_to_horizon);
  REQUIRE(mix.n0);
  for (Index n : tr.members) {
    if (n >= *mix.n0) CHECK(std::binary_search(mix.members.begin(), mix.members.end(), n));
  }
}

// ---------------------------------------------------------------------------
// Commutants

TEST_CASE("commutant: powers, scalars and the index shift") {
  const auto t = OperatorExpr::forward(B);
  const SparseVector x = SparseVector::from_sorted(B, {{-12, 1.0}, {-6, 0.5}, {-2, -1.0}});
  const auto o = compute_orbit(t, x, 40, kEven);
  const auto net = make_net(kEven, 2, {-1.0, 0.0, 1.0}, 10.0);
  const auto base = density_report(o, net, 0.5);

  const auto p3 = map_orbit_by_commutant(OperatorExpr::power(t, 3), o, net, 0.5);
  CHECK(p3.commutation_residual == 0.0);
  for (Index n = 0; n + 3 <= 40; ++n) {
    CHECK(p3.orbit.vector_at(n).materialize() == o.vector_at(n + 3).materialize());
  }
  CHECK(p3.image.describe() == kEven.translated(3).describe());

  const auto two = map_orbit_by_commutant(OperatorExpr::scalar(2.0, OperatorExpr::identity()), o, net, 0.5);
  for (std::size_t i = 0; i < net.size(); ++i) {
    CHECK(two.density.entries[i].best_distance == 2.0 * base.entries[i].best_distance);
    CHECK(two.density.entries[i].witness_step == base.entries[i].witness_step);
  }

  const auto f = map_orbit_by_commutant(OperatorExpr::forward(B), o, net, 0.5);
  for (Index i = -10; i <= 10; ++i) CHECK(f.image.contains(i) == (floor_mod(i, 2) == 1));
  for (const auto& y : f.targets) CHECK(f.image.contains(y));
  CHECK(f.transport_residual == 0.0);

  const auto weighted = OperatorExpr::shift(kHalfTwo);
  CHECK_THROWS_AS(map_orbit_by_commutant(weighted, o, net, 0.5), PreconditionError);
  const auto id = map_orbit_by_commutant(OperatorExpr::compose(t, OperatorExpr::backward(B)), o, net, 0.5);
  CHECK(id.orbit.records() == o.records());
}
