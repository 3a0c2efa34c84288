#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oir/interaction.h"
#include "oir/simulate.h"
#include "oracles.h"

using namespace oir;

namespace {

VarModel bivariate(double b) {
  VarModel m;
  m.q = 2;
  m.p = 1;
  Mat a = Mat::Zero(2, 2);
  a(1, 0) = b;
  m.coeffs = {a};
  m.sigma_u = Mat::Identity(2, 2);
  return m;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an oir::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("oracle on the unidirectional example") {
  const auto ss = var_to_ss(bivariate(0.5));
  const auto o = mir_oracle(ss, {0}, {1});
  CHECK(o.te_1to2 == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-10));
  CHECK(std::abs(o.te_2to1) < 1e-12);
  CHECK(std::abs(o.inst) < 1e-12);
  CHECK(!o.profiles);
  const auto s = mir(ss, {0}, {1}, FrequencyGrid::uniform(1.0));
  CHECK(s.total == doctest::Approx(o.total).epsilon(1e-6));
  REQUIRE(s.profiles);
  CHECK(s.profiles->total.values.size() == 1025);
}

TEST_CASE("spectral and covariance routes agree on random models") {
  std::mt19937_64 rng(31);
  const auto grid = FrequencyGrid::uniform(1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = oracle::random_var(rng, 2 + trial % 3, 1 + trial % 3, 0.9, true);
    const auto ss = var_to_ss(m);
    const IndexSet z1{0}, z2{m.q - 1};
    const auto s = mir(ss, z1, z2, grid);
    const auto o = mir_oracle(ss, z1, z2);
    CHECK(s.total == doctest::Approx(o.total).epsilon(1e-6));
    CHECK(s.total == doctest::Approx(s.te_1to2 + s.te_2to1 + s.inst).epsilon(1e-10));
    CHECK(o.total == doctest::Approx(o.te_1to2 + o.te_2to1 + o.inst).epsilon(1e-10));
    // third route, no state space at all
    CHECK(o.total == doctest::Approx(oracle::mir(m, z1, z2)).epsilon(1e-8));
  }
}

TEST_CASE("directed parts differ by the phase term of the diagonal transfer blocks") {
  // With correlated innovations the spectral causal measure integrates to the
  // time-domain one only when det H_ii has no zeros outside the unit circle.
  // The gap is the circle mean of log|det H_ii|, computed here from the VAR
  // form (z1 and z2 together cover every channel, so no marginalization).
  std::mt19937_64 rng(37);
  const auto grid = FrequencyGrid::uniform(1.0);
  int nonzero_gaps = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int q = 2 + trial % 3;
    const auto m = oracle::random_var(rng, q, 1 + trial % 3, 0.9, true);
    IndexSet z1, z2;
    for (int i = 0; i < q; ++i) (i < (q + 1) / 2 ? z1 : z2).push_back(i);
    const auto ss = var_to_ss(m);
    const auto s = mir(ss, z1, z2, grid);
    const auto o = mir_oracle(ss, z1, z2);
    double g1 = 0.0, g2 = 0.0;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const auto h = oracle::var_transfer(m, 2.0 * std::numbers::pi * i / n);
      g1 += std::log(std::abs(oracle::sub(h, z1).determinant()));
      g2 += std::log(std::abs(oracle::sub(h, z2).determinant()));
    }
    g1 /= n;
    g2 /= n;
    if (std::abs(g1) + std::abs(g2) > 1e-6) ++nonzero_gaps;
    CHECK(s.te_2to1 == doctest::Approx(o.te_2to1 - g1).epsilon(1e-7).scale(1.0));
    CHECK(s.te_1to2 == doctest::Approx(o.te_1to2 - g2).epsilon(1e-7).scale(1.0));
    CHECK(s.inst == doctest::Approx(o.inst + g1 + g2).epsilon(1e-7).scale(1.0));
  }
  MESSAGE(nonzero_gaps << " of 12 models have a non-minimum-phase diagonal block");
}

TEST_CASE("strictly causal random models: both routes agree term by term") {
  std::mt19937_64 rng(53);
  const auto grid = FrequencyGrid::uniform(1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto m = oracle::random_var(rng, 2 + trial % 3, 1 + trial % 2, 0.7, false);
    const auto ss = var_to_ss(m);
    const auto s = mir(ss, {0}, {m.q - 1}, grid);
    const auto o = mir_oracle(ss, {0}, {m.q - 1});
    CHECK(s.te_1to2 == doctest::Approx(o.te_1to2).epsilon(1e-6).scale(1.0));
    CHECK(s.te_2to1 == doctest::Approx(o.te_2to1).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("Simulation 1 X1 to X3 transfer is unidirectional") {
  const auto ss = var_to_ss(build_sim1().model);
  const auto r = mir(ss, {0}, {2}, FrequencyGrid::uniform(1.0));
  CHECK(r.total == doctest::Approx(r.te_1to2).epsilon(1e-8));
  CHECK(std::abs(r.te_2to1) < 1e-8);
  CHECK(std::abs(r.inst) < 1e-8);
  for (double v : r.profiles->te_2to1.values) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("increment with target X1 in Simulation 1 has only the outgoing part") {
  const auto b = build_sim1();
  const auto ss = var_to_ss(b.model);
  const auto inc = oir_increment(ss, b.partition, {0, 1, 2}, 0, FrequencyGrid::uniform(1.0));
  for (std::size_t i = 0; i < inc.profiles.total.values.size(); ++i) {
    CHECK(std::abs(inc.profiles.to_target.values[i]) < 1e-8);
    CHECK(std::abs(inc.profiles.inst.values[i]) < 1e-8);
  }
  CHECK(inc.total == doctest::Approx(inc.from_target).epsilon(1e-10));
}

TEST_CASE("recursion matches interaction information for triplets") {
  std::mt19937_64 rng(41);
  const auto grid = FrequencyGrid::uniform(1.0, 513);
  for (int trial = 0; trial < 6; ++trial) {
    const auto m = oracle::random_var(rng, 3 + trial % 2, 2, 0.9, true);
    const auto part = oracle::contiguous_blocks(m.q, 3);
    const auto ss = var_to_ss(m);
    const auto res = oir::oir(ss, part, {0, 1, 2}, grid);
    CHECK(res.omega == doctest::Approx(interaction_info_check(ss, part, {0, 1, 2}, grid)).epsilon(1e-8).scale(1.0));
    REQUIRE(res.increments.size() == 1);
    CHECK(res.increments[0].target == 2);
    CHECK(integrate(res.nu) == doctest::Approx(res.omega).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("omega is invariant to the order of addition") {
  std::mt19937_64 rng(43);
  const auto grid = FrequencyGrid::uniform(1.0, 257);
  for (int trial = 0; trial < 3; ++trial) {
    const auto m = oracle::random_var(rng, 4, 2, 0.9, true);
    const auto part = oracle::contiguous_blocks(4, 4);
    InteractionCache cache(var_to_ss(m));
    const auto ref = oir::oir(cache, part, {0, 1, 2, 3}, grid);
    std::vector<int> order{0, 1, 2, 3};
    while (std::next_permutation(order.begin(), order.end())) {
      const auto r = oir::oir(cache, part, order, grid);
      CHECK(r.omega == doctest::Approx(ref.omega).epsilon(1e-6).scale(1.0));
      double worst = 0.0;
      for (std::size_t i = 0; i < r.nu.values.size(); ++i) worst = std::max(worst, std::abs(r.nu.values[i] - ref.nu.values[i]));
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("merge_inst folds the zero-lag part into the incoming term") {
  std::mt19937_64 rng(47);
  const auto m = oracle::random_var(rng, 3, 1, 0.8, true);
  const auto part = BlockPartition::singletons(3);
  const auto ss = var_to_ss(m);
  const auto grid = FrequencyGrid::uniform(1.0, 257);
  const auto plain = oir_increment(ss, part, {0, 1, 2}, 1, grid);
  const auto merged = oir_increment(ss, part, {0, 1, 2}, 1, grid, true);
  CHECK(std::abs(plain.inst) > 1e-6);
  CHECK(merged.merged_inst);
  CHECK(merged.inst == 0.0);
  CHECK(merged.to_target == doctest::Approx(plain.to_target + plain.inst).epsilon(1e-12));
  CHECK(merged.total == doctest::Approx(plain.total).epsilon(1e-12));
  CHECK(merged.from_target == doctest::Approx(plain.from_target).epsilon(1e-12));
  for (double v : merged.profiles.inst.values) CHECK(v == 0.0);
  CHECK(plain.total == doctest::Approx(plain.to_target + plain.from_target + plain.inst).epsilon(1e-10));
}

TEST_CASE("multiplet validation") {
  const auto b = build_sim2();
  const auto ss = var_to_ss(b.model);
  const auto grid = FrequencyGrid::uniform(100.0, 65);
  CHECK(code_of([&] { oir::oir(ss, b.partition, {0, 1}, grid); }) == ErrorCode::kMultipletTooSmall);
  CHECK(code_of([&] { oir::oir(ss, b.partition, {0, 1, 1}, grid); }) == ErrorCode::kInvalidPartition);
  CHECK(code_of([&] { oir::oir(ss, b.partition, {0, 1, 7}, grid); }) == ErrorCode::kInvalidPartition);
  CHECK(code_of([&] { oir_increment(ss, b.partition, {0, 1, 2}, 3, grid); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { mir(ss, {0, 1}, {1}, grid); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("combinations are lexicographic") {
  const auto c = combinations(5, 3);
  REQUIRE(c.size() == 10);
  CHECK(c.front() == std::vector<int>{0, 1, 2});
  CHECK(c[1] == std::vector<int>{0, 1, 3});
  CHECK(c.back() == std::vector<int>{2, 3, 4});
  CHECK(combinations(5, 4).size() == 5);
  CHECK(combinations(5, 5).size() == 1);
}

TEST_CASE("scan covers every multiplet and is thread-count independent") {
  const auto b = build_sim2();
  const auto ss = var_to_ss(b.model);
  const auto grid = FrequencyGrid::uniform(100.0, 129);
  const std::vector<NamedBand> bands{{"alpha", {8.0, 12.0}}};
  const auto one = oir_scan(ss, b.partition, {5, 3, 4}, grid, bands, {false, 1});
  const auto many = oir_scan(ss, b.partition, {3, 4, 5}, grid, bands, {false, 3});
  REQUIRE(one.size() == 16);
  REQUIRE(many.size() == 16);
  CHECK(one[0].multiplet == std::vector<int>{0, 1, 2});
  CHECK(one[15].multiplet == std::vector<int>{0, 1, 2, 3, 4});
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].result);
    REQUIRE(many[i].result);
    CHECK(one[i].multiplet == many[i].multiplet);
    CHECK(one[i].result->omega == many[i].result->omega);
    REQUIRE(one[i].result->band_table.size() == 1);
    CHECK(one[i].result->band_table[0].first == "alpha");
  }
}

TEST_CASE("scan rejects impossible orders") {
  const auto b = build_sim2();
  const auto ss = var_to_ss(b.model);
  CHECK(code_of([&] { oir_scan(ss, b.partition, {6}, FrequencyGrid::uniform(100.0, 33)); }) ==
        ErrorCode::kMultipletTooSmall);
  CHECK(code_of([&] { oir_scan(ss, b.partition, {2}, FrequencyGrid::uniform(100.0, 33)); }) ==
        ErrorCode::kMultipletTooSmall);
}

TEST_CASE("cache reuses reductions") {
  const auto b = build_sim2();
  InteractionCache cache(var_to_ss(b.model));
  const auto grid = FrequencyGrid::uniform(100.0, 65);
  oir::oir(cache, b.partition, {0, 1, 2}, grid);
  const auto after_first = cache.reductions_computed();
  oir::oir(cache, b.partition, {0, 1, 2}, grid);
  CHECK(cache.reductions_computed() == after_first);
  CHECK(cache.reduction({0, 1}) == cache.reduction({0, 1}));
}

TEST_CASE("null network: every measure vanishes") {
  VarModel m;
  m.q = 4;
  m.p = 2;
  m.coeffs = {Mat::Zero(4, 4), Mat::Zero(4, 4)};
  m.sigma_u = Vec::LinSpaced(4, 0.5, 2.0).asDiagonal();
  const auto ss = var_to_ss(m);
  const auto part = BlockPartition::singletons(4);
  const auto grid = FrequencyGrid::uniform(1.0, 129);
  const auto r = mir(ss, {0, 1}, {3}, grid);
  for (double v : {r.total, r.te_1to2, r.te_2to1, r.inst}) CHECK(std::abs(v) < 1e-8);
  const auto o = oir::oir(ss, part, {0, 1, 2, 3}, grid);
  CHECK(std::abs(o.omega) < 1e-8);
  for (double v : o.nu.values) CHECK(std::abs(v) < 1e-8);
}
