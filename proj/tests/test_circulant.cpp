#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace pclone;
using namespace pclone::testing;

namespace {

ValueTuple tuple_of_mask(std::uint64_t mask, std::size_t n) {
  std::vector<value_t> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = (mask >> i) & 1U;
  return ValueTuple(e);
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_THROW(CirculantSpec::S(2, 1), invalid_input);
  EXPECT_THROW(CirculantSpec::S(5, 0), invalid_input);
  EXPECT_THROW(CirculantSpec::S(5, 5), invalid_input);
  EXPECT_EQ(CirculantSpec::Rho(21, 4).arity(), 84u);
  EXPECT_EQ(CirculantSpec::R(21, 4).arity(), 42u);
  EXPECT_EQ(CirculantSpec::Sigma(5, 1).arity(), 10u);
}

TEST(Spec, ParseAndPrint) {
  const auto s = parse_spec("S:n=21,k=1");
  EXPECT_EQ(s.family, Family::S);
  EXPECT_EQ(s.n, 21u);
  EXPECT_EQ(s.k, 1u);
  EXPECT_EQ(parse_spec("rho:n=21,k=4").to_string(), "rho:n=21,k=4");
  EXPECT_EQ(parse_spec(parse_spec("sigma:n=7,k=2").to_string()), CirculantSpec::Sigma(7, 2));
  EXPECT_THROW(parse_spec("T:n=5,k=1"), parse_error);
  EXPECT_THROW(parse_spec("S:n=5"), parse_error);
  EXPECT_THROW(parse_spec("S:n=5,k=x"), parse_error);
}

TEST(Member, Examples) {
  EXPECT_TRUE(member(CirculantSpec::S(5, 1), ValueTuple::from_string("01011")));
  EXPECT_TRUE(member(CirculantSpec::Sigma(5, 1), ValueTuple::from_string("0101110100")));
  for (std::size_t n = 3; n <= 12; ++n)
    for (std::size_t k = 1; k < n; ++k) EXPECT_TRUE(member(CirculantSpec::S(n, k), ValueTuple::constant(n, 1)));
  EXPECT_FALSE(member(CirculantSpec::R(5, 2), ValueTuple::from_string("0101101101")));
  EXPECT_THROW(member(CirculantSpec::S(5, 1), ValueTuple::from_string("0101")), invalid_input);
}

TEST(Member, WrapAround) {
  // the zero at position n needs the ones at positions 1..k
  EXPECT_FALSE(member(CirculantSpec::S(5, 1), ValueTuple::from_string("01110")));
  EXPECT_TRUE(member(CirculantSpec::S(5, 1), ValueTuple::from_string("10110")));
  EXPECT_FALSE(member(CirculantSpec::S(5, 2), ValueTuple::from_string("10110")));
}

TEST(Member, AgreesWithGapOracle) {
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::size_t k = 1; k < n; ++k)
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        ASSERT_EQ(member(CirculantSpec::S(n, k), tuple_of_mask(m, n)), s_member_by_gaps(m, n, k))
            << n << "," << k << "," << m;
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate(CirculantSpec::S(5, 1)).size(), 11u);
  EXPECT_EQ(enumerate(CirculantSpec::S(7, 3)).size(), 8u);
  EXPECT_THROW(enumerate(CirculantSpec::S(25, 1)), budget_exceeded);
  EXPECT_THROW(enumerate(CirculantSpec::Sigma(13, 1)), budget_exceeded);
}

TEST(Enumerate, IsExactlyTheMemberSet) {
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<ValueTuple> want;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (member(CirculantSpec::S(n, k), tuple_of_mask(m, n))) want.push_back(tuple_of_mask(m, n));
      std::sort(want.begin(), want.end());
      const auto got = enumerate(CirculantSpec::S(n, k));
      EXPECT_EQ(got, want);
      EXPECT_EQ(enumerate(CirculantSpec::Sigma(n, k)).size(), got.size());
      EXPECT_EQ(big_count(got.size()), count(CirculantSpec::S(n, k)));
    }
}

TEST(Enumerate, PairedFamiliesCarryComplements) {
  for (const auto& t : enumerate(CirculantSpec::Rho(5, 2))) {
    EXPECT_EQ(t.slice(10, 10), dual_tuple(t.slice(0, 10)));
    EXPECT_TRUE(member(CirculantSpec::Rho(5, 2), t));
  }
}

TEST(Count, Examples) {
  EXPECT_EQ(count(CirculantSpec::S(5, 1)), 11);
  EXPECT_EQ(count(CirculantSpec::S(9, 3)), 19);
  EXPECT_EQ(count(CirculantSpec::S(9, 3)), big_count(count_by_filter(9, 3)));
  EXPECT_EQ(count(CirculantSpec::S(21, 1)), 24476);
  EXPECT_EQ(count(CirculantSpec::S(21, 1)), big_count(s1_by_recurrence(21)));
}

TEST(Count, DerivedFamilies) {
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      const auto s1 = count(CirculantSpec::S(n, 1)), sk = count(CirculantSpec::S(n, k));
      EXPECT_EQ(count(CirculantSpec::Sigma(n, k)), sk);
      EXPECT_EQ(count(CirculantSpec::R(n, k)), s1 * sk);
      EXPECT_EQ(count(CirculantSpec::Rho(n, k)), s1 * sk);
      if (2 * n <= 16) {
        EXPECT_EQ(big_count(enumerate(CirculantSpec::R(n, k)).size()), s1 * sk);
      }
    }
}

TEST(Count, LargeArityStaysExact) {
  // the number of cyclic binary strings with no two adjacent zeros is a Lucas number
  big_count a = 2, b = 1;  // L0, L1
  for (int i = 2; i <= 200; ++i) {
    big_count c = a + b;
    a = b;
    b = c;
  }
  EXPECT_EQ(count(CirculantSpec::S(200, 1)), b);
}

TEST(Nesting, LargerGapIsStricter) {
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::size_t k = 2; k < n; ++k)
      for (const auto& t : enumerate(CirculantSpec::S(n, k))) EXPECT_TRUE(member(CirculantSpec::S(n, k - 1), t));
}

TEST(ZeroBound, AtMostNOverKPlusOne) {
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::size_t k = 1; k < n; ++k)
      for (const auto& t : enumerate(CirculantSpec::S(n, k))) EXPECT_LE(t.count(0), n / (k + 1));
  std::mt19937_64 rng(31);
  for (std::size_t k : {4u, 6u, 8u}) {
    const std::size_t n = k * (k + 1) + 1;
    const auto spec = CirculantSpec::S(n, k);
    int hits = 0;
    for (int t = 0; t < 20000; ++t) {
      // sparse random strings so that members actually turn up
      std::vector<value_t> e(n, 1);
      for (std::size_t z = rng() % (k + 2); z > 0; --z) e[rng() % n] = 0;
      const ValueTuple x(e);
      if (!member(spec, x)) continue;
      ++hits;
      EXPECT_LE(x.count(0), n / (k + 1));
    }
    EXPECT_GT(hits, 100);
  }
}

TEST(RFamily, ProductOfHalves) {
  for (std::size_t n = 3; n <= 7; ++n)
    for (std::size_t k = 1; k < n; ++k) {
      const auto spec = CirculantSpec::R(n, k);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << (2 * n)); ++m) {
        const auto t = tuple_of_mask(m, 2 * n);
        ASSERT_EQ(member(spec, t), s_member_by_gaps(m & ((1U << n) - 1), n, 1) && s_member_by_gaps(m >> n, n, k));
      }
    }
}

TEST(HalveLift, Examples) {
  const auto [spec, t] = lift(CirculantSpec::S(5, 1), ValueTuple::from_string("01011"));
  EXPECT_EQ(spec, CirculantSpec::Sigma(5, 1));
  EXPECT_EQ(t.to_string(), "0101110100");
  for (const auto& x : enumerate(CirculantSpec::Sigma(7, 2))) {
    const auto [hs, h] = halve(CirculantSpec::Sigma(7, 2), x);
    EXPECT_EQ(lift(hs, h).second, x);
  }
  for (const auto& x : enumerate(CirculantSpec::R(5, 2))) {
    const auto [ls, l] = lift(CirculantSpec::R(5, 2), x);
    EXPECT_EQ(l.arity(), 20u);
    EXPECT_EQ(l.slice(10, 10), dual_tuple(x));
    EXPECT_EQ(halve(ls, l).second, x);
  }
  EXPECT_THROW(halve(CirculantSpec::Sigma(5, 1), ValueTuple::from_string("0101101011")), invalid_input);
  EXPECT_THROW(lift(CirculantSpec::S(5, 1), ValueTuple::from_string("00111")), invalid_input);
  EXPECT_THROW(halve(CirculantSpec::S(5, 1), ValueTuple::from_string("01011")), invalid_input);
}

TEST(DefsEquivalent, Examples) {
  EXPECT_TRUE(defs_equivalent(5, 1));
  EXPECT_TRUE(defs_equivalent(8, 3));
  EXPECT_TRUE(defs_equivalent(5, 4));
  EXPECT_THROW(defs_equivalent(13, 1), budget_exceeded);
}

TEST(DefsEquivalent, ImplicationFormCountsSigma) {
  std::size_t members = 0;
  for (std::uint64_t x = 0; x < 32; ++x)
    for (std::uint64_t y = 0; y < 32; ++y) members += detail::sigma_implication_form(x, y, 5, 1);
  EXPECT_EQ(members, 11u);
}
