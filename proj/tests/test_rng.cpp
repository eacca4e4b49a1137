#include <gtest/gtest.h>

#include <set>

#include "twtsim/rng.hpp"

using twtsim::derive_seed;
using twtsim::Rng;

TEST(Rng, SameSeedSameStream)
{
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i)
    {
        ASSERT_EQ(a.uniform(), b.uniform());
        ASSERT_EQ(a.uniform_int(0, 9), b.uniform_int(0, 9));
        ASSERT_EQ(a.standard_normal(), b.standard_normal());
    }
}

TEST(Rng, UniformInHalfOpenUnitInterval)
{
    Rng r(7);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, UniformIntInclusiveBounds)
{
    Rng r(3);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 10000; ++i)
    {
        const auto v = r.uniform_int(-2, 2);
        ASSERT_GE(v, -2);
        ASSERT_LE(v, 2);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 5u);
}

TEST(Rng, DerivedSeedsDistinctAcrossStreams)
{
    std::set<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s)
        seeds.insert(derive_seed(1, s));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(9, 5), derive_seed(9, 5));
}
