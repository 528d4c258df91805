#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mrfcp/errors.hpp"
#include "mrfcp/model.hpp"
#include "mrfcp/random.hpp"

using namespace mrfcp;

TEST(ModelSpec, IsingTables) {
  const ModelSpec s = make_ising_spec();
  ASSERT_EQ(s.alphabet_size(), 2u);
  EXPECT_TRUE(s.is_binary());
  EXPECT_EQ(s.b0(0), 0.0);
  EXPECT_EQ(s.b0(1), 1.0);
  EXPECT_EQ(s.b(1, 1), 1.0);
  EXPECT_EQ(s.b(1, 0), 0.0);
  EXPECT_EQ(s.b(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s.c0(), 1.0);
  EXPECT_DOUBLE_EQ(compute_c0(s), 1.0);
}

TEST(ModelSpec, RejectsBadAlphabets) {
  auto b0 = [](double x) { return x; };
  auto b = [](double x, double y) { return x * y; };
  EXPECT_THROW(ModelSpec({}, b0, b), InvalidArgument);
  EXPECT_THROW(ModelSpec({0.0, 1.0, 1.0}, b0, b), InvalidArgument);
  EXPECT_THROW(ModelSpec({0.0, 1.0}, b0, [](double x, double y) { return x - y; }), InvalidArgument);
  EXPECT_THROW(ModelSpec::from_tables({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0, 0.0, 1.0}), InvalidArgument);
}

TEST(ModelSpec, IndexOfAndSymbols) {
  const ModelSpec s({-1.0, 0.0, 1.0}, [](double x) { return x; }, [](double x, double y) { return x * y; });
  EXPECT_EQ(s.index_of(0.0).value(), 1);
  EXPECT_FALSE(s.index_of(2.0).has_value());
  EXPECT_EQ(s.symbol(2), 1.0);
}

TEST(ModelSpec, C0InvariantUnderAlphabetReordering) {
  auto b0 = [](double x) { return x * x - 0.5 * x; };
  auto b = [](double x, double y) { return std::sin(x) * std::sin(y) + x * y; };
  const ModelSpec a({-1.0, 0.0, 2.0, 3.5}, b0, b);
  const ModelSpec r({3.5, -1.0, 2.0, 0.0}, b0, b);
  EXPECT_DOUBLE_EQ(a.c0(), r.c0());
  EXPECT_DOUBLE_EQ(compute_c0(a), a.c0());
}

TEST(SymmetricParams, RoundTripBothOrders) {
  const std::size_t p = 7;
  SymmetricParams th(p);
  Rng rng(3);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const double v = rng.uniform(-2.0, 2.0);
      th.set(j, k, v);
      EXPECT_EQ(th(k, j), v);
      EXPECT_EQ(th.at(j, k), v);
    }
  }
  EXPECT_EQ(th.dim(), p * (p + 1) / 2);
  const auto dense = th.dense();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) EXPECT_EQ(dense[j * p + k], dense[k * p + j]);
  }
}

TEST(SymmetricParams, CountsAndNorms) {
  SymmetricParams th(4);
  th.set(0, 0, 1.5);
  th.set(2, 1, -2.0);
  th.set(1, 3, 0.5);
  EXPECT_EQ(th.nonzeros(), 3u);
  EXPECT_EQ(th.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(th.l1_norm(), 4.0);
  EXPECT_DOUBLE_EQ(th.max_abs(), 2.0);
  EXPECT_THROW(th.set(0, 1, std::nan("")), InvalidArgument);
  EXPECT_THROW(th.at(4, 0), InvalidArgument);
  EXPECT_THROW(SymmetricParams(3, std::vector<double>(5, 0.0)), InvalidArgument);
}

TEST(SymmetricParams, RowwiseGapProperties) {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    SymmetricParams a(5), b(5);
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k <= j; ++k) {
        a.set(j, k, rng.uniform(-1.0, 1.0));
        b.set(j, k, rng.uniform(-1.0, 1.0));
      }
    }
    EXPECT_DOUBLE_EQ(rowwise_l1_gap(a, b), rowwise_l1_gap(b, a));
    EXPECT_GT(rowwise_l1_gap(a, b), 0.0);
    EXPECT_EQ(rowwise_l1_gap(a, a), 0.0);
  }
  // Hand value: row 0 collects |1| + |2| from (0,0) and (0,1).
  SymmetricParams a(2), b(2);
  a.set(0, 0, 1.0);
  a.set(0, 1, 2.0);
  EXPECT_DOUBLE_EQ(rowwise_l1_gap(a, b), 3.0);
}

TEST(Dataset, ValidationAndAccess) {
  EXPECT_THROW(Dataset(2, {0, 1}, 2), DataError);
  EXPECT_THROW(Dataset(2, {0, 1, 2, 0}, 2), DataError);
  EXPECT_THROW(Dataset(2, {0, 1, 1}, 2), DataError);
  const Dataset d(3, {0, 1, 1, 1, 0, 0, 1, 1, 1}, 2, {"a", "b", "c"}, {"t1", "t2", "t3"});
  EXPECT_EQ(d.T(), 3u);
  EXPECT_EQ(d.p(), 3u);
  EXPECT_EQ(d(1, 0), 1);
  EXPECT_EQ(d.row(2)[1], 1);
  const Dataset r = d.reversed();
  EXPECT_EQ(r.row(0)[0], d.row(2)[0]);
  EXPECT_EQ(r.time_labels().front(), "t3");
  EXPECT_EQ(r.reversed(), d);
  const std::vector<std::size_t> pick{2};
  const Dataset one = d.select_rows(pick);
  EXPECT_EQ(one.T(), 1u);
  EXPECT_EQ(one.row(0)[2], 1);
}

TEST(TimeRange, Validation) {
  EXPECT_NO_THROW((TimeRange{1, 5}.validate(5)));
  EXPECT_THROW((TimeRange{0, 5}.validate(5)), InvalidArgument);
  EXPECT_THROW((TimeRange{3, 2}.validate(5)), InvalidArgument);
  EXPECT_THROW((TimeRange{1, 6}.validate(5)), InvalidArgument);
  EXPECT_EQ((TimeRange{4, 9}.length()), 6u);
}

TEST(GroupLabels, Validation) {
  GroupLabels g{{0, 1, 1}, {"a", "b"}};
  EXPECT_EQ(g.group_count(), 2u);
  EXPECT_NO_THROW(g.validate(3));
  EXPECT_THROW(g.validate(4), InvalidArgument);
}

TEST(Random, ChildSeedsAreDistinctAndStable) {
  EXPECT_EQ(child_seed(5, 1), child_seed(5, 1));
  EXPECT_NE(child_seed(5, 1), child_seed(5, 2));
  EXPECT_NE(child_seed(5, 1), child_seed(6, 1));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(c.below(7), 7u);
  }
}

TEST(ModelSpec, C0HandValues) {
  const ModelSpec flat({0.0, 1.0, 2.0}, [](double) { return 3.0; }, [](double, double) { return -1.0; });
  EXPECT_DOUBLE_EQ(flat.c0(), 0.0);
  const ModelSpec tri({0.0, 1.0, 2.0}, [](double x) { return x; }, [](double x, double y) { return x * y; });
  EXPECT_DOUBLE_EQ(tri.c0(), 4.0);
  EXPECT_DOUBLE_EQ(compute_c0(tri), 4.0);
}

TEST(SymmetricParams, RowwiseGapMatchesDoubleLoop) {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 5;
    SymmetricParams a(p), b(p);
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k <= j; ++k) {
        a.set(j, k, rng.uniform(-1.0, 1.0));
        if (rng.coin()) b.set(j, k, rng.uniform(-1.0, 1.0));
      }
    }
    const auto da = a.dense();
    const auto db = b.dense();
    double best = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double row = 0.0;
      for (std::size_t k = 0; k < p; ++k) row += std::fabs(db[j * p + k] - da[j * p + k]);
      best = std::max(best, row);
    }
    EXPECT_NEAR(rowwise_l1_gap(a, b), best, 1e-14);
  }
  SymmetricParams x(2), y(2);
  y.set(1, 0, 0.5);
  EXPECT_DOUBLE_EQ(rowwise_l1_gap(x, y), 0.5);
  EXPECT_THROW(rowwise_l1_gap(SymmetricParams(2), SymmetricParams(3)), InvalidArgument);
}
