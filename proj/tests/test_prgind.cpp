#include <gtest/gtest.h>

#include "qtsl/prgind.hpp"
#include "qtsl/random.hpp"

using namespace qtsl;

namespace {

/// Random unitary on points 0..k-1 of x (size L) times `rest`, identity elsewhere.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& block, std::size_t k, std::size_t L, std::size_t rest) {
  const auto dim = static_cast<Eigen::Index>(L * rest);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const auto b = static_cast<Eigen::Index>(k * rest);
  u.topLeftCorner(b, b) = block;
  return u;
}

PrgIndProgram on_domain(std::size_t L, std::size_t M, std::size_t k, const std::vector<Eigen::MatrixXcd>& pre,
                        const std::vector<Eigen::MatrixXcd>& post) {
  PrgIndProgram p;
  p.domain = L;
  p.registers = {{"x", Role::Input, L}, {"u", Role::Output, M}};
  const std::vector<std::string> before{"x", "u"};
  const std::vector<std::string> after{"x", "u", "ch"};
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (i > 0) p.prefix.push_back(QStep::query("x", "u"));
    p.prefix.push_back(QStep::unitary(before, embed(pre[i], k, L, M)));
  }
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (i > 0) p.suffix.push_back(QStep::query("x", "u"));
    p.suffix.push_back(QStep::unitary(after, embed(post[i], k, L, M * M)));
  }
  return p;
}

}  // namespace

TEST(PrgInd, NoQueriesNoAdvantage) {
  for (std::size_t N : {4, 9}) {
    Rng rng = make_rng(N);
    const auto r = prgind_advantage(N, 4, 0, 0, random_prgind_program(N, 4, 0, 0, 2, rng));
    EXPECT_NEAR(r.advantage, 0.0, 1e-9);
    EXPECT_EQ(r.bound, 0.0);
  }
}

TEST(PrgInd, TrivialRangeNoAdvantage) {
  Rng rng = make_rng(1);
  EXPECT_NEAR(prgind_advantage(4, 1, 2, 2, random_prgind_program(4, 1, 2, 2, 2, rng)).advantage, 0.0, 1e-9);
}

TEST(PrgInd, LocalDomainMatchesFullDomain) {
  const std::size_t N = 4;
  const std::size_t M = 3;
  const std::size_t k = 2;
  for (std::size_t trial = 0; trial < 4; ++trial) {
    Rng rng = make_rng(50, trial);
    const std::size_t q = trial % 3;
    const std::size_t qp = (trial + 1) % 2;
    std::vector<Eigen::MatrixXcd> pre;
    std::vector<Eigen::MatrixXcd> post;
    for (std::size_t i = 0; i <= q; ++i) pre.push_back(random_unitary(k * M, rng));
    for (std::size_t i = 0; i <= qp; ++i) post.push_back(random_unitary(k * M * M, rng));
    const auto full = prgind_advantage(N, M, q, qp, on_domain(N, M, k, pre, post));
    const auto local = prgind_advantage(N, M, q, qp, on_domain(k + 1, M, k, pre, post));
    EXPECT_NEAR(full.advantage, local.advantage, 1e-9) << trial;
    EXPECT_TRUE(local.holds());
  }
}

TEST(PrgInd, BoundFormula) {
  Rng rng = make_rng(2);
  const auto r = prgind_advantage(9, 4, 2, 1, random_prgind_program(9, 4, 2, 1, 2, rng));
  EXPECT_NEAR(r.bound, 2.0 * (std::sqrt(2.0) + 1.0) / 3.0, 1e-12);
  EXPECT_TRUE(r.holds());
  EXPECT_GT(r.advantage, 0.0);
}

TEST(PrgInd, RejectsOverBudgetPrograms) {
  Rng rng = make_rng(3);
  const auto p = random_prgind_program(4, 4, 2, 1, 2, rng);
  EXPECT_THROW(prgind_advantage(4, 4, 1, 1, p), std::invalid_argument);
  EXPECT_THROW(prgind_advantage(4, 4, 2, 0, p), std::invalid_argument);
  PrgIndProgram wide = p;
  wide.domain = 5;
  EXPECT_THROW(prgind_advantage(4, 4, 2, 1, wide), std::invalid_argument);
}
