#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "support.hpp"

using namespace modalcert;
using namespace testsupport;

namespace {

ModalFormula p() { return ModalFormula::atom("p"); }
ModalFormula np() { return ModalFormula::natom("p"); }
ModalFormula q() { return ModalFormula::atom("q"); }
ModalFormula nq() { return ModalFormula::natom("q"); }

KripkeModel one_world() {
  KripkeModel m;
  m.worlds = {0};
  return m;
}

}  // namespace

TEST(NegateNnf, AtomDual) { EXPECT_EQ(negate_nnf(p()), np()); }

TEST(NegateNnf, BoxBecomesDiamond) { EXPECT_EQ(negate_nnf(ModalFormula::box(p())), ModalFormula::dia(np())); }

TEST(NegateNnf, AxiomK) {
  auto expected = ModalFormula::conj(ModalFormula::box(ModalFormula::disj(np(), q())),
                                     ModalFormula::conj(ModalFormula::box(p()), ModalFormula::dia(nq())));
  EXPECT_EQ(negate_nnf(axiom_k()), expected);
  EXPECT_EQ(negate_nnf(expected), axiom_k());
}

TEST(Eval, VacuousBox) { EXPECT_TRUE(eval(one_world(), 0, ModalFormula::box(p()))); }

TEST(Eval, DiamondWithoutSuccessor) { EXPECT_FALSE(eval(one_world(), 0, ModalFormula::dia(p()))); }

TEST(Eval, DiamondSeesSuccessor) {
  KripkeModel m;
  m.worlds = {1, 2};
  m.rel = {{1, 2}};
  m.val[2] = {"p"};
  EXPECT_TRUE(eval(m, 1, ModalFormula::dia(p())));
  EXPECT_FALSE(eval(m, 2, ModalFormula::dia(p())));
}

TEST(Eval, UnknownWorldIsInputError) { EXPECT_THROW(eval(one_world(), 7, p()), InputError); }

TEST(KripkeModel, ValidateRejectsDanglingReferences) {
  KripkeModel m = one_world();
  m.rel = {{0, 1}};
  EXPECT_THROW(m.validate(), InputError);
  KripkeModel v = one_world();
  v.val[3] = {"p"};
  EXPECT_THROW(v.validate(), InputError);
  EXPECT_THROW(KripkeModel{}.validate(), InputError);
  EXPECT_NO_THROW(one_world().validate());
}

TEST(Metrics, DepthConnectivesDiamonds) {
  auto k = axiom_k();
  EXPECT_EQ(modal_depth(k), 1);
  EXPECT_EQ(connective_count(k), 6);
  EXPECT_EQ(dia_count(k), 2);
  std::set<std::string> atoms;
  collect_atoms(k, atoms);
  EXPECT_EQ(atoms, (std::set<std::string>{"p", "q"}));
}

TEST(Oracle, AxiomKIsValid) { EXPECT_TRUE(decide_validity(axiom_k()).valid()); }

TEST(Oracle, DiamondCountermodelIsOneWorld) {
  auto r = decide_validity(ModalFormula::dia(p()));
  ASSERT_FALSE(r.valid());
  EXPECT_EQ(r.countermodel->model.worlds.size(), 1u);
  EXPECT_TRUE(r.countermodel->model.rel.empty());
}

TEST(Oracle, BoxCountermodelHasOneFalsifyingSuccessor) {
  auto r = decide_validity(ModalFormula::box(p()));
  ASSERT_FALSE(r.valid());
  const auto& cm = *r.countermodel;
  EXPECT_EQ(cm.model.worlds.size(), 2u);
  auto succ = cm.model.successors(cm.world);
  ASSERT_EQ(succ.size(), 1u);
  EXPECT_FALSE(cm.model.holds(succ.front(), "p"));
}

TEST(Oracle, ExcludedMiddleAndDistribution) {
  EXPECT_TRUE(decide_validity(parse_formula("p | ~p")).valid());
  EXPECT_TRUE(decide_validity(parse_formula("[](p | ~p)")).valid());
  EXPECT_FALSE(decide_validity(parse_formula("<>(p | ~p)")).valid());
  EXPECT_TRUE(decide_validity(parse_formula("<>~p | <>~q | [](p & q)")).valid());
}

TEST(Oracle, LimitIsEnforced) {
  auto big = parse_formula("<>(p & <>(q & <>(r & <>s))) | <>(~p & <>(~q & <>~r)) | [](p | q | <>r)");
  EXPECT_THROW(decide_validity(big, 3), LimitError);
}

TEST(Oracle, LimitFromEnvironment) {
  ::setenv("MODALCERT_TEST_LIMIT", "42", 1);
  EXPECT_EQ(limit_from_env("MODALCERT_TEST_LIMIT", 7), 42);
  ::setenv("MODALCERT_TEST_LIMIT", "many", 1);
  EXPECT_THROW(limit_from_env("MODALCERT_TEST_LIMIT", 7), InputError);
  ::unsetenv("MODALCERT_TEST_LIMIT");
  EXPECT_EQ(limit_from_env("MODALCERT_TEST_LIMIT", 7), 7);
}

TEST(Oracle, Deterministic) {
  auto f = parse_formula("[]<>p | [](p & q)");
  auto a = decide_validity(f), b = decide_validity(f);
  ASSERT_FALSE(a.valid());
  EXPECT_EQ(a.countermodel->model.rel, b.countermodel->model.rel);
  EXPECT_EQ(a.countermodel->model.val, b.countermodel->model.val);
  EXPECT_EQ(a.visited, b.visited);
}

TEST(NegateNnfProperty, InvolutionOnRandomFormulas) {
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_formula(rng, 19);
    ASSERT_EQ(negate_nnf(negate_nnf(a)), a) << print_formula(a);
  }
}

TEST(EvalProperty, DualityOverSmallModels) {
  std::mt19937 rng(12);
  std::vector<KripkeModel> models;
  for_each_model(2, {"p", "q"}, [&](const KripkeModel& m) {
    models.push_back(m);
    return true;
  });
  for (int i = 0; i < 200; ++i) {
    auto a = random_formula(rng, 8, {"p", "q"});
    auto n = negate_nnf(a);
    for (const auto& m : models) {
      for (WorldId w : m.worlds) ASSERT_NE(eval(m, w, a), eval(m, w, n)) << print_formula(a);
    }
  }
}

TEST(OracleProperty, CountermodelsFalsifyRandomFormulas) {
  std::mt19937 rng(13);
  int invalid = 0;
  for (int i = 0; i < 500; ++i) {
    auto a = random_formula(rng, 10);
    auto r = decide_validity(a);
    if (r.valid()) continue;
    ++invalid;
    r.countermodel->model.validate();
    ASSERT_FALSE(eval(r.countermodel->model, r.countermodel->world, a)) << print_formula(a);
  }
  EXPECT_GT(invalid, 100);
}

// Exhaustive comparison with an independent brute-force evaluator over
// every model with at most three worlds.
TEST(OracleProperty, AgreesWithBruteForceOnOneAtomFormulas) {
  std::vector<std::pair<KripkeModel, WorldId>> pointed;
  for_each_model(3, {"p"}, [&](const KripkeModel& m) {
    for (WorldId w : m.worlds) pointed.push_back({m, w});
    return true;
  });
  auto all = formulas_up_to(4);
  ASSERT_EQ(all.size(), 2u + 12u + 120u + 1488u + 20640u);
  int small_invalid = 0;
  for (const auto& a : all) {
    bool brute = false;
    for (const auto& [m, w] : pointed) {
      if (!detail::eval_unchecked(m, w, a)) {
        brute = true;
        break;
      }
    }
    auto r = decide_validity(a);
    if (brute) {
      ++small_invalid;
      ASSERT_FALSE(r.valid()) << print_formula(a);
    }
    if (!r.valid()) {
      ASSERT_FALSE(eval(r.countermodel->model, r.countermodel->world, a)) << print_formula(a);
    }
  }
  EXPECT_GT(small_invalid, 10000);
}
