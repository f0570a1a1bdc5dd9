#include <catch2/catch_amalgamated.hpp>

#include "delam/classify.hpp"
#include "delam/subst.hpp"

using namespace delam;

namespace {
Term sample_lam() { return tm::lam(Level::zero(), Level::zero(), "x", ty::nat(), tm::var(0)); }
}  // namespace

TEST_CASE("layers") {
  CHECK(typeof_layer(Layer::V) == Layer::D);
  CHECK(typeof_layer(Layer::C) == Layer::D);
  CHECK(typeof_layer(Layer::D) == Layer::D);
  CHECK(typeof_layer(Layer::M) == Layer::M);
  CHECK_FALSE(comp(Layer::V));
  CHECK_FALSE(comp(Layer::C));
  CHECK(comp(Layer::D));
  CHECK(comp(Layer::M));
  CHECK(layer_leq(Layer::V, Layer::M));
  CHECK_FALSE(layer_leq(Layer::D, Layer::C));
}

TEST_CASE("local context lookup weakens into the whole context") {
  LocalCtx ctx = LocalCtx::empty()
                     .extended("x", ty::nat(), Level::zero())
                     .extended("y", ty::el(Level::zero(), tm::var(0, "x")), Level::zero());
  auto [ty0, l0] = lctx_lookup(ctx, 0);
  CHECK(aeq(ty0, ty::el(Level::zero(), tm::var(1, "x"))));
  auto [ty1, l1] = lctx_lookup(ctx, 1);
  CHECK(aeq(ty1, ty::nat()));
  CHECK_THROWS_AS(lctx_lookup(ctx, 2), KernelError);
}

TEST_CASE("global context lookup weakens into the whole context") {
  GlobalCtx psi;
  psi = psi.extended(CtxBind{"g"});
  psi = psi.extended(TrmBind{"u", LocalCtx::var(0), Layer::C, ty::nat(), Level::zero()});
  GlobalBind b = gctx_lookup(psi, 0);
  const auto* tb = std::get_if<TrmBind>(&b);
  REQUIRE(tb != nullptr);
  // the stored context referred to g as index 0; the full context sees it at 1
  CHECK(tb->ctx.base == std::optional<int>(1));
  CHECK(aeq(tb->type, ty::nat()));
  GlobalBind b1 = gctx_lookup(psi, 1);
  CHECK(std::holds_alternative<CtxBind>(b1));
  CHECK_THROWS_AS(gctx_lookup(psi, 2), KernelError);
}

TEST_CASE("whnf classification of types") {
  CHECK(classify_type_whnf(ty::nat()) == Form::Whnf);
  CHECK(classify_type_whnf(ty::universe(Level::zero())) == Form::Whnf);
  CHECK(classify_type_whnf(ty::pi(Level::zero(), Level::zero(), "x", ty::nat(), ty::nat())) ==
        Form::Whnf);
  CHECK(classify_type_whnf(ty::code_ty(LocalCtx::empty(), Level::zero())) == Form::Whnf);
  CHECK(classify_type_whnf(ty::global(0, lwk(LocalCtx::empty(), 0))) == Form::Neutral);
  CHECK(classify_type_whnf(ty::el(Level::zero(), tm::var(0))) == Form::Neutral);
  CHECK(classify_type_whnf(ty::el(Level::zero(), tm::nat())) == Form::Reducible);
  CHECK(classify_type_whnf(ty::el(Level::zero(),
                                  tm::app(sample_lam(), Level::zero(), Level::zero(), "x",
                                          ty::nat(), ty::nat(), tm::zero()))) == Form::Reducible);
}

TEST_CASE("whnf classification of terms") {
  CHECK(classify_term_whnf(sample_lam()) == Form::Whnf);
  CHECK(classify_term_whnf(tm::succ(tm::var(0))) == Form::Whnf);
  CHECK(classify_term_whnf(tm::box_tm(tm::zero())) == Form::Whnf);
  CHECK(classify_term_whnf(tm::var(3)) == Form::Neutral);
  CHECK(classify_term_whnf(tm::global(0, lwk(LocalCtx::empty(), 0))) == Form::Neutral);
  Term redex = tm::app(sample_lam(), Level::zero(), Level::zero(), "x", ty::nat(), ty::nat(),
                       tm::zero());
  CHECK(classify_term_whnf(redex) == Form::Reducible);
  CHECK(classify_term_whnf(tm::app(tm::var(0), Level::zero(), Level::zero(), "x", ty::nat(),
                                   ty::nat(), tm::zero())) == Form::Neutral);

  Motives m{ty::nat(), ty::nat()};
  Branches b;
  for (BranchKind k : kAllBranchKinds) b.at(k) = tm::zero();
  Term neutral_rec = tm::elim_trm(Level::zero(), Level::zero(), m, b, Level::zero(),
                                  LocalCtx::var(0), ty::nat(),
                                  tm::box_tm(tm::global(0, lwk(LocalCtx::var(0), 0))));
  CHECK(classify_term_whnf(neutral_rec) == Form::Neutral);
  Term dispatch_rec = tm::elim_trm(Level::zero(), Level::zero(), m, b, Level::zero(),
                                   LocalCtx::empty(), ty::nat(), tm::box_tm(tm::zero()));
  CHECK(classify_term_whnf(dispatch_rec) == Form::Reducible);
  Term stuck_scrut = tm::elim_typ(Level::zero(), Level::zero(), m, b, Level::zero(),
                                  LocalCtx::empty(), tm::var(0));
  CHECK(classify_term_whnf(stuck_scrut) == Form::Neutral);
}

TEST_CASE("structural equality ignores names, strict on levels") {
  Term a = tm::lam(Level::zero(), Level::zero(), "x", ty::nat(), tm::var(0, "x"));
  Term b = tm::lam(Level::zero(), Level::zero(), "y", ty::nat(), tm::var(0, "y"));
  CHECK(aeq(a, b));

  Level l1 = Level::lub(Level::var(0), Level::var(1));
  Level l2 = Level::lub(Level::var(1), Level::var(0));
  Term c = tm::box_ty(ty::universe(l1));
  Term d = tm::box_ty(ty::universe(l2));
  CHECK_FALSE(aeq(c, d));
  CHECK(aeq(c, d, LevelCmp::ModuloLevels));
}

TEST_CASE("lsubst lookup resolves through the base") {
  LocalCtx gx = LocalCtx::var(0).extended("x", ty::nat(), Level::zero());
  LocalSubst id = lsubst_id(gx);
  CHECK(aeq(lsubst_lookup(id, 0), tm::var(0)));
  // past the entry, the weakening base produces a shifted variable
  CHECK(aeq(lsubst_lookup(id, 1), tm::var(1)));
  CHECK(aeq(lsubst_lookup(id, 5), tm::var(5)));
  LocalSubst closed = LocalSubst::empty(std::nullopt, 0).extended(tm::zero());
  CHECK(aeq(lsubst_lookup(closed, 0), tm::zero()));
  CHECK_THROWS_AS(lsubst_lookup(closed, 1), KernelError);
}
