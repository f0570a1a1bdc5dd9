#include <catch2/catch_amalgamated.hpp>

#include "delam/reduce.hpp"

using namespace delam;

namespace {

const Level z = Level::zero();

Term nat_id() { return tm::lam(z, z, "x", ty::nat(), tm::var(0, "x")); }

Motives constant_nat_motives() { return Motives{ty::nat(), ty::nat()}; }

Branches zero_branches() {
  Branches b;
  for (BranchKind k : kAllBranchKinds) b.at(k) = tm::zero();
  return b;
}

// Branches that rebuild the scrutinized code; see the recursor signatures.
Motives requote_motives() {
  return Motives{ty::code_ty(LocalCtx::var(0), Level::var(0)),
                 ty::code_tm(LocalCtx::var(1), ty::global(0, lwk(LocalCtx::var(1), 0), "UT"),
                             Level::var(0))};
}

Branches requote_branches() {
  Branches b;
  auto idg = [](int g) { return lwk(LocalCtx::var(g), 0); };
  // type branches
  b.at(BranchKind::Nat) = tm::box_ty(ty::nat());
  {
    LocalCtx g = LocalCtx::var(2);
    LocalCtx gx = g.extended("x", ty::global(1, idg(2), "US"), Level::var(1));
    b.at(BranchKind::Pi) = tm::box_ty(ty::pi(Level::var(1), Level::var(0), "x",
                                             ty::global(1, idg(2), "US"),
                                             ty::global(0, lwk(gx, 0), "UT")));
  }
  b.at(BranchKind::Ty) = tm::box_ty(ty::universe(Level::var(0)));
  b.at(BranchKind::El) =
      tm::box_ty(ty::el(Level::var(0), tm::global(0, idg(1), "ut")));
  // term branches
  b.at(BranchKind::Var) = tm::box_tm(tm::global(0, idg(2), "ux"));
  b.at(BranchKind::NatCode) = tm::box_tm(tm::nat());
  {
    LocalCtx g = LocalCtx::var(2);
    LocalCtx gx = g.extended("x", ty::el(Level::var(1), tm::global(1, idg(2), "us")), Level::var(1));
    b.at(BranchKind::PiCode) = tm::box_tm(tm::pi(Level::var(1), Level::var(0), "x",
                                                 tm::global(1, idg(2), "us"),
                                                 tm::global(0, lwk(gx, 0), "ut")));
  }
  b.at(BranchKind::TyCode) = tm::box_tm(tm::universe(Level::var(0)));
  b.at(BranchKind::Zero) = tm::box_tm(tm::zero());
  b.at(BranchKind::Succ) = tm::box_tm(tm::succ(tm::global(0, idg(1), "ut")));
  {
    LocalCtx g = LocalCtx::var(4);
    LocalCtx g_x = g.extended("x", ty::nat(), z);
    LocalCtx g_xy = g_x.extended("y", ty::global(3, lwk(g_x, 0), "UM"), Level::var(0));
    b.at(BranchKind::ElimNat) = tm::box_tm(
        tm::elim_nat(Level::var(0), "x", ty::global(3, lwk(g_x, 0), "UM"),
                     tm::global(2, idg(4), "us"), "x", "y", tm::global(1, lwk(g_xy, 0), "us'"),
                     tm::global(0, idg(4), "ut")));
  }
  {
    LocalCtx g = LocalCtx::var(3);
    LocalCtx gx = g.extended("x", ty::global(2, idg(3), "US"), Level::var(1));
    b.at(BranchKind::Lam) = tm::box_tm(tm::lam(Level::var(1), Level::var(0), "x",
                                               ty::global(2, idg(3), "US"),
                                               tm::global(0, lwk(gx, 0), "ut")));
  }
  {
    LocalCtx g = LocalCtx::var(4);
    LocalCtx gx = g.extended("x", ty::global(3, idg(4), "US"), Level::var(1));
    b.at(BranchKind::App) = tm::box_tm(
        tm::app(tm::global(1, idg(4), "ut"), Level::var(1), Level::var(0), "x",
                ty::global(3, idg(4), "US"), ty::global(2, lwk(gx, 0), "UT"),
                tm::global(0, idg(4), "us")));
  }
  return b;
}

}  // namespace

TEST_CASE("El decodes encodings") {
  CHECK(aeq(whnf_type(ty::el(z, tm::nat())), ty::nat()));
  CHECK(aeq(whnf_type(ty::el(Level::succ(z), tm::universe(z))), ty::universe(z)));
  Type el_pi = ty::el(Level::lub(z, z), tm::pi(z, z, "x", tm::nat(), tm::nat()));
  Type expect = ty::pi(z, z, "x", ty::el(z, tm::nat()), ty::el(z, tm::nat()));
  REQUIRE(step_type(el_pi).has_value());
  CHECK(aeq(*step_type(el_pi), expect));
  // whnf stops at the Pi head; the components stay undecoded
  CHECK(aeq(whnf_type(el_pi), expect));
  CHECK_FALSE(step_type(ty::nat()).has_value());
  // congruence inside El
  Type nested = ty::el(z, tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::nat()));
  CHECK(aeq(whnf_type(nested), ty::nat()));
}

TEST_CASE("beta rules") {
  // elimNat on zero and successor; weak head stops under succ, so evaluate
  // natural number results by walking the spine
  auto nat_value = [](Term t) {
    t = whnf_term(t);
    int n = 0;
    while (const auto* s = t.as<TmSucc>()) {
      ++n;
      t = whnf_term(s->arg);
    }
    REQUIRE(t.is<TmZero>());
    return n;
  };
  Type motive = ty::nat();
  Term two = tm::succ(tm::succ(tm::zero()));
  Term plus_scrut = tm::elim_nat(z, "x", motive, tm::zero(), "x", "y", tm::succ(tm::var(0)), two);
  CHECK(nat_value(plus_scrut) == 2);
  // the successor rule substitutes the predecessor for x
  Term pred = tm::elim_nat(z, "x", motive, tm::zero(), "x", "y", tm::var(1, "x"), two);
  CHECK(aeq(whnf_term(pred), tm::succ(tm::zero())));
  Term on_zero = tm::elim_nat(z, "x", motive, tm::succ(tm::zero()), "x", "y",
                              tm::succ(tm::var(0, "y")), tm::zero());
  CHECK(aeq(whnf_term(on_zero), tm::succ(tm::zero())));

  // function beta
  Term app = tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::succ(tm::zero()));
  CHECK(aeq(whnf_term(app), tm::succ(tm::zero())));

  // universe-polymorphic beta
  Term poly = tm::ulam(Level::succ(Level::var(0)), 1, {"k"}, tm::box_ty(ty::universe(Level::var(0))));
  Term inst = tm::uapp(poly, {Level::constant(3)});
  CHECK(aeq(whnf_term(inst), tm::box_ty(ty::universe(Level::constant(3)))));

  // context function beta
  Term cf = tm::ctx_lam(z, "g", tm::box_ty(ty::nat()));
  CHECK(aeq(whnf_term(tm::ctx_app(cf, LocalCtx::empty())), tm::box_ty(ty::nat())));

  // type function beta
  Term tf = tm::ty_lam(z, z, "U", LocalCtx::empty(),
                       tm::box_ty(ty::global(0, lwk(LocalCtx::empty(), 0), "U")));
  CHECK(aeq(whnf_term(tm::ty_app(tf, ty::nat())), tm::box_ty(ty::nat())));

  // letbox splices code
  Term lb = tm::letbox_tm(z, z, LocalCtx::empty(), ty::nat(), "xt", ty::nat(), "u",
                          tm::succ(tm::global(0, lwk(LocalCtx::empty(), 0), "u")),
                          tm::box_tm(tm::zero()));
  CHECK(aeq(whnf_term(lb), tm::succ(tm::zero())));

  Term lbt = tm::letbox_ty(z, z, LocalCtx::empty(), "xT",
                           ty::code_ty(LocalCtx::empty(), z), "U",
                           tm::box_ty(ty::global(0, lwk(LocalCtx::empty(), 0), "U")),
                           tm::box_ty(ty::nat()));
  CHECK(aeq(whnf_term(lbt), tm::box_ty(ty::nat())));
}

TEST_CASE("whnf is deterministic and stops at neutrals") {
  Term neutral = tm::app(tm::var(0, "f"), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  CHECK(aeq(whnf_term(neutral), neutral));
  CHECK_FALSE(step_term(tm::zero()).has_value());
  CHECK_FALSE(step_term(neutral).has_value());

  Term loopless = tm::elim_nat(z, "x", ty::nat(), tm::zero(), "x", "y", tm::var(0),
                               tm::succ(tm::succ(tm::succ(tm::zero()))));
  Term a = whnf_term(loopless);
  Term b = whnf_term(loopless);
  CHECK(aeq(a, b));
}

TEST_CASE("fuel exhaustion is reported") {
  Term t = tm::elim_nat(z, "x", ty::nat(), tm::zero(), "x", "y", tm::var(0),
                        tm::succ(tm::succ(tm::succ(tm::zero()))));
  CHECK_THROWS_AS(whnf_term(t, Fuel{1}), FuelExhausted);
}

TEST_CASE("recursor dispatch hits every branch") {
  Motives m = constant_nat_motives();
  Branches b = zero_branches();
  LocalCtx empty = LocalCtx::empty();
  auto run_ty = [&](Level l, Type code) {
    return whnf_term(tm::elim_typ(z, z, m, b, l, empty, tm::box_ty(std::move(code))));
  };
  auto run_tm = [&](Level l, Type index, Term code) {
    return whnf_term(
        tm::elim_trm(z, z, m, b, l, empty, std::move(index), tm::box_tm(std::move(code))));
  };
  // with constant Nat motives and zero branches, every dispatch lands on zero
  CHECK(aeq(run_ty(z, ty::nat()), tm::zero()));
  CHECK(aeq(run_ty(Level::lub(z, z), ty::pi(z, z, "x", ty::nat(), ty::nat())), tm::zero()));
  CHECK(aeq(run_ty(Level::succ(z), ty::universe(z)), tm::zero()));
  CHECK(aeq(run_ty(z, ty::el(z, tm::zero())), tm::zero()));

  CHECK(aeq(run_tm(Level::constant(1), ty::universe(z), tm::nat()), tm::zero()));
  CHECK(aeq(run_tm(Level::constant(1), ty::universe(z), tm::pi(z, z, "x", tm::nat(), tm::nat())),
            tm::zero()));
  CHECK(aeq(run_tm(Level::constant(2), ty::universe(Level::constant(1)), tm::universe(z)),
            tm::zero()));
  CHECK(aeq(run_tm(z, ty::nat(), tm::zero()), tm::zero()));
  CHECK(aeq(run_tm(z, ty::nat(), tm::succ(tm::zero())), tm::zero()));
  CHECK(aeq(run_tm(z, ty::nat(),
                   tm::elim_nat(z, "x", ty::nat(), tm::zero(), "x", "y", tm::var(0), tm::zero())),
            tm::zero()));
  CHECK(aeq(run_tm(Level::lub(z, z), ty::pi(z, z, "x", ty::nat(), ty::nat()), nat_id()),
            tm::zero()));
  CHECK(
      aeq(run_tm(z, ty::nat(), tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero())),
          tm::zero()));
  // variable code, in a context with one entry
  LocalCtx one = LocalCtx::empty().extended("x", ty::nat(), z);
  CHECK(aeq(whnf_term(tm::elim_trm(z, z, m, b, z, one, ty::nat(), tm::box_tm(tm::var(0, "x")))),
            tm::zero()));
}

TEST_CASE("recursors block on boxed globals and neutral scrutinees") {
  Motives m = constant_nat_motives();
  Branches b = zero_branches();
  GlobalCtx psi;
  psi = psi.extended(CtxBind{"g"});
  psi = psi.extended(TypBind{"U", LocalCtx::var(0), Layer::C, z});
  Term stuck = tm::elim_typ(z, z, m, b, z, LocalCtx::var(1),
                            tm::box_ty(ty::global(0, lwk(LocalCtx::var(1), 0), "U")));
  CHECK_FALSE(step_term(stuck).has_value());
  CHECK(classify_term_whnf(stuck) == Form::Neutral);

  Term neutral_scrut = tm::elim_typ(z, z, m, b, z, LocalCtx::empty(), tm::var(0, "c"));
  CHECK_FALSE(step_term(neutral_scrut).has_value());
}

TEST_CASE("the term recursor reduces its type index before the scrutinee") {
  Motives m = constant_nat_motives();
  Branches b = zero_branches();
  Type index = ty::el(z, tm::nat());
  Term rec = tm::elim_trm(z, z, m, b, z, LocalCtx::empty(), index, tm::box_tm(tm::zero()));
  std::optional<Term> once = step_term(rec);
  REQUIRE(once.has_value());
  const auto* e = once->as<TmElimTrm>();
  REQUIRE(e != nullptr);
  CHECK(aeq(e->index_type, ty::nat()));
  CHECK(aeq(e->scrut, tm::box_tm(tm::zero())));  // scrutinee untouched on the first step
  CHECK(aeq(whnf_term(rec), tm::zero()));
}

TEST_CASE("requote recursor rebuilds the code of a function") {
  Motives m = requote_motives();
  Branches b = requote_branches();
  // code of \x:Nat. succ x at Pi(x:Nat).Nat
  Term code = tm::lam(z, z, "x", ty::nat(), tm::succ(tm::var(0, "x")));
  Type index = ty::pi(z, z, "x", ty::nat(), ty::nat());
  Term rec = tm::elim_trm(z, z, m, b, Level::lub(z, z), LocalCtx::empty(), index,
                          tm::box_tm(code));
  Term out = whnf_term(rec);
  CHECK(aeq(out, tm::box_tm(code), LevelCmp::ModuloLevels));
}

TEST_CASE("requote recursor round-trips assorted codes") {
  Motives m = requote_motives();
  Branches b = requote_branches();
  const Level one = Level::constant(1);
  struct Case {
    Level level;
    Type index;
    Term code;
  };
  std::vector<Case> cases = {
      {one, ty::universe(z), tm::nat()},
      {z, ty::nat(), tm::succ(tm::succ(tm::zero()))},
      {one, ty::universe(z), tm::pi(z, z, "x", tm::nat(), tm::nat())},
      {Level::constant(2), ty::universe(one), tm::universe(z)},
      {z, ty::nat(), tm::app(tm::lam(z, z, "x", ty::nat(), tm::var(0)), z, z, "x", ty::nat(),
                             ty::nat(), tm::zero())},
      {z, ty::nat(),
       tm::elim_nat(z, "x", ty::nat(), tm::zero(), "x", "y", tm::succ(tm::var(0)), tm::zero())},
  };
  for (const Case& c : cases) {
    Term rec =
        tm::elim_trm(z, z, m, b, c.level, LocalCtx::empty(), c.index, tm::box_tm(c.code));
    CHECK(aeq(whnf_term(rec), tm::box_tm(c.code), LevelCmp::ModuloLevels));
  }
  // and for codes of types
  std::vector<std::pair<Level, Type>> tycases = {
      {z, ty::nat()},
      {Level::lub(z, z), ty::pi(z, z, "x", ty::nat(), ty::nat())},
      {one, ty::universe(z)},
      {z, ty::el(z, tm::nat())},
  };
  for (const auto& [l, code] : tycases) {
    Term rec = tm::elim_typ(z, z, m, b, l, LocalCtx::empty(), tm::box_ty(code));
    CHECK(aeq(whnf_term(rec), tm::box_ty(code), LevelCmp::ModuloLevels));
  }
}
