#include <catch2/catch_amalgamated.hpp>

#include "delam/typing.hpp"

using namespace delam;

namespace {

const Level z = Level::zero();
const UnivCtx no_levels;
const GlobalCtx no_globals;
const LocalCtx no_locals;

Term nat_id() { return tm::lam(z, z, "x", ty::nat(), tm::var(0, "x")); }

bool types_conv(Layer i, const Type& a, const Type& b, const Level& l, const UnivCtx& uc = {},
                const GlobalCtx& gc = {}, const LocalCtx& lc = {}) {
  return conv_type(uc, gc, lc, i, a, b, l).ok;
}

bool terms_conv(Layer i, const Term& a, const Term& b, const Type& t, const Level& l,
                const UnivCtx& uc = {}, const GlobalCtx& gc = {}, const LocalCtx& lc = {}) {
  return conv_term(uc, gc, lc, i, a, b, t, l).ok;
}

}  // namespace

TEST_CASE("type convertibility reduces to weak head normal forms") {
  CHECK(types_conv(Layer::D, ty::el(z, tm::nat()), ty::nat(), z));
  CHECK_FALSE(types_conv(Layer::D, ty::nat(), ty::universe(z), Level::constant(1)));

  UnivCtx two({"a", "b"});
  Level ab = Level::lub(Level::var(1), Level::var(0));
  Level ba = Level::lub(Level::var(0), Level::var(1));
  CHECK(types_conv(Layer::M, ty::universe(ab), ty::universe(ba), Level::succ(ab), two));

  // decoded Pi components
  Type lhs = ty::pi(z, z, "x", ty::el(z, tm::nat()), ty::el(z, tm::nat()));
  Type rhs = ty::pi(z, z, "x", ty::nat(), ty::nat());
  CHECK(types_conv(Layer::D, lhs, rhs, z));
  // El of a beta redex reduces before comparison
  Type el_redex = ty::el(z, tm::app(tm::lam(Level::constant(1), Level::constant(1), "t",
                                            ty::universe(z), tm::var(0, "t")),
                                    Level::constant(1), Level::constant(1), "t", ty::universe(z),
                                    ty::universe(z), tm::nat()));
  CHECK(types_conv(Layer::D, el_redex, ty::nat(), z));
}

TEST_CASE("layer-m-only types are rejected at layer d") {
  Type code = ty::code_ty(LocalCtx::empty(), z);
  CHECK_FALSE(types_conv(Layer::D, code, code, z));
  CHECK(types_conv(Layer::M, code, code, z));
}

TEST_CASE("beta redexes are convertible to their reducts") {
  Term redex = tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  CHECK(terms_conv(Layer::D, redex, tm::zero(), ty::nat(), z));
  Term en = tm::elim_nat(z, "x", ty::nat(), tm::succ(tm::zero()), "x", "y", tm::var(0),
                         tm::zero());
  CHECK(terms_conv(Layer::D, en, tm::succ(tm::zero()), ty::nat(), z));
}

TEST_CASE("eta for all function-like types") {
  // Pi
  Type pi_ty = ty::pi(z, z, "x", ty::nat(), ty::nat());
  LocalCtx with_f = LocalCtx::empty().extended("f", pi_ty, z);
  Term f = tm::var(0, "f");
  Term f_eta = tm::lam(z, z, "x", ty::nat(),
                       tm::app(tm::var(1, "f"), z, z, "x", ty::nat(), ty::nat(), tm::var(0, "x")));
  CHECK(terms_conv(Layer::D, f, f_eta, pi_ty, z, {}, {}, with_f));

  // UPi
  Type upi_ty = ty::upi(1, {"k"}, Level::succ(Level::var(0)), ty::universe(Level::var(0)));
  LocalCtx with_p = LocalCtx::empty().extended("p", upi_ty, Level::omega());
  Term p = tm::var(0, "p");
  Term p_eta = tm::ulam(Level::succ(Level::var(0)), 1, {"k"},
                        tm::uapp(tm::var(0, "p"), {Level::var(0)}));
  CHECK(terms_conv(Layer::M, p, p_eta, upi_ty, Level::omega(), {}, {}, with_p));

  // CtxPi
  Type cpi_ty = ty::ctx_pi("g", z, ty::code_ty(LocalCtx::var(0), z));
  LocalCtx with_c = LocalCtx::empty().extended("c", cpi_ty, z);
  Term c = tm::var(0, "c");
  Term c_eta = tm::ctx_lam(z, "g", tm::ctx_app(tm::var(0, "c"), LocalCtx::var(0)));
  CHECK(terms_conv(Layer::M, c, c_eta, cpi_ty, z, {}, {}, with_c));

  // TyPi
  Type tpi_ty = ty::ty_pi("U", LocalCtx::empty(), z, z,
                          ty::code_ty(LocalCtx::empty(), z));
  LocalCtx with_t = LocalCtx::empty().extended("h", tpi_ty, z);
  Term h = tm::var(0, "h");
  Term h_eta = tm::ty_lam(z, z, "U", LocalCtx::empty(),
                          tm::ty_app(tm::var(0, "h"),
                                     ty::global(0, lwk(LocalCtx::empty(), 0), "U")));
  CHECK(terms_conv(Layer::M, h, h_eta, tpi_ty, z, {}, {}, with_t));

  // non-convertible pair at a function type
  Term g2 = tm::lam(z, z, "x", ty::nat(), tm::succ(tm::var(0, "x")));
  CHECK_FALSE(terms_conv(Layer::D, nat_id(), g2, pi_ty, z));
}

TEST_CASE("boxed code compares as static code") {
  UnivCtx two({"a", "b"});
  Level ab = Level::lub(Level::var(1), Level::var(0));
  Level ba = Level::lub(Level::var(0), Level::var(1));
  Type code_t = ty::code_ty(LocalCtx::empty(), Level::succ(ab));
  Term left = tm::box_ty(ty::universe(ab));
  Term right = tm::box_ty(ty::universe(ba));
  CHECK(terms_conv(Layer::M, left, right, code_t, z, two));

  // but a beta-equal, syntactically different boxed term is NOT equal as code
  Term redex = tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  Type code_nat = ty::code_tm(LocalCtx::empty(), ty::nat(), z);
  CHECK_FALSE(terms_conv(Layer::M, tm::box_tm(redex), tm::box_tm(tm::zero()), code_nat, z));
  CHECK(terms_conv(Layer::M, tm::box_tm(redex), tm::box_tm(redex), code_nat, z));
}

TEST_CASE("context and local substitution convertibility") {
  CHECK(conv_ctx(no_levels, no_globals, Layer::D, LocalCtx::empty(), LocalCtx::empty()).ok);
  LocalCtx a = LocalCtx::empty().extended("x", ty::el(z, tm::nat()), z);
  LocalCtx b = LocalCtx::empty().extended("x", ty::nat(), z);
  CHECK(conv_ctx(no_levels, no_globals, Layer::D, a, b).ok);

  GlobalCtx psi = GlobalCtx{}.extended(CtxBind{"g"});
  CHECK_FALSE(conv_ctx(no_levels, psi, Layer::D, LocalCtx::empty(), LocalCtx::var(0)).ok);

  // substitution entries compare at the instantiated types
  LocalCtx target = LocalCtx::empty().extended("x", ty::nat(), z);
  LocalSubst s1 = LocalSubst::empty(std::nullopt, 0)
                      .extended(tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero()));
  LocalSubst s2 = LocalSubst::empty(std::nullopt, 0).extended(tm::zero());
  CHECK(conv_lsubst(no_levels, no_globals, no_locals, Layer::D, s1, s2, target).ok);
  LocalSubst s3 = LocalSubst::empty(std::nullopt, 0).extended(tm::succ(tm::zero()));
  CHECK_FALSE(conv_lsubst(no_levels, no_globals, no_locals, Layer::D, s2, s3, target).ok);
  // base mismatch
  CHECK_FALSE(conv_lsubst(no_levels, psi, LocalCtx::var(0), Layer::D, LocalSubst::empty(0, 0),
                          LocalSubst::weaken(0, 0), LocalCtx::empty())
                  .ok);
}

TEST_CASE("neutral terms infer left-biased types") {
  GlobalCtx psi;
  psi = psi.extended(CtxBind{"g"});
  psi = psi.extended(TrmBind{"u", LocalCtx::var(0), Layer::C, ty::nat(), z});
  LocalCtx gamma = LocalCtx::var(1);

  Term u = tm::global(0, lwk(gamma, 0), "u");
  CHECK(terms_conv(Layer::D, u, u, ty::nat(), z, {}, psi, gamma));
  CHECK(terms_conv(Layer::D, tm::succ(u), tm::succ(u), ty::nat(), z, {}, psi, gamma));

  // different heads fail
  LocalCtx two_vars =
      LocalCtx::empty().extended("x", ty::nat(), z).extended("y", ty::nat(), z);
  CHECK_FALSE(terms_conv(Layer::D, tm::var(0), tm::var(1), ty::nat(), z, {}, {}, two_vars));

  // application annotations are compared even when the heads agree
  LocalCtx with_f =
      LocalCtx::empty().extended("f", ty::pi(z, z, "x", ty::nat(), ty::nat()), z);
  Term a1 = tm::app(tm::var(0, "f"), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  Term a2 = tm::app(tm::var(0, "f"), z, z, "x", ty::nat(), ty::el(z, tm::nat()), tm::zero());
  CHECK(terms_conv(Layer::D, a1, a2, ty::nat(), z, {}, {}, with_f));
  Term a3 = tm::app(tm::var(0, "f"), z, z, "x", ty::nat(), ty::nat(), tm::succ(tm::zero()));
  CHECK_FALSE(terms_conv(Layer::D, a1, a3, ty::nat(), z, {}, {}, with_f));
}

TEST_CASE("stuck recursors compare motives, branches, indices and scrutinees") {
  Motives m{ty::nat(), ty::nat()};
  Branches b;
  for (BranchKind k : kAllBranchKinds) b.at(k) = tm::zero();

  GlobalCtx psi;
  psi = psi.extended(CtxBind{"g"});
  psi = psi.extended(TrmBind{"u", LocalCtx::var(0), Layer::C, ty::nat(), z});
  LocalCtx gamma = LocalCtx::var(1);
  Term scrut = tm::box_tm(tm::global(0, lwk(LocalCtx::var(1), 0), "u"));

  Term r1 = tm::elim_trm(z, z, m, b, z, LocalCtx::var(1), ty::nat(), scrut);
  CHECK(terms_conv(Layer::M, r1, r1, ty::nat(), z, {}, psi, gamma));

  // a differing branch is detected even though it is never dispatched
  Branches b2 = b;
  b2.at(BranchKind::Succ) = tm::succ(tm::zero());
  Term r2 = tm::elim_trm(z, z, m, b2, z, LocalCtx::var(1), ty::nat(), scrut);
  CHECK_FALSE(terms_conv(Layer::M, r1, r2, ty::nat(), z, {}, psi, gamma));

  // a convertible-but-different branch is fine
  Branches b3 = b;
  b3.at(BranchKind::Succ) =
      tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  Term r3 = tm::elim_trm(z, z, m, b3, z, LocalCtx::var(1), ty::nat(), scrut);
  CHECK(terms_conv(Layer::M, r1, r3, ty::nat(), z, {}, psi, gamma));

  // differing boxed-global scrutinees fail
  GlobalCtx psi2 = psi.extended(TrmBind{"v", LocalCtx::var(1), Layer::C, ty::nat(), z});
  Term scrut2 = tm::box_tm(tm::global(0, lwk(LocalCtx::var(2), 0), "v"));
  Term r4 = tm::elim_trm(z, z, m, b, z, LocalCtx::var(2), ty::nat(), scrut2);
  Term r1_shifted = gshift(r1, 1, 0);
  CHECK_FALSE(terms_conv(Layer::M, r1_shifted, r4, ty::nat(), z, {}, psi2, LocalCtx::var(2)));
}

TEST_CASE("pi injectivity via the checker") {
  // if two whnf Pi types are convertible, their parts are convertible
  Type s1 = ty::el(z, tm::nat());
  Type t1 = ty::pi(z, z, "x", s1, ty::nat());
  Type t2 = ty::pi(z, z, "x", ty::nat(), ty::el(z, tm::nat()));
  REQUIRE(types_conv(Layer::D, t1, t2, z));
  const auto* p1 = t1.as<TyPi>();
  const auto* p2 = t2.as<TyPi>();
  CHECK(types_conv(Layer::D, p1->dom, p2->dom, z));
  LocalCtx ext = LocalCtx::empty().extended("x", p1->dom, z);
  CHECK(types_conv(Layer::D, p1->cod, p2->cod, z, {}, {}, ext));
}

TEST_CASE("convertibility is a PER on well-typed subjects") {
  std::vector<std::pair<Term, Type>> subjects = {
      {tm::zero(), ty::nat()},
      {nat_id(), ty::pi(z, z, "x", ty::nat(), ty::nat())},
      {tm::box_tm(tm::zero()), ty::code_tm(LocalCtx::empty(), ty::nat(), z)},
      {tm::ctx_lam(z, "g", tm::box_ty(ty::nat())),
       ty::ctx_pi("g", z, ty::code_ty(LocalCtx::var(0), z))},
  };
  for (const auto& [t, t_ty] : subjects) {
    CHECK(terms_conv(Layer::M, t, t, t_ty, z));
  }
  // symmetry and transitivity across a convertible triple
  Term a = tm::app(nat_id(), z, z, "x", ty::nat(), ty::nat(), tm::zero());
  Term b = tm::zero();
  Term c = tm::elim_nat(z, "x", ty::nat(), tm::zero(), "x", "y", tm::var(0), tm::zero());
  CHECK(terms_conv(Layer::D, a, b, ty::nat(), z));
  CHECK(terms_conv(Layer::D, b, a, ty::nat(), z));
  CHECK(terms_conv(Layer::D, b, c, ty::nat(), z));
  CHECK(terms_conv(Layer::D, a, c, ty::nat(), z));
}

TEST_CASE("conv requires a computing layer") {
  CHECK_THROWS_AS(conv_type(no_levels, no_globals, no_locals, Layer::C, ty::nat(), ty::nat(), z),
                  KernelError);
}
