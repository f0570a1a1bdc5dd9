#include <catch2/catch_amalgamated.hpp>

#include "delam/subst.hpp"

using namespace delam;

namespace {

const Level z = Level::zero();

Term nat_id() { return tm::lam(z, z, "x", ty::nat(), tm::var(0, "x")); }

}  // namespace

TEST_CASE("generalized local weakening") {
  // wk^0 over the empty context is the empty substitution
  LocalSubst w0 = lwk(LocalCtx::empty(), 0);
  CHECK(w0.base == LocalSubst::Base::Empty);
  CHECK_FALSE(w0.base_var.has_value());
  CHECK(w0.base_count == 0);
  CHECK(w0.entries.empty());

  // wk^2 over a bare context variable
  LocalSubst w2 = lwk(LocalCtx::var(0), 2);
  CHECK(w2.base == LocalSubst::Base::Weaken);
  CHECK(w2.base_var == std::optional<int>(0));
  CHECK(w2.base_count == 2);

  // wk^0 over (., x:Nat) unfolds one step: base count 1, entry x
  LocalSubst w = lwk(LocalCtx::empty().extended("x", ty::nat(), z), 0);
  CHECK(w.base_count == 1);
  REQUIRE(w.entries.size() == 1);
  CHECK(aeq(w.entries[0], tm::var(0)));

  CHECK(lsubst_hat(LocalSubst::weaken(0, 3)) == 3);
  CHECK_FALSE(lsubst_check(LocalSubst::empty(std::nullopt, 5)).has_value());
  CHECK(lsubst_hat(LocalSubst::weaken(0, 3).extended(tm::zero())) == 3);
}

TEST_CASE("local substitution application") {
  LocalCtx ctx = LocalCtx::empty().extended("x", ty::nat(), z);
  LocalSubst sub = lsubst_id(LocalCtx::empty()).extended(tm::zero());
  // variable lookup
  CHECK(aeq(lsubst_apply_term(tm::var(0), sub), tm::zero()));
  // substitution stops at box
  Term boxed = tm::box_tm(tm::var(0));
  CHECK(aeq(lsubst_apply_term(boxed, sub), boxed));
  // binders extend with the bound variable
  Term f = tm::lam(z, z, "y", ty::nat(), tm::succ(tm::var(1)));
  CHECK(aeq(lsubst_apply_term(f, sub), tm::lam(z, z, "y", ty::nat(), tm::succ(tm::zero()))));
  (void)ctx;
}

TEST_CASE("composition of weakening bases") {
  // wk_g^k o d = wk_g^(hat d)
  LocalSubst left = LocalSubst::weaken(0, 2);
  LocalSubst right = LocalSubst::weaken(0, 5);
  LocalSubst r = lsubst_compose(left, right);
  CHECK(r.base == LocalSubst::Base::Weaken);
  CHECK(r.base_count == 5);

  // empty base takes hat and check from the right
  LocalSubst left2 = LocalSubst::empty(std::nullopt, 1);
  LocalSubst right2 = LocalSubst::empty(0, 7);
  LocalSubst r2 = lsubst_compose(left2, right2);
  CHECK(r2.base == LocalSubst::Base::Empty);
  CHECK(r2.base_var == std::optional<int>(0));
  CHECK(r2.base_count == 7);
}

TEST_CASE("global weakening and identity") {
  GlobalCtx psi;
  CHECK(gwk(psi, 0).entries.empty());

  psi = psi.extended(CtxBind{"g"});
  GlobalSubst id1 = gsubst_id(psi);
  REQUIRE(id1.entries.size() == 1);
  CHECK(std::get<LocalCtx>(id1.entries[0]).base == std::optional<int>(0));

  psi = psi.extended(TrmBind{"u", LocalCtx::var(0), Layer::C, ty::nat(), z});
  GlobalSubst id2 = gsubst_id(psi);
  REQUIRE(id2.entries.size() == 2);
  CHECK(std::get<LocalCtx>(id2.entries[0]).base == std::optional<int>(1));
  const Term& u_entry = std::get<Term>(id2.entries[1]);
  const auto* g = u_entry.as<TmGlobal>();
  REQUIRE(g != nullptr);
  CHECK(g->index == 0);
  CHECK(g->subst.base == LocalSubst::Base::Weaken);
  CHECK(g->subst.base_var == std::optional<int>(1));
}

TEST_CASE("global substitution application") {
  // sigma sending g to (., x:Nat) and u to zero
  GlobalSubst sigma;
  sigma.entries.push_back(LocalCtx::empty().extended("x", ty::nat(), z));
  sigma.entries.push_back(tm::zero());

  // u^delta [sigma] = sigma(u)[delta[sigma]]
  Term u = tm::global(0, lwk(LocalCtx::var(1), 0), "u");
  CHECK(aeq(gsubst_apply(u, sigma), tm::zero()));

  // wk base over g expands to the generalized weakening of sigma(g)
  LocalSubst wk_g = lwk(LocalCtx::var(1), 0);
  LocalSubst expanded = gsubst_apply(wk_g, sigma);
  CHECK(expanded.base == LocalSubst::Base::Empty);
  CHECK(expanded.base_count == 1);
  REQUIRE(expanded.entries.size() == 1);
  CHECK(aeq(expanded.entries[0], tm::var(0)));

  // empty base over g gains the spliced context's length
  LocalSubst dot2_g = LocalSubst::empty(1, 2);
  LocalSubst dot3 = gsubst_apply(dot2_g, sigma);
  CHECK(dot3.base == LocalSubst::Base::Empty);
  CHECK_FALSE(dot3.base_var.has_value());
  CHECK(dot3.base_count == 3);

  // context base splice
  LocalCtx gx = LocalCtx::var(1).extended("y", ty::nat(), z);
  LocalCtx spliced = gsubst_apply(gx, sigma);
  CHECK_FALSE(spliced.ends_with_var());
  REQUIRE(spliced.entries.size() == 2);

  // kind mismatch is an error
  Term bad = tm::global(1, lwk(LocalCtx::empty(), 0), "u");
  CHECK_THROWS_AS(gsubst_apply(bad, sigma), KernelError);
}

TEST_CASE("universe substitution across syntax") {
  UnivSubst phi({Level::constant(2)});
  Type t = ty::universe(Level::var(0));
  CHECK(aeq(usubst_apply_syntax(t, phi), ty::universe(Level::constant(2))));

  // lifting under a universe binder leaves the bound variable alone and
  // substitutes the free one
  Type upi = ty::upi(1, {"k"}, Level::var(0), ty::universe(Level::var(1)));
  Type expect = ty::upi(1, {"k"}, Level::var(0), ty::universe(Level::constant(2)));
  CHECK(aeq(usubst_apply_syntax(upi, phi), expect));

  // identity law on a composite
  Term big = tm::ulam(Level::var(0), 1, {"k"},
                      tm::box_ty(ty::universe(Level::lub(Level::var(0), Level::var(1)))));
  UnivSubst idphi = usubst_id(1);
  CHECK(aeq(usubst_apply_syntax(big, idphi), big));
}

TEST_CASE("shift and instantiation round trips") {
  Term body = tm::succ(tm::var(0));
  CHECK(aeq(linst(lshift(tm::zero(), 1, 0), {tm::zero()}), tm::zero()));
  CHECK(aeq(linst(body, {tm::zero()}), tm::succ(tm::zero())));
  // weakened instantiation shifts the free remainder up
  Term open_body = tm::succ(tm::var(1));
  CHECK(aeq(linst(open_body, {tm::zero()}, 2), tm::succ(tm::var(2))));

  // global instantiation substitutes through the annotation substitution
  Term u_use = tm::global(0, lsubst_id(LocalCtx::empty()).extended(tm::zero()), "u");
  Term plugged = ginst(u_use, {GlobalEntry{tm::succ(tm::var(0))}});
  CHECK(aeq(plugged, tm::succ(tm::zero())));

  // level instantiation
  Type two_vars = ty::universe(Level::lub(Level::var(0), Level::var(1)));
  Type inst = uinst(two_vars, {Level::constant(1), Level::constant(2)});
  // payload order: the last payload feeds the innermost variable
  CHECK(aeq(inst, ty::universe(Level::lub(Level::constant(2), Level::constant(1)))));
}

TEST_CASE("single-substitution helpers") {
  CHECK(aeq(subst_top_term(tm::var(0), tm::zero()), tm::zero()));
  Type body = ty::el(z, tm::var(0));
  CHECK(aeq(subst_top_term(body, tm::nat()), ty::el(z, tm::nat())));

  // context splice through subst_top_lctx
  Type in_g = ty::code_ty(LocalCtx::var(0), z);
  LocalCtx delta = LocalCtx::empty().extended("x", ty::nat(), z);
  CHECK(aeq(subst_top_lctx(in_g, delta), ty::code_ty(delta, z)));

  CHECK(aeq(subst_top_levels(ty::universe(Level::var(0)), {Level::constant(4)}),
            ty::universe(Level::constant(4))));

  // type-for-global substitution
  Type use = ty::global(0, lwk(LocalCtx::empty(), 0), "U");
  CHECK(aeq(subst_top_type(use, ty::nat()), ty::nat()));
}

TEST_CASE("identity laws on handwritten subjects") {
  GlobalCtx psi;
  psi = psi.extended(CtxBind{"g"});
  psi = psi.extended(TypBind{"U", LocalCtx::var(0), Layer::C, z});
  psi = psi.extended(
      TrmBind{"u", LocalCtx::var(1).extended("x", ty::global(0, lwk(LocalCtx::var(1), 0)), z),
              Layer::C, ty::nat(), z});
  GlobalSubst sid = gsubst_id(psi);

  LocalCtx gamma = LocalCtx::var(2).extended("x", ty::global(1, lwk(LocalCtx::var(2), 0), "U"), z);
  LocalSubst lid = lsubst_id(gamma);

  std::vector<Term> samples = {
      tm::var(0),
      tm::global(0, lid, "u"),
      nat_id(),
      tm::box_tm(tm::succ(tm::global(0, lwk(LocalCtx::var(2), 0).extended(tm::var(0)), "u"))),
      tm::letbox_ty(z, z, LocalCtx::var(2), "xT", ty::nat(), "U'",
                    tm::zero(), tm::box_ty(ty::global(1, lwk(LocalCtx::var(2), 0), "U"))),
  };
  for (const Term& t : samples) {
    CHECK(aeq(gsubst_apply(t, sid), t));
    CHECK(aeq(lsubst_apply_term(t, lid), t));
  }
  CHECK(aeq(gsubst_apply(gamma, sid), gamma));
  LocalSubst d = lwk(gamma, 0).extended(tm::zero());
  CHECK(aeq(gsubst_apply(d, sid), d));
}
