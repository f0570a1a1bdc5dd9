#include <catch2/catch_amalgamated.hpp>

#include "delam/driver.hpp"
#include "delam/printer.hpp"

using namespace delam;

namespace {

const Level z = Level::zero();

SourceFile parse_ok(const std::string& text) {
  SourceFile f = parse_file(text);
  check_file(f);
  return f;
}

}  // namespace

TEST_CASE("parsing simple definitions") {
  SourceFile f = parse_ok("def z @ c : Nat @ 0 := zero;");
  REQUIRE(f.defs.size() == 1);
  CHECK(f.defs[0].layer == Layer::C);
  CHECK(aeq(f.defs[0].term, tm::zero()));
  CHECK(aeq(f.defs[0].type, ty::nat()));

  SourceFile f2 = parse_ok("def t @ d : El 0 Nat @ 0 := zero;");
  CHECK(aeq(f2.defs[0].type, ty::el(z, tm::nat())));

  SourceFile f3 = parse_ok(
      "def idf @ c : Pi (x : Nat @ 0) @ 0. Nat @ 0 \\/ 0 := fun (x : Nat @ 0) @ 0. x;");
  REQUIRE(f3.defs[0].type.is<TyPi>());
  REQUIRE(f3.defs[0].term.is<TmLam>());
}

TEST_CASE("level expressions") {
  UnivCtx two({"l", "l'"});
  CHECK(parse_level_expr("l \\/ (1+l)", two) ==
        Level::lub(Level::var(1), Level::succ(Level::var(1))));
  CHECK(parse_level_expr("2", two) == Level::constant(2));
  CHECK(parse_level_expr("2+l'", two) == Level::plus(2, Level::var(0)));
  CHECK_THROWS_AS(parse_level_expr("nope", two), ParseError);
  CHECK_THROWS_AS(parse_level_expr("l (", two), ParseError);
}

TEST_CASE("globals, contexts and substitutions") {
  std::string src =
      "level-vars k;\n"
      "global g : Ctx;\n"
      "global U : [ g |- Ty k ] @ c;\n"
      "global u : [ g, x : U @ k |- Nat : 0 ] @ c;\n"
      "def probe @ m : [ g, x : U @ k |- Nat : 0 ] @ 0 := box tm u;\n";
  SourceFile f = parse_ok(src);
  REQUIRE(f.gctx.size() == 3);
  CHECK(f.uctx.names == std::vector<std::string>{"k"});
  const auto* ub = std::get_if<TrmBind>(&f.gctx.binds[2]);
  REQUIRE(ub != nullptr);
  CHECK(ub->layer == Layer::C);
  REQUIRE(ub->ctx.entries.size() == 1);
  // x's type is U applied to the identity over g
  const auto* ug = ub->ctx.entries[0].type.as<TyGlobal>();
  REQUIRE(ug != nullptr);
  CHECK(ug->index == 0);
  CHECK(ug->subst.base == LocalSubst::Base::Weaken);

  // explicit substitutions
  std::string src2 =
      "global g : Ctx;\n"
      "global u : [ g, x : Nat @ 0 |- Nat : 0 ] @ c;\n"
      "def probe @ m : [ g |- Nat : 0 ] @ 0 := box tm u^(id, zero/x);\n";
  SourceFile f2 = parse_ok(src2);
  const Term& body = f2.defs[0].term.as<TmBoxTm>()->body;
  const auto* gu = body.as<TmGlobal>();
  REQUIRE(gu != nullptr);
  REQUIRE(gu->subst.entries.size() == 1);
  CHECK(aeq(gu->subst.entries[0], tm::zero()));
  CHECK(gu->subst.base == LocalSubst::Base::Weaken);
  CHECK(gu->subst.base_count == 0);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_file("def x"), ParseError);
  CHECK_THROWS_AS(parse_file("def x @ q : Nat @ 0 := zero;"), ParseError);
  CHECK_THROWS_AS(parse_file("def x @ c : Nat @ 0 := succ (zero;"), ParseError);
  CHECK_THROWS_AS(parse_file("def x @ c : Nat @ 0 := y;"), ParseError);
  try {
    parse_file("def x @ c : Nat @ 0 :=\n  succ (zero;\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 2);
  }
  // a recursor missing a branch is a parse error
  std::string missing =
      "def r @ m : Nat @ 0 := elimTy (0, 0) (l g xT. Nat) (l g UT xt. Nat)"
      " ( | nat g => zero ) (0) (.) (box ty Nat);";
  CHECK_THROWS_AS(parse_file(missing), ParseError);
}

TEST_CASE("definition expansion") {
  std::string src =
      "def one @ c : Nat @ 0 := succ zero;\n"
      "def two @ c : Nat @ 0 := succ one;\n";
  SourceFile f = parse_ok(src);
  CHECK(aeq(f.defs[1].term, tm::succ(tm::succ(tm::zero()))));

  // expansion is weakened under binders
  std::string src2 =
      "def boxed @ m : [ . |- Nat : 0 ] @ 0 := box tm zero;\n"
      "def use @ m : CtxPi (g) @ 0. [ . |- Nat : 0 ] @ 0 := ctxfun (g) @ 0. boxed;\n";
  SourceFile f2 = parse_ok(src2);
  REQUIRE(f2.defs[1].term.is<TmCtxLam>());
}

TEST_CASE("print/parse round trip on representative terms") {
  std::string preamble =
      "level-vars k;\n"
      "global g : Ctx;\n"
      "global U : [ g |- Ty k ] @ c;\n"
      "global u : [ g |- U : k ] @ c;\n";
  std::string defs =
      "def d0 @ m : [ g |- U : k ] @ 0 := box tm u;\n"
      "def d1 @ c : Pi (x : Nat @ 0) @ 0. Nat @ 0 := fun (x : Nat @ 0) @ 0. succ x;\n"
      "def d2 @ d : Nat @ 0 := app (x : Nat @ 0 . Nat @ 0) d1 zero;\n"
      "def d3 @ d : Nat @ 0 :=\n"
      "  elimNat (0) (n. Nat) (zero) (n y. succ y) (succ succ zero);\n"
      "def d4 @ m : UPi (a) @ 2+a. Ty (1+a) @ omega := ulam (a) @ 2+a. Ty a;\n"
      "def d5 @ m : [ g |- Ty k ] @ 0 := letbox ty (0, k) (g) (xT. [ g |- Ty k ]) "
      "(V. box ty V) (box ty U);\n"
      "def d6 @ m : CtxPi (h) @ 0. [ h |- Nat : 0 ] @ 0 := ctxfun (h) @ 0. box tm zero;\n"
      "def d7 @ m : TyPi (V : [ g |- Ty k ]) @ 0. [ g, x : V @ k |- V^wk(1) : k ] @ 0 :=\n"
      "  tyfun (V : [ g |- Ty k ]) @ 0. box tm { x . x };\n";
  SourceFile f = parse_ok(preamble + defs);

  // print each definition and reparse it against the same preamble
  for (const Definition& d : f.defs) {
    PrintScopes s = PrintScopes::from(f.uctx, f.gctx, LocalCtx{});
    std::string printed_ty = print_type(s, d.type);
    std::string printed_tm = print_term(s, d.term);
    std::string text = preamble + "def again @ " + layer_name(d.layer) + " : " + printed_ty +
                       " @ " + print_level(s, d.level) + " := " + printed_tm + ";";
    INFO("printed: " << text);
    SourceFile f2 = parse_file(text);
    REQUIRE(f2.defs.size() == 1);
    CHECK(aeq(f2.defs[0].type, d.type));
    CHECK(aeq(f2.defs[0].term, d.term));
    CHECK(f2.defs[0].level == d.level);
  }
}

TEST_CASE("the requote meta-program parses, checks and runs") {
  std::string src = R"(
def requote @ m : [ . |- Pi (x : Nat @ 0) @ 0. Nat : 0 \/ 0 ] @ 0 :=
  elimTm (0, 0)
    (l g xT. [ g |- Ty l ])
    (l g UT xt. [ g |- UT : l ])
    ( | nat g => box ty Nat
      | pi l l' g US UT xS xT => box ty (Pi (x : US @ l) @ l'. UT)
      | ty l g => box ty (Ty l)
      | el l g ut xt => box ty (El l ut)
      | var l g UT ux => box tm ux
      | nat' g => box tm Nat
      | pi' l l' g us ut xs xt => box tm (Pi (x : us @ l) @ l'. ut)
      | ty' l g => box tm (Ty l)
      | zero g => box tm zero
      | succ g ut xt => box tm (succ ut)
      | elimnat l g UM us us' ut xM xs xs' xt =>
          box tm (elimNat (l) (x. UM) (us) (x y. us') (ut))
      | lam l l' g US UT ut xS xt => box tm (fun (x : US @ l) @ l'. ut)
      | app l l' g US UT ut us xS xT xt xs =>
          box tm (app (x : US @ l . UT @ l') ut us)
    )
    (0 \/ 0) (.) (Pi (x : Nat @ 0) @ 0. Nat)
    (box tm (fun (x : Nat @ 0) @ 0. succ x));
)";
  SourceFile f = parse_ok(src);
  const Definition* d = find_def(f, "requote");
  REQUIRE(d != nullptr);
  Term expected = tm::box_tm(tm::lam(z, z, "x", ty::nat(), tm::succ(tm::var(0, "x"))));
  CHECK(aeq(whnf_term(d->term), expected, LevelCmp::ModuloLevels));

  // print/parse round trip through the full recursor syntax
  PrintScopes s;
  std::string printed = print_term(s, d->term);
  std::string text = "def again @ m : [ . |- Pi (x : Nat @ 0) @ 0. Nat : 0 \\/ 0 ] @ 0 := " +
                     printed + ";";
  SourceFile f2 = parse_file(text);
  CHECK(aeq(f2.defs[0].term, d->term));
}
