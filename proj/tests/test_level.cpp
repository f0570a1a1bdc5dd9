#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include "delam/level.hpp"

using namespace delam;

namespace {

// Independent oracle: evaluate a level to a natural number under an
// assignment of its variables, reading lub as max and succ as +1.
std::uint64_t eval_level(const Level& l, const std::vector<std::uint64_t>& assignment) {
  switch (l.kind()) {
    case Level::Kind::Zero: return 0;
    case Level::Kind::Var: return assignment.at(static_cast<std::size_t>(l.var_index()));
    case Level::Kind::Succ: return 1 + eval_level(l.arg(), assignment);
    case Level::Kind::Lub: return std::max(eval_level(l.lhs(), assignment), eval_level(l.rhs(), assignment));
    case Level::Kind::Omega: throw KernelError("eval_level: omega");
  }
  throw KernelError("eval_level: unreachable");
}

Level random_level(std::mt19937_64& rng, int nvars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
  switch (pick(rng)) {
    case 0: return Level::zero();
    case 1:
      if (nvars == 0) return Level::zero();
      return Level::var(std::uniform_int_distribution<int>(0, nvars - 1)(rng));
    case 2: return Level::succ(random_level(rng, nvars, depth - 1));
    default:
      return Level::lub(random_level(rng, nvars, depth - 1), random_level(rng, nvars, depth - 1));
  }
}

bool agree_on_all_assignments(const UnivCtx& ctx, const Level& a, const Level& b, std::uint64_t top = 4) {
  std::vector<std::uint64_t> assignment(ctx.size(), 0);
  while (true) {
    if (eval_level(a, assignment) != eval_level(b, assignment)) return false;
    std::size_t i = 0;
    for (; i < assignment.size(); ++i) {
      if (assignment[i] < top) {
        ++assignment[i];
        break;
      }
      assignment[i] = 0;
    }
    if (i == assignment.size()) return true;
  }
}

const Level l0 = Level::var(0);
const Level l1 = Level::var(1);

}  // namespace

TEST_CASE("well-formedness of levels") {
  UnivCtx one({"l"});
  UnivCtx none;
  CHECK(wf_level(one, Level::lub(l0, Level::succ(l0))));
  CHECK(wf_level(none, Level::zero()));
  CHECK_FALSE(wf_level(none, Level::omega()));
  CHECK_FALSE(wf_level(none, l0));
  CHECK(wf_level(one, Level::constant(7)));
}

TEST_CASE("count transcribes the defining equations") {
  CHECK(count(Level::zero()) == LevelMap{0, {}});
  CHECK(count(Level::succ(l0)) == LevelMap{1, {{0, 1}}});
  CHECK(count(Level::lub(l0, Level::succ(l0))) == LevelMap{1, {{0, 1}}});
  CHECK(count(Level::lub(Level::constant(2), Level::succ(l0))) == LevelMap{2, {{0, 1}}});
  CHECK_THROWS_AS(count(Level::omega()), KernelError);
}

TEST_CASE("adjust drops a dominated constant") {
  CHECK(adjust(LevelMap{1, {{0, 1}}}) == LevelMap{std::nullopt, {{0, 1}}});
  CHECK(adjust(LevelMap{2, {{0, 1}}}) == LevelMap{2, {{0, 1}}});
  CHECK(adjust(LevelMap{3, {}}) == LevelMap{3, {}});
  CHECK(adjust(LevelMap{0, {{0, 0}, {1, 0}}}) == LevelMap{std::nullopt, {{0, 0}, {1, 0}}});
}

TEST_CASE("normalize") {
  UnivCtx one({"l"});
  UnivCtx two({"l", "l'"});
  // absorption: l \/ (1+l) ~ 1+l
  CHECK(normalize(one, Level::lub(l0, Level::succ(l0))) == Level::succ(l0));
  CHECK(normalize(one, l0) == l0);
  // flatten follows the order of the context: Var(1) is declared before Var(0)
  CHECK(normalize(two, Level::lub(l0, l1)) == Level::lub(l1, l0));
  CHECK(normalize(two, Level::lub(l1, l0)) == Level::lub(l1, l0));
  // pure constants render as the numeral
  CHECK(normalize(one, Level::lub(Level::constant(2), Level::constant(1))) == Level::constant(2));
  // the kept constant comes first
  CHECK(normalize(one, Level::lub(Level::constant(2), Level::succ(l0))) ==
        Level::lub(Level::constant(2), Level::succ(l0)));

  SECTION("idempotent") {
    std::mt19937_64 rng(7);
    UnivCtx ctx({"a", "b", "c"});
    for (int i = 0; i < 500; ++i) {
      Level l = random_level(rng, 3, 4);
      Level n = normalize(ctx, l);
      CHECK(normalize(ctx, n) == n);
      CHECK(level_equiv(ctx, l, n));
    }
  }
}

TEST_CASE("level_equiv decides the equational theory") {
  UnivCtx one({"l"});
  UnivCtx two({"l", "l'"});
  // commutativity
  CHECK(level_equiv(two, Level::lub(l1, l0), Level::lub(l0, l1)));
  // unit + congruence under succ: 1+(l \/ 0) ~ 1+l
  CHECK(level_equiv(one, Level::succ(Level::lub(l0, Level::zero())), Level::succ(l0)));
  CHECK_FALSE(level_equiv(one, l0, Level::succ(l0)));
  // omega is its own class
  CHECK(level_equiv(one, Level::omega(), Level::omega()));
  CHECK_FALSE(level_equiv(one, Level::omega(), Level::zero()));
}

TEST_CASE("order") {
  UnivCtx one({"l"});
  UnivCtx none;
  CHECK(level_leq(one, Level::zero(), l0));
  CHECK_FALSE(level_lt(one, l0, l0));
  CHECK(level_lt(none, Level::constant(1), Level::constant(2)));
  CHECK_FALSE(level_lt(none, Level::constant(2), Level::constant(2)));
  CHECK(level_leq(one, l0, Level::succ(l0)));
}

TEST_CASE("oracle soundness of level_equiv") {
  std::mt19937_64 rng(11);
  UnivCtx ctx({"a", "b", "c"});
  int positives = 0;
  for (int i = 0; i < 2000; ++i) {
    Level a = random_level(rng, 3, 4);
    Level b = random_level(rng, 3, 4);
    if (level_equiv(ctx, a, b)) {
      ++positives;
      CHECK(agree_on_all_assignments(ctx, a, b));
    }
    // normalization must always agree with its input on every assignment
    CHECK(agree_on_all_assignments(ctx, a, normalize(ctx, a)));
  }
  CHECK(positives > 0);
}

TEST_CASE("the eight equational rules are validated") {
  std::mt19937_64 rng(13);
  UnivCtx ctx({"a", "b", "c"});
  auto rnd = [&] { return random_level(rng, 3, 3); };
  for (int i = 0; i < 200; ++i) {
    Level l = rnd(), l2 = rnd(), l3 = rnd();
    CHECK(level_equiv(ctx, Level::lub(l, Level::zero()), l));                                    // unit
    CHECK(level_equiv(ctx, Level::lub(Level::lub(l, l2), l3), Level::lub(l, Level::lub(l2, l3))));  // assoc
    CHECK(level_equiv(ctx, Level::lub(l, l2), Level::lub(l2, l)));                               // comm
    CHECK(level_equiv(ctx, Level::lub(l, l), l));                                                // idem
    CHECK(level_equiv(ctx, Level::succ(Level::lub(l, l2)),
                      Level::lub(Level::succ(l), Level::succ(l2))));                             // succ distributes
    Level v = Level::var(std::uniform_int_distribution<int>(0, 2)(rng));
    CHECK(level_equiv(ctx, Level::lub(v, Level::succ(v)), Level::succ(v)));                      // variable absorption
    CHECK(level_equiv(ctx, Level::lub(l, Level::succ(l)), Level::succ(l)));                      // general absorption
    for (std::uint64_t n = 0; n <= 4; ++n)
      CHECK(level_equiv(ctx, Level::lub(l, Level::plus(n, l)), Level::plus(n, l)));
  }
}

TEST_CASE("universe substitutions") {
  UnivCtx one({"l"});
  UnivCtx two({"l", "l'"});

  // l[3/l] = 3
  UnivSubst phi({Level::constant(3)});
  CHECK(usubst_apply(l0, phi) == Level::constant(3));

  // ((1+l) \/ l')[l'/l, 0/l']: source two = [l, l'] with l' = Var(0), l = Var(1).
  // A substitution sending l to l' and l' to 0 has entries[0] = 0 (for l'),
  // entries[1] = Var(0) viewed in a target where l' is the innermost.
  UnivSubst swap({Level::zero(), Level::var(0)});
  Level subject = Level::lub(Level::succ(l1), l0);
  CHECK(usubst_apply(subject, swap) == Level::lub(Level::succ(Level::var(0)), Level::zero()));

  CHECK(wf_usubst(one, phi, one));
  CHECK_FALSE(wf_usubst(one, UnivSubst({l1}), one));
  CHECK_FALSE(wf_usubst(one, UnivSubst{}, one));

  SECTION("identity and composition laws") {
    std::mt19937_64 rng(17);
    UnivCtx ctx({"a", "b", "c"});
    auto rnd_subst = [&](int nvars_target, int nvars_source) {
      UnivSubst s;
      for (int i = 0; i < nvars_source; ++i) s.entries.push_back(random_level(rng, nvars_target, 2));
      return s;
    };
    for (int i = 0; i < 1000; ++i) {
      Level l = random_level(rng, 3, 3);
      CHECK(usubst_apply(l, usubst_id(ctx)) == l);
      UnivSubst p1 = rnd_subst(3, 3), p2 = rnd_subst(3, 3), p3 = rnd_subst(3, 3);
      CHECK(usubst_apply(usubst_apply(l, p1), p2) == usubst_apply(l, usubst_compose(p1, p2)));
      UnivSubst left = usubst_compose(usubst_compose(p1, p2), p3);
      UnivSubst right = usubst_compose(p1, usubst_compose(p2, p3));
      REQUIRE(left.entries.size() == right.entries.size());
      for (std::size_t j = 0; j < left.entries.size(); ++j) CHECK(left.entries[j] == right.entries[j]);
    }
  }

  SECTION("lift is consistent with shifting") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 200; ++i) {
      Level l = random_level(rng, 2, 3);
      UnivSubst phi2({random_level(rng, 2, 2), random_level(rng, 2, 2)});
      // shifting past one binder then substituting under the lift leaves the binder alone
      CHECK(usubst_apply(ushift_level(l, 1), usubst_lift(phi2, 1)) == ushift_level(usubst_apply(l, phi2), 1));
    }
  }
}

TEST_CASE("show_level") {
  UnivCtx two({"l", "l'"});
  CHECK(show_level(two, Level::succ(Level::var(1))) == "1+l");
  CHECK(show_level(two, Level::lub(Level::var(1), Level::var(0))) == "l \\/ l'");
  CHECK(show_level(two, Level::constant(2)) == "2");
  CHECK(show_level(two, Level::omega()) == "omega");
}
