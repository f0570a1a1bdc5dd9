#pragma once

// Seeded generators for well-typed subjects. Generation is template-based:
// every emitted term is well-typed by construction against a small pool of
// types, which the harness re-checks as its own oracle. Same seed, same
// subject.

#include <cstdint>
#include <random>
#include <utility>

#include "delam/typing.hpp"

namespace delam {

struct GenEnv {
  UnivCtx uc;
  GlobalCtx gc;
  LocalCtx lc;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int depth = 3;
  Layer layer = Layer::C;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool flip() { return pick(2) == 0; }

  // ----------------------------------------------------------- levels

  Level gen_level(int nvars, int depth) {
    int top = depth > 0 ? 4 : 2;
    switch (pick(top)) {
      case 0: return Level::constant(static_cast<std::uint64_t>(pick(3)));
      case 1: return nvars > 0 ? Level::var(pick(nvars)) : Level::zero();
      case 2: return Level::succ(gen_level(nvars, depth - 1));
      default: return Level::lub(gen_level(nvars, depth - 1), gen_level(nvars, depth - 1));
    }
  }

  UnivSubst gen_usubst(int target_vars, int source_vars, int depth = 2) {
    UnivSubst r;
    for (int i = 0; i < source_vars; ++i) r.entries.push_back(gen_level(target_vars, depth));
    return r;
  }

  // ------------------------------------------------------ environments

  // A small random environment: up to two level variables, a context
  // variable with a few code bindings over it, and a local context over
  // either base.
  GenEnv gen_env(bool with_globals = true) {
    GenEnv e;
    int nlev = pick(3);
    for (int i = 0; i < nlev; ++i) e.uc.names.push_back("k" + std::to_string(i));
    if (with_globals) {
      e.gc = e.gc.extended(CtxBind{"g"});
      if (flip())
        e.gc = e.gc.extended(TypBind{"U", LocalCtx::var(0), Layer::C, Level::zero()});
      if (flip()) {
        int gidx = static_cast<int>(e.gc.size()) - 1;
        e.gc = e.gc.extended(
            TrmBind{"u", LocalCtx::var(gidx), flip() ? Layer::C : Layer::V, ty::nat(),
                    Level::zero()});
      }
    }
    e.lc = gen_lctx(e, 2);
    return e;
  }

  // a local context over a random base with entries from the type pool
  LocalCtx gen_lctx(const GenEnv& e, int max_entries) {
    LocalCtx ctx;
    if (!e.gc.binds.empty() && flip()) {
      for (std::size_t i = 0; i < e.gc.size(); ++i) {
        std::size_t idx = (static_cast<std::size_t>(pick(static_cast<int>(e.gc.size()))) + i) %
                          e.gc.size();
        if (std::holds_alternative<CtxBind>(gctx_bind_raw(e.gc, static_cast<int>(idx)))) {
          ctx.base = static_cast<int>(idx);
          break;
        }
      }
    }
    int n = pick(max_entries + 1);
    for (int i = 0; i < n; ++i) ctx = ctx.extended("x" + std::to_string(i), pool_type(), Level::zero());
    return ctx;
  }

  // closed level-zero types, in weak head normal form
  Type pool_type() {
    switch (pick(4)) {
      case 0: return ty::nat();
      case 1: return ty::pi(Level::zero(), Level::zero(), "x", ty::nat(), ty::nat());
      case 2: return ty::el(Level::zero(), tm::nat());
      default:
        return ty::pi(Level::zero(), Level::zero(), "f",
                      ty::pi(Level::zero(), Level::zero(), "x", ty::nat(), ty::nat()), ty::nat());
    }
  }

  // ----------------------------------------------------------- terms

  // a term of type Nat at the given layer
  Term gen_nat(const GenEnv& e, Layer layer, int depth) {
    // collect usable variables of type Nat (or El 0 Nat)
    std::vector<Term> hits;
    for (std::size_t i = 0; i < e.lc.size(); ++i) {
      auto [t, l] = lctx_lookup(e.lc, static_cast<int>(i));
      if (t.is<TyNat>() || (t.is<TyEl>() && t.as<TyEl>()->code.is<TmNat>()))
        hits.push_back(tm::var(static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < e.gc.size(); ++i) {
      GlobalBind b = gctx_lookup(e.gc, static_cast<int>(i));
      const auto* tb = std::get_if<TrmBind>(&b);
      if (tb && tb->type.is<TyNat>() && layer_leq(tb->layer, layer) &&
          tb->ctx.entries.empty() && tb->ctx.base == e.lc.base)
        hits.push_back(tm::global(static_cast<int>(i),
                                  lwk(tb->ctx, static_cast<unsigned>(e.lc.size()))));
    }
    int top = depth > 0 ? 5 : (hits.empty() ? 2 : 3);
    switch (pick(top)) {
      case 0: return tm::zero();
      case 1: return tm::succ(depth > 0 ? gen_nat(e, layer, depth - 1) : tm::zero());
      case 2:
        if (!hits.empty()) return hits[static_cast<std::size_t>(pick(static_cast<int>(hits.size())))];
        return tm::zero();
      case 3: {
        Term fn = gen_nat_fn(e, layer, depth - 1);
        return tm::app(std::move(fn), Level::zero(), Level::zero(), "x", ty::nat(), ty::nat(),
                       gen_nat(e, layer, depth - 1));
      }
      default: {
        Term scrut = gen_nat(e, layer, depth - 1);
        Term base = gen_nat(e, layer, depth - 1);
        return tm::elim_nat(Level::zero(), "x", ty::nat(), std::move(base), "x", "y",
                            tm::succ(tm::var(0, "y")), std::move(scrut));
      }
    }
  }

  // a function of type Nat -> Nat
  Term gen_nat_fn(const GenEnv& e, Layer layer, int depth) {
    for (std::size_t i = 0; i < e.lc.size() && flip(); ++i) {
      auto [t, l] = lctx_lookup(e.lc, static_cast<int>(i));
      const auto* p = t.as<TyPi>();
      if (p && p->dom.is<TyNat>() && p->cod.is<TyNat>()) return tm::var(static_cast<int>(i));
    }
    GenEnv e2 = e;
    e2.lc = e2.lc.extended("x", ty::nat(), Level::zero());
    Term body = depth > 0 ? gen_nat(e2, layer, depth - 1) : tm::var(0, "x");
    return tm::lam(Level::zero(), Level::zero(), "x", ty::nat(), std::move(body));
  }

  // code of a type at layer c in the given context, paired with its level
  std::pair<Type, Level> gen_type_code(const GenEnv& e, int depth) {
    switch (depth > 0 ? pick(4) : pick(2)) {
      case 0: return {ty::nat(), Level::zero()};
      case 1: return {ty::universe(Level::zero()), Level::constant(1)};
      case 2: {
        auto [dom, ld] = gen_type_code(e, 0);
        GenEnv e2 = e;
        e2.lc = e2.lc.extended("x", dom, ld);
        auto [cod, lc2] = gen_type_code(e2, 0);
        return {ty::pi(ld, lc2, "x", dom, cod), Level::lub(ld, lc2)};
      }
      default: return {ty::el(Level::zero(), tm::nat()), Level::zero()};
    }
  }

  // constant-motive recursor over generated code
  Term gen_recursor(const GenEnv& e, int depth) {
    Motives m{ty::nat(), ty::nat()};
    Branches b;
    for (BranchKind k : kAllBranchKinds) b.at(k) = tm::zero();
    LocalCtx delta;  // closed code context keeps the scrutinee easy to build
    if (flip()) {
      auto [code, l] = gen_type_code(GenEnv{e.uc, e.gc, delta}, depth);
      return tm::elim_typ(Level::zero(), Level::zero(), m, b, l, delta, tm::box_ty(code));
    }
    Term code = gen_nat(GenEnv{e.uc, e.gc, delta}, Layer::C, depth > 0 ? depth - 1 : 0);
    return tm::elim_trm(Level::zero(), Level::zero(), m, b, Level::zero(), delta, ty::nat(),
                        tm::box_tm(std::move(code)));
  }

  // a term together with its type and level; covers every constructor
  struct Subject {
    Term term;
    Type type;
    Level level;
  };

  Subject gen_subject(const GenEnv& e, Layer layer, int depth) {
    if (layer != Layer::M || pick(3) == 0) {
      if (flip()) return {gen_nat(e, layer, depth), ty::nat(), Level::zero()};
      Term fn = gen_nat_fn(e, layer, depth);
      return {std::move(fn), ty::pi(Level::zero(), Level::zero(), "x", ty::nat(), ty::nat()),
              Level::zero()};
    }
    switch (pick(12)) {
      case 8: {  // bare universe-polymorphic function, at type UPi
        Term poly = tm::ulam(Level::plus(2, Level::var(0)), 1, {"a"}, tm::universe(Level::var(0)));
        Type t = ty::upi(1, {"a"}, Level::plus(2, Level::var(0)),
                         ty::universe(Level::succ(Level::var(0))));
        return {std::move(poly), std::move(t), Level::omega()};
      }
      case 9: {  // bare context function, at type CtxPi
        Term cf = tm::ctx_lam(Level::zero(), "h", tm::box_tm(tm::zero()));
        Type t = ty::ctx_pi("h", Level::zero(),
                            ty::code_tm(LocalCtx::empty(), ty::nat(), Level::zero()));
        return {std::move(cf), std::move(t), Level::zero()};
      }
      case 10: {  // bare type function, at type TyPi
        Term tf =
            tm::ty_lam(Level::zero(), Level::zero(), "V", LocalCtx::empty(), tm::box_tm(tm::zero()));
        Type t = ty::ty_pi("V", LocalCtx::empty(), Level::zero(), Level::zero(),
                           ty::code_tm(LocalCtx::empty(), ty::nat(), Level::zero()));
        return {std::move(tf), std::move(t), Level::zero()};
      }
      case 11: {  // boxed code headed by a global type variable, or Pi code
        for (std::size_t i = 0; i < e.gc.size(); ++i) {
          GlobalBind b = gctx_lookup(e.gc, static_cast<int>(i));
          const auto* tb = std::get_if<TypBind>(&b);
          if (tb && tb->layer == Layer::C && tb->ctx.entries.empty()) {
            Type u = ty::global(static_cast<int>(i), lwk(tb->ctx, 0), "U");
            return {tm::box_ty(u), ty::code_ty(tb->ctx, tb->level), Level::zero()};
          }
        }
        Term code = tm::pi(Level::zero(), Level::zero(), "x", tm::nat(), tm::nat());
        Level lub = Level::lub(Level::zero(), Level::zero());
        return {tm::box_tm(std::move(code)),
                ty::code_tm(LocalCtx::empty(), ty::universe(lub), Level::succ(lub)),
                Level::zero()};
      }
      case 0: {  // boxed term code
        LocalCtx delta = gen_lctx(GenEnv{e.uc, e.gc, {}}, 1);
        bool all_nat = true;
        for (const auto& entry : delta.entries) all_nat &= entry.type.is<TyNat>();
        if (!all_nat) delta = LocalCtx::empty();
        Term code = gen_nat(GenEnv{e.uc, e.gc, delta}, Layer::C, depth - 1);
        return {tm::box_tm(std::move(code)), ty::code_tm(delta, ty::nat(), Level::zero()),
                Level::zero()};
      }
      case 1: {  // boxed type code
        auto [code, l] = gen_type_code(GenEnv{e.uc, e.gc, {}}, depth);
        return {tm::box_ty(code), ty::code_ty(LocalCtx::empty(), l), Level::zero()};
      }
      case 2: {  // letbox over term code
        Term code = gen_nat(GenEnv{e.uc, e.gc, {}}, Layer::C, depth - 1);
        GenEnv eb = e;
        eb.gc = eb.gc.extended(TrmBind{"u", LocalCtx::empty(), Layer::C, ty::nat(), Level::zero()});
        eb.lc = gshift(e.lc, 1);
        Term body = gen_nat(eb, Layer::M, depth - 1);
        return {tm::letbox_tm(Level::zero(), Level::zero(), LocalCtx::empty(), ty::nat(), "xt",
                              ty::nat(), "u", std::move(body), tm::box_tm(std::move(code))),
                ty::nat(), Level::zero()};
      }
      case 3: {  // letbox over type code
        auto [code, l] = gen_type_code(GenEnv{e.uc, e.gc, {}}, 1);
        GenEnv eb = e;
        eb.gc = eb.gc.extended(TypBind{"U", LocalCtx::empty(), Layer::C, l});
        eb.lc = gshift(e.lc, 1);
        Term body = gen_nat(eb, Layer::M, depth - 1);
        return {tm::letbox_ty(Level::zero(), l, LocalCtx::empty(), "xT", ty::nat(), "U",
                              std::move(body), tm::box_ty(code)),
                ty::nat(), Level::zero()};
      }
      case 4: {  // context function applied to a context
        Term body = tm::box_tm(tm::zero());
        Term cf = tm::ctx_lam(Level::zero(), "h", std::move(body));
        LocalCtx arg;
        return {tm::ctx_app(std::move(cf), arg),
                ty::code_tm(LocalCtx::empty(), ty::nat(), Level::zero()), Level::zero()};
      }
      case 5: {  // type function applied to a type
        Term body = tm::box_tm(tm::zero());
        Term tf = tm::ty_lam(Level::zero(), Level::zero(), "V", LocalCtx::empty(), std::move(body));
        return {tm::ty_app(std::move(tf), ty::nat()),
                ty::code_tm(LocalCtx::empty(), ty::nat(), Level::zero()), Level::zero()};
      }
      case 6: {  // universe polymorphism
        Term poly = tm::ulam(Level::plus(2, Level::var(0)), 1, {"a"}, tm::universe(Level::var(0)));
        Level at = gen_level(static_cast<int>(e.uc.size()), 1);
        Type result = ty::universe(Level::succ(at));
        return {tm::uapp(std::move(poly), {at}), std::move(result), Level::plus(2, at)};
      }
      default: {  // recursors over code
        return {gen_recursor(e, depth), ty::nat(), Level::zero()};
      }
    }
  }

  // --------------------------------------------------- substitutions

  // a local substitution into `target`, along with the context its terms
  // live in (same base, possibly different entries)
  std::pair<LocalCtx, LocalSubst> gen_lsubst_to(const GenEnv& e, const LocalCtx& target,
                                                int depth) {
    LocalCtx from;
    from.base = target.base;
    int extra = pick(3);
    for (int i = 0; i < extra; ++i)
      from = from.extended("e" + std::to_string(i), ty::nat(), Level::zero());
    LocalSubst d = from.ends_with_var()
                       ? LocalSubst::weaken(*from.base, static_cast<unsigned>(from.size()))
                       : LocalSubst::empty(std::nullopt, static_cast<unsigned>(from.size()));
    GenEnv ef{e.uc, e.gc, from};
    LocalSubst prefix = d;
    for (const auto& entry : target.entries) {
      Term t = entry.type.is<TyNat>() ? gen_nat(ef, Layer::C, depth)
               : entry.type.is<TyPi>()
                   ? gen_nat_fn(ef, Layer::C, depth)
                   : tm::zero();
      // entries of non-Nat-like pool types fall back to a checked default
      if (entry.type.is<TyEl>()) t = gen_nat(ef, Layer::C, depth);
      d.entries.push_back(t);
      prefix.entries.push_back(t);
    }
    return {from, d};
  }

  // a global substitution into `source`, along with the global context its
  // entries live in
  std::pair<GlobalCtx, GlobalSubst> gen_gsubst_to(const GenEnv& e, const GlobalCtx& source,
                                                  int depth) {
    GlobalCtx target;
    target = target.extended(CtxBind{"h"});
    GlobalSubst s;
    for (const GlobalBind& b : source.binds) {
      std::visit(
          overloaded{
              [&](const CtxBind&) {
                // context images always carry a Nat entry so that layer-v
                // term bindings can be mapped to a variable
                LocalCtx image = flip() ? LocalCtx::var(static_cast<int>(target.size()) - 1)
                                        : LocalCtx::empty();
                image = image.extended("x", ty::nat(), Level::zero());
                s.entries.push_back(image);
              },
              [&](const TypBind&) {
                // a closed type of the right level (the pool is level 0)
                s.entries.push_back(
                    GlobalEntry{flip() ? ty::nat() : ty::el(Level::zero(), tm::nat())});
              },
              [&](const TrmBind& tb) {
                // the binding context under sigma
                LocalCtx ctx_img = gsubst_apply(tb.ctx, s);
                GenEnv eg{e.uc, target, ctx_img};
                Term t = tb.layer == Layer::V ? tm::var(0) : gen_nat(eg, Layer::C, depth);
                s.entries.push_back(std::move(t));
              }},
          b);
    }
    return {target, s};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace delam
