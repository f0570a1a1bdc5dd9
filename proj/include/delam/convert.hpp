#pragma once

// Type-directed convertibility checking: types, contexts, terms and local
// substitutions, layer-indexed. Subjects are reduced to weak head normal
// form and compared structurally; function-like types compare applied forms,
// which covers eta; boxed code compares as static code, i.e. structurally
// modulo universe-level equivalence.
//
// Callers are expected to supply well-typed subjects at a computing layer
// (d or m); well-formedness premises of the rules are not re-derived here.
// Neutral comparison infers a type, biased to the left subject.

#include <string>
#include <utility>

#include "delam/branches.hpp"
#include "delam/reduce.hpp"

namespace delam {

struct ConvVerdict {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

namespace conv_detail {

struct Mismatch {
  std::string reason;
};

[[noreturn]] inline void fail(const std::string& reason) { throw Mismatch{reason}; }

struct Cx {
  UnivCtx uc;
  GlobalCtx gc;
  LocalCtx lc;
  Layer layer;
  Fuel fuel;

  bool lv(const Level& a, const Level& b) const { return level_equiv(uc, a, b); }

  Cx with_local(const std::string& name, const Type& t, const Level& l) const {
    Cx r = *this;
    r.lc = r.lc.extended(name, t, l);
    return r;
  }
  Cx with_global(GlobalBind b) const {
    Cx r = *this;
    r.gc = r.gc.extended(std::move(b));
    r.lc = gshift(r.lc, 1);
    return r;
  }
  Cx with_levels(int n) const {
    Cx r = *this;
    r.uc = r.uc.extended(static_cast<std::size_t>(n));
    r.gc = ushift(r.gc, n);
    r.lc = ushift(r.lc, n);
    return r;
  }
};

inline void conv_type(const Cx& cx, const Type& a, const Type& b, const Level& l);
inline void conv_term(const Cx& cx, const Term& a, const Term& b, const Type& t, const Level& l);
inline std::pair<Type, Level> conv_term_ne(const Cx& cx, const Term& a, const Term& b);
inline void conv_ctx(const Cx& cx, Layer i, const LocalCtx& a, const LocalCtx& b);
inline void conv_lsubst(const Cx& cx, const LocalSubst& a, const LocalSubst& b, const LocalCtx& target);

inline std::pair<Type, Level> conv_term_nee(const Cx& cx, const Term& a, const Term& b) {
  auto [t, l] = conv_term_ne(cx, a, b);
  return {whnf_type(std::move(t), cx.fuel), std::move(l)};
}

inline void require_level(const Cx& cx, const Level& a, const Level& b, const char* where) {
  if (!cx.lv(a, b)) fail(std::string(where) + ": universe levels differ");
}

inline void require_meta(const Cx& cx, const char* head) {
  if (cx.layer != Layer::M)
    fail(std::string(head) + ": only available at layer m, not " + layer_name(cx.layer));
}

// ---------------------------------------------------------------------------
// Recursor premise comparison (the C_A group): motives, then all branches
// against the signatures induced by the left motives.

inline void conv_motives(const Cx& cx, const Motives& a, const Motives& b, const Level& l1,
                         const Level& l2) {
  MotiveSignature sig = motive_signature(l1, l2);
  {
    Cx c = cx.with_levels(1);
    for (const GlobalBind& g : sig.psi_typ) c = c.with_global(g);
    c = c.with_local(sig.x_typ.name, sig.x_typ.type, sig.x_typ.level);
    conv_type(c, a.typ, b.typ, sig.level_typ);
  }
  {
    Cx c = cx.with_levels(1);
    for (const GlobalBind& g : sig.psi_trm) c = c.with_global(g);
    c = c.with_local(sig.x_trm.name, sig.x_trm.type, sig.x_trm.level);
    conv_type(c, a.trm, b.trm, sig.level_trm);
  }
}

inline void conv_branches(const Cx& cx, const Motives& m, const Branches& a, const Branches& b,
                          const Level& l1, const Level& l2) {
  for (BranchKind k : kAllBranchKinds) {
    BranchSignature sig = branch_signature(k, m, l1, l2);
    Cx c = cx.with_levels(sig.level_count);
    for (const GlobalBind& g : sig.psi_ext) c = c.with_global(g);
    for (const LocalCtxEntry& e : sig.gamma_ext) c = c.with_local(e.name, e.type, e.level);
    try {
      conv_term(c, a.at(k), b.at(k), sig.expected, sig.expected_level);
    } catch (Mismatch& e) {
      fail(std::string("branch ") + branch_keyword(k) + ": " + e.reason);
    }
  }
}

template <class E>
void conv_recursor_premises(const Cx& cx, const E& a, const E& b) {
  require_level(cx, a.typ_level, b.typ_level, "recursor");
  require_level(cx, a.trm_level, b.trm_level, "recursor");
  conv_motives(cx, a.motives, b.motives, a.typ_level, a.trm_level);
  conv_branches(cx, a.motives, a.branches, b.branches, a.typ_level, a.trm_level);
  require_level(cx, a.index_level, b.index_level, "recursor index");
  conv_ctx(cx, Layer::D, a.index_ctx, b.index_ctx);
}

// ---------------------------------------------------------------------------
// Neutral types

inline std::pair<Type, Level> conv_type_ne(const Cx& cx, const Type& a, const Type& b) {
  if (const auto* x = a.as<TyGlobal>()) {
    const auto* y = b.as<TyGlobal>();
    if (!y || x->index != y->index) fail("neutral type: different type variables");
    GlobalBind bind = gctx_lookup(cx.gc, x->index);
    const auto* tb = std::get_if<TypBind>(&bind);
    if (!tb) fail("neutral type: index does not name a type binding");
    if (!layer_leq(tb->layer, cx.layer)) fail("neutral type: binding layer above the judgment");
    conv_lsubst(cx, x->subst, y->subst, tb->ctx);
    return {a, tb->level};
  }
  if (const auto* x = a.as<TyEl>()) {
    const auto* y = b.as<TyEl>();
    if (!y) fail("neutral type: El vs non-El");
    require_level(cx, x->level, y->level, "El");
    conv_term_nee(cx, x->code, y->code);
    return {a, x->level};
  }
  fail("neutral type: unrecognized head");
}

// ---------------------------------------------------------------------------
// Normal types

inline void conv_type_nf(const Cx& cx, const Type& a, const Type& b, const Level& l) {
  (void)l;
  if (classify_type_whnf(a) == Form::Neutral || classify_type_whnf(b) == Form::Neutral) {
    if (classify_type_whnf(a) != Form::Neutral || classify_type_whnf(b) != Form::Neutral)
      fail("type: neutral vs non-neutral");
    conv_type_ne(cx, a, b);
    return;
  }
  if (a.node().v.index() != b.node().v.index()) fail("type: head constructors differ");
  std::visit(
      overloaded{
          [&](const TyNat&) {},
          [&](const TyPi& x) {
            const auto& y = *b.as<TyPi>();
            require_level(cx, x.dom_level, y.dom_level, "Pi");
            require_level(cx, x.cod_level, y.cod_level, "Pi");
            conv_type(cx, x.dom, y.dom, x.dom_level);
            conv_type(cx.with_local(x.binder, x.dom, x.dom_level), x.cod, y.cod, x.cod_level);
          },
          [&](const TyTy& x) { require_level(cx, x.level, b.as<TyTy>()->level, "Ty"); },
          [&](const TyUPi& x) {
            require_meta(cx, "UPi");
            const auto& y = *b.as<TyUPi>();
            if (x.var_count != y.var_count) fail("UPi: different numbers of level variables");
            Cx c = cx.with_levels(static_cast<int>(x.var_count));
            require_level(c, x.level, y.level, "UPi");
            conv_type(c, x.body, y.body, x.level);
          },
          [&](const TyEl&) { conv_type_ne(cx, a, b); },
          [&](const TyGlobal&) { conv_type_ne(cx, a, b); },
          [&](const TyCtxPi& x) {
            require_meta(cx, "CtxPi");
            const auto& y = *b.as<TyCtxPi>();
            require_level(cx, x.level, y.level, "CtxPi");
            conv_type(cx.with_global(CtxBind{x.binder}), x.body, y.body, x.level);
          },
          [&](const TyTyPi& x) {
            require_meta(cx, "TyPi");
            const auto& y = *b.as<TyTyPi>();
            require_level(cx, x.bind_level, y.bind_level, "TyPi");
            require_level(cx, x.res_level, y.res_level, "TyPi");
            conv_ctx(cx, Layer::D, x.ctx, y.ctx);
            conv_type(cx.with_global(TypBind{x.binder, x.ctx, Layer::D, x.bind_level}), x.body,
                      y.body, x.res_level);
          },
          [&](const TyCodeTy& x) {
            require_meta(cx, "code type");
            const auto& y = *b.as<TyCodeTy>();
            require_level(cx, x.level, y.level, "code type");
            conv_ctx(cx, Layer::D, x.ctx, y.ctx);
          },
          [&](const TyCodeTm& x) {
            require_meta(cx, "code type");
            const auto& y = *b.as<TyCodeTm>();
            require_level(cx, x.level, y.level, "code type");
            conv_ctx(cx, Layer::D, x.ctx, y.ctx);
            Cx c = cx;
            c.lc = x.ctx;
            c.layer = Layer::D;
            conv_type(c, x.type, y.type, x.level);
          }},
      a.node().v);
}

inline void conv_type(const Cx& cx, const Type& a, const Type& b, const Level& l) {
  conv_type_nf(cx, whnf_type(a, cx.fuel), whnf_type(b, cx.fuel), l);
}

// ---------------------------------------------------------------------------
// Terms at a weak-head-normal type

inline void conv_term_nf(const Cx& cx, const Term& a, const Term& b, const Type& w, const Level& l);

inline void conv_term(const Cx& cx, const Term& a, const Term& b, const Type& t, const Level& l) {
  Type w = whnf_type(t, cx.fuel);
  conv_term_nf(cx, whnf_term(a, cx.fuel), whnf_term(b, cx.fuel), w, l);
}

inline void conv_neutral_pair(const Cx& cx, const Term& a, const Term& b, const char* at) {
  if (classify_term_whnf(a) != Form::Neutral || classify_term_whnf(b) != Form::Neutral)
    fail(std::string(at) + ": terms do not match structurally");
  conv_term_nee(cx, a, b);
}

inline void conv_term_nf(const Cx& cx, const Term& a, const Term& b, const Type& w, const Level& l) {
  std::visit(
      overloaded{
          [&](const TyPi& p) {
            // compare applied forms under the extended context; covers eta
            Cx c = cx.with_local(p.binder, p.dom, p.dom_level);
            Type dom_up = lshift(p.dom, 1, 0);
            Type cod_ann = lshift(p.cod, 1, 1);
            Term xa = tm::app(lshift(a, 1, 0), p.dom_level, p.cod_level, p.binder, dom_up, cod_ann,
                              tm::var(0, p.binder));
            Term xb = tm::app(lshift(b, 1, 0), p.dom_level, p.cod_level, p.binder, dom_up, cod_ann,
                              tm::var(0, p.binder));
            conv_term(c, xa, xb, p.cod, p.cod_level);
          },
          [&](const TyUPi& p) {
            require_meta(cx, "term at UPi");
            int n = static_cast<int>(p.var_count);
            Cx c = cx.with_levels(n);
            std::vector<Level> vars;
            for (int i = n - 1; i >= 0; --i) vars.push_back(Level::var(i));
            conv_term(c, tm::uapp(ushift(a, n), vars), tm::uapp(ushift(b, n), vars), p.body, p.level);
          },
          [&](const TyCtxPi& p) {
            require_meta(cx, "term at CtxPi");
            Cx c = cx.with_global(CtxBind{p.binder});
            conv_term(c, tm::ctx_app(gshift(a, 1), LocalCtx::var(0)),
                      tm::ctx_app(gshift(b, 1), LocalCtx::var(0)), p.body, p.level);
          },
          [&](const TyTyPi& p) {
            require_meta(cx, "term at TyPi");
            Cx c = cx.with_global(TypBind{p.binder, p.ctx, Layer::D, p.bind_level});
            Type arg = ty::global(0, lwk(gshift(p.ctx, 1), 0), p.binder);
            conv_term(c, tm::ty_app(gshift(a, 1), arg), tm::ty_app(gshift(b, 1), arg), p.body,
                      p.res_level);
          },
          [&](const TyNat&) {
            if (a.is<TmZero>() && b.is<TmZero>()) return;
            if (a.is<TmSucc>() && b.is<TmSucc>()) {
              conv_term(cx, a.as<TmSucc>()->arg, b.as<TmSucc>()->arg, ty::nat(), Level::zero());
              return;
            }
            conv_neutral_pair(cx, a, b, "Nat");
          },
          [&](const TyTy& u) {
            if (a.is<TmNat>() && b.is<TmNat>()) return;
            if (a.is<TmTy>() && b.is<TmTy>()) {
              require_level(cx, a.as<TmTy>()->level, b.as<TmTy>()->level, "Ty code");
              return;
            }
            if (a.is<TmPi>() && b.is<TmPi>()) {
              const auto& x = *a.as<TmPi>();
              const auto& y = *b.as<TmPi>();
              require_level(cx, x.dom_level, y.dom_level, "Pi code");
              require_level(cx, x.cod_level, y.cod_level, "Pi code");
              conv_term(cx, x.dom, y.dom, ty::universe(x.dom_level), Level::succ(x.dom_level));
              Cx c = cx.with_local(x.binder, ty::el(x.dom_level, x.dom), x.dom_level);
              conv_term(c, x.cod, y.cod, ty::universe(x.cod_level), Level::succ(x.cod_level));
              return;
            }
            (void)u;
            conv_neutral_pair(cx, a, b, "Ty");
          },
          [&](const TyCodeTy&) {
            require_meta(cx, "boxed type");
            const auto* x = a.as<TmBoxTy>();
            const auto* y = b.as<TmBoxTy>();
            if (x && y) {
              // static code equality: structural modulo universe levels
              if (!aeq(x->body, y->body, LevelCmp::ModuloLevels)) fail("boxed types differ");
              return;
            }
            conv_neutral_pair(cx, a, b, "boxed type");
          },
          [&](const TyCodeTm&) {
            require_meta(cx, "boxed term");
            const auto* x = a.as<TmBoxTm>();
            const auto* y = b.as<TmBoxTm>();
            if (x && y) {
              if (!aeq(x->body, y->body, LevelCmp::ModuloLevels)) fail("boxed terms differ");
              return;
            }
            conv_neutral_pair(cx, a, b, "boxed term");
          },
          [&](const TyEl&) { conv_neutral_pair(cx, a, b, "neutral type"); },
          [&](const TyGlobal&) { conv_neutral_pair(cx, a, b, "neutral type"); }},
      w.node().v);
  (void)l;
}

// ---------------------------------------------------------------------------
// Neutral terms; the inferred type comes from the left subject.

inline std::pair<Type, Level> conv_term_ne(const Cx& cx, const Term& a, const Term& b) {
  if (a.node().v.index() != b.node().v.index()) fail("neutral: head constructors differ");
  if (const auto* x = a.as<TmVar>()) {
    const auto* y = b.as<TmVar>();
    if (x->index != y->index) fail("neutral: different variables");
    return lctx_lookup(cx.lc, x->index);
  }
  if (const auto* x = a.as<TmGlobal>()) {
    const auto* y = b.as<TmGlobal>();
    if (x->index != y->index) fail("neutral: different global variables");
    GlobalBind bind = gctx_lookup(cx.gc, x->index);
    const auto* tb = std::get_if<TrmBind>(&bind);
    if (!tb) fail("neutral: index does not name a term binding");
    if (!layer_leq(tb->layer, cx.layer)) fail("neutral: binding layer above the judgment");
    conv_lsubst(cx, x->subst, y->subst, tb->ctx);
    return {lsubst_apply_type(tb->type, x->subst), tb->level};
  }
  if (const auto* x = a.as<TmElimNat>()) {
    const auto* y = b.as<TmElimNat>();
    require_level(cx, x->level, y->level, "elimNat");
    Cx cm = cx.with_local(x->motive_binder, ty::nat(), Level::zero());
    conv_type(cm, x->motive, y->motive, x->level);
    conv_term(cx, x->base, y->base, linst(x->motive, {tm::zero()}), x->level);
    Cx cs = cm.with_local(x->step_rec_binder, x->motive, x->level);
    Type step_ty = linst(x->motive, {tm::succ(tm::var(1, x->step_binder))}, 2);
    conv_term(cs, x->step, y->step, step_ty, x->level);
    conv_term_nee(cx, x->scrut, y->scrut);
    return {linst(x->motive, {x->scrut}), x->level};
  }
  if (const auto* x = a.as<TmApp>()) {
    const auto* y = b.as<TmApp>();
    require_level(cx, x->dom_level, y->dom_level, "application");
    require_level(cx, x->cod_level, y->cod_level, "application");
    conv_type(cx, x->dom, y->dom, x->dom_level);
    conv_type(cx.with_local(x->binder, x->dom, x->dom_level), x->cod, y->cod, x->cod_level);
    conv_term_nee(cx, x->fn, y->fn);  // the inferred function type is ignored
    conv_term(cx, x->arg, y->arg, x->dom, x->dom_level);
    return {linst(x->cod, {x->arg}), x->cod_level};
  }
  if (const auto* x = a.as<TmUApp>()) {
    const auto* y = b.as<TmUApp>();
    auto [fn_ty, fn_lv] = conv_term_nee(cx, x->fn, y->fn);
    const auto* p = fn_ty.as<TyUPi>();
    if (!p) fail("universe application: head is not universe polymorphic");
    if (x->levels.size() != y->levels.size() || x->levels.size() != p->var_count ||
        x->levels.empty())
      fail("universe application: wrong number of levels");
    for (std::size_t i = 0; i < x->levels.size(); ++i)
      require_level(cx, x->levels[i], y->levels[i], "universe application");
    return {uinst(p->body, x->levels), uinst_level(p->level, x->levels)};
  }
  if (const auto* x = a.as<TmCtxApp>()) {
    const auto* y = b.as<TmCtxApp>();
    auto [fn_ty, fn_lv] = conv_term_nee(cx, x->fn, y->fn);
    const auto* p = fn_ty.as<TyCtxPi>();
    if (!p) fail("context application: head is not a context function");
    conv_ctx(cx, Layer::D, x->arg, y->arg);
    return {ginst(p->body, {GlobalEntry{x->arg}}), p->level};
  }
  if (const auto* x = a.as<TmTyApp>()) {
    const auto* y = b.as<TmTyApp>();
    auto [fn_ty, fn_lv] = conv_term_nee(cx, x->fn, y->fn);
    const auto* p = fn_ty.as<TyTyPi>();
    if (!p) fail("type application: head is not a type function");
    Cx cd = cx;
    cd.lc = p->ctx;
    cd.layer = Layer::D;
    conv_type(cd, x->arg, y->arg, p->bind_level);
    return {ginst(p->body, {GlobalEntry{x->arg}}), p->res_level};
  }
  if (const auto* x = a.as<TmLetBoxTy>()) {
    const auto* y = b.as<TmLetBoxTy>();
    require_level(cx, x->res_level, y->res_level, "letbox");
    require_level(cx, x->code_level, y->code_level, "letbox");
    conv_ctx(cx, Layer::D, x->ctx, y->ctx);
    conv_term_nee(cx, x->scrut, y->scrut);
    Type scrut_ty = ty::code_ty(x->ctx, x->code_level);
    Cx cm = cx.with_local(x->motive_binder, scrut_ty, Level::zero());
    conv_type(cm, x->motive, y->motive, x->res_level);
    Cx cb = cx.with_global(TypBind{x->binder, x->ctx, Layer::C, x->code_level});
    Type body_ty = linst(gshift(x->motive, 1),
                         {tm::box_ty(ty::global(0, lwk(gshift(x->ctx, 1), 0), x->binder))});
    conv_term(cb, x->body, y->body, body_ty, x->res_level);
    return {linst(x->motive, {x->scrut}), x->res_level};
  }
  if (const auto* x = a.as<TmLetBoxTm>()) {
    const auto* y = b.as<TmLetBoxTm>();
    require_level(cx, x->res_level, y->res_level, "letbox");
    require_level(cx, x->code_level, y->code_level, "letbox");
    conv_ctx(cx, Layer::D, x->ctx, y->ctx);
    {
      Cx cd = cx;
      cd.lc = x->ctx;
      cd.layer = Layer::D;
      conv_type(cd, x->type, y->type, x->code_level);
    }
    conv_term_nee(cx, x->scrut, y->scrut);
    Type scrut_ty = ty::code_tm(x->ctx, x->type, x->code_level);
    Cx cm = cx.with_local(x->motive_binder, scrut_ty, Level::zero());
    conv_type(cm, x->motive, y->motive, x->res_level);
    Cx cb = cx.with_global(TrmBind{x->binder, x->ctx, Layer::C, x->type, x->code_level});
    Type body_ty = linst(gshift(x->motive, 1),
                         {tm::box_tm(tm::global(0, lwk(gshift(x->ctx, 1), 0), x->binder))});
    conv_term(cb, x->body, y->body, body_ty, x->res_level);
    return {linst(x->motive, {x->scrut}), x->res_level};
  }
  if (const auto* x = a.as<TmElimTyp>()) {
    const auto* y = b.as<TmElimTyp>();
    conv_recursor_premises(cx, *x, *y);
    const auto* bx = x->scrut.as<TmBoxTy>();
    const auto* by = y->scrut.as<TmBoxTy>();
    if (bx || by) {
      // stuck on boxed global type variables, compared as static code
      if (!bx || !by || !aeq(x->scrut, y->scrut, LevelCmp::ModuloLevels))
        fail("recursor: boxed scrutinees differ");
    } else {
      conv_term_nee(cx, x->scrut, y->scrut);
    }
    return {inst_motive_typ(x->motives, x->index_level, x->index_ctx, x->scrut), x->typ_level};
  }
  if (const auto* x = a.as<TmElimTrm>()) {
    const auto* y = b.as<TmElimTrm>();
    conv_recursor_premises(cx, *x, *y);
    {
      Cx cd = cx;
      cd.layer = Layer::D;
      conv_type(cd, x->index_type, y->index_type, Level::succ(x->index_level));
    }
    const auto* bx = x->scrut.as<TmBoxTm>();
    const auto* by = y->scrut.as<TmBoxTm>();
    if (bx || by) {
      if (!bx || !by || !aeq(x->scrut, y->scrut, LevelCmp::ModuloLevels))
        fail("recursor: boxed scrutinees differ");
    } else {
      conv_term_nee(cx, x->scrut, y->scrut);
    }
    return {inst_motive_trm(x->motives, x->index_level, x->index_ctx, x->index_type, x->scrut),
            x->trm_level};
  }
  fail("neutral: unrecognized head");
}

// ---------------------------------------------------------------------------
// Contexts and local substitutions

inline void conv_ctx(const Cx& cx, Layer i, const LocalCtx& a, const LocalCtx& b) {
  if (a.base != b.base) fail("context: bases differ");
  if (a.entries.size() != b.entries.size()) fail("context: lengths differ");
  Cx c = cx;
  c.layer = i;
  c.lc = LocalCtx{a.base, {}};
  for (std::size_t j = 0; j < a.entries.size(); ++j) {
    require_level(cx, a.entries[j].level, b.entries[j].level, "context entry");
    conv_type(c, a.entries[j].type, b.entries[j].type, a.entries[j].level);
    c.lc = c.lc.extended(a.entries[j].name, a.entries[j].type, a.entries[j].level);
  }
}

inline void conv_lsubst(const Cx& cx, const LocalSubst& a, const LocalSubst& b,
                        const LocalCtx& target) {
  if (a.base != b.base || a.base_var != b.base_var || a.base_count != b.base_count)
    fail("local substitution: bases differ");
  if (a.entries.size() != b.entries.size() || a.entries.size() != target.size())
    fail("local substitution: entry counts differ");
  LocalSubst prefix = a;
  prefix.entries.clear();
  for (std::size_t j = 0; j < a.entries.size(); ++j) {
    const LocalCtxEntry& e = target.entries[j];
    conv_term(cx, a.entries[j], b.entries[j], lsubst_apply_type(e.type, prefix), e.level);
    prefix.entries.push_back(a.entries[j]);
  }
}

}  // namespace conv_detail

// ---------------------------------------------------------------------------
// Public surface: verdicts instead of exceptions.

namespace detail {
template <class Fn>
ConvVerdict conv_guard(Fn&& fn) {
  try {
    fn();
    return {true, ""};
  } catch (const conv_detail::Mismatch& m) {
    return {false, m.reason};
  }
}
}  // namespace detail

inline ConvVerdict conv_type(const UnivCtx& uc, const GlobalCtx& gc, const LocalCtx& lc, Layer i,
                             const Type& a, const Type& b, const Level& l, Fuel fuel = {}) {
  if (!comp(i)) throw KernelError("conv_type: layer does not compute");
  return detail::conv_guard([&] { conv_detail::conv_type({uc, gc, lc, i, fuel}, a, b, l); });
}

inline ConvVerdict conv_term(const UnivCtx& uc, const GlobalCtx& gc, const LocalCtx& lc, Layer i,
                             const Term& a, const Term& b, const Type& t, const Level& l,
                             Fuel fuel = {}) {
  if (!comp(i)) throw KernelError("conv_term: layer does not compute");
  return detail::conv_guard([&] { conv_detail::conv_term({uc, gc, lc, i, fuel}, a, b, t, l); });
}

inline ConvVerdict conv_ctx(const UnivCtx& uc, const GlobalCtx& gc, Layer i, const LocalCtx& a,
                            const LocalCtx& b, Fuel fuel = {}) {
  if (!comp(i)) throw KernelError("conv_ctx: layer does not compute");
  return detail::conv_guard(
      [&] { conv_detail::conv_ctx({uc, gc, LocalCtx{}, i, fuel}, i, a, b); });
}

inline ConvVerdict conv_lsubst(const UnivCtx& uc, const GlobalCtx& gc, const LocalCtx& lc, Layer i,
                               const LocalSubst& a, const LocalSubst& b, const LocalCtx& target,
                               Fuel fuel = {}) {
  if (!comp(i)) throw KernelError("conv_lsubst: layer does not compute");
  return detail::conv_guard(
      [&] { conv_detail::conv_lsubst({uc, gc, lc, i, fuel}, a, b, target); });
}

}  // namespace delam
