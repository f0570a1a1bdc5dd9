#pragma once

// The layer-indexed, syntax-directed checker for all judgment forms:
// global contexts, local contexts, types, terms, and local substitutions.
// Equality obligations route through the convertibility checker at
// typeof(i); universe levels are normalized at every inference return, so
// level comparison is map equality.
//
// Failures throw TypeError carrying a Diagnostic with the violated rule,
// a path to the offending subterm, and pretty-printed expectation/actual.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delam/convert.hpp"
#include "delam/printer.hpp"

namespace delam {

struct Diagnostic {
  std::string rule;
  std::string message;
  std::vector<std::string> path;
  std::string expected;
  std::string actual;

  std::string render() const {
    std::string r = "rule " + rule;
    if (!path.empty()) {
      r += " at ";
      for (std::size_t i = 0; i < path.size(); ++i) r += (i ? "." : "") + path[i];
    }
    r += ": " + message;
    if (!expected.empty()) r += "\n  expected: " + expected;
    if (!actual.empty()) r += "\n  actual:   " + actual;
    return r;
  }
};

struct TypeError : std::runtime_error {
  Diagnostic diag;
  explicit TypeError(Diagnostic d) : std::runtime_error(d.render()), diag(std::move(d)) {}
};

struct TypingEnv {
  UnivCtx uc;
  GlobalCtx gc;
  LocalCtx lc;
  Layer layer = Layer::M;
  Fuel fuel;
  std::vector<std::string> path;

  PrintScopes scopes() const { return PrintScopes::from(uc, gc, lc); }

  TypingEnv at(const std::string& step) const {
    TypingEnv r = *this;
    r.path.push_back(step);
    return r;
  }
  TypingEnv with_layer(Layer i) const {
    TypingEnv r = *this;
    r.layer = i;
    return r;
  }
  TypingEnv with_local(const std::string& name, const Type& t, const Level& l) const {
    TypingEnv r = *this;
    r.lc = r.lc.extended(name, t, l);
    return r;
  }
  TypingEnv with_global(GlobalBind b) const {
    TypingEnv r = *this;
    r.gc = r.gc.extended(std::move(b));
    r.lc = gshift(r.lc, 1);
    return r;
  }
  TypingEnv with_levels(int n) const {
    TypingEnv r = *this;
    r.uc = r.uc.extended(static_cast<std::size_t>(n));
    r.gc = ushift(r.gc, n);
    r.lc = ushift(r.lc, n);
    return r;
  }
  TypingEnv in_ctx(LocalCtx ctx, Layer i) const {
    TypingEnv r = *this;
    r.lc = std::move(ctx);
    r.layer = i;
    return r;
  }

  [[noreturn]] void reject(std::string rule, std::string message, std::string expected = "",
                           std::string actual = "") const {
    throw TypeError(Diagnostic{std::move(rule), std::move(message), path, std::move(expected),
                               std::move(actual)});
  }
};

inline Level infer_type(const TypingEnv& e, const Type& t);
inline std::pair<Type, Level> infer_term(const TypingEnv& e, const Term& t);
inline void check_term(const TypingEnv& e, const Term& t, const Type& ty, const Level& l);
inline void check_lctx(const TypingEnv& e, Layer i, const LocalCtx& ctx);
inline void check_lsubst(const TypingEnv& e, const LocalSubst& d, const LocalCtx& target);

namespace typing_detail {

inline Level norm(const TypingEnv& e, const Level& l) {
  return l.is_omega() ? l : normalize(e.uc, l);
}

inline void require_wf_level(const TypingEnv& e, const Level& l, const char* rule) {
  if (!wf_level(e.uc, l)) {
    e.reject(rule, l.is_omega() ? "omega is not a well-formed universe level"
                                : "universe level is not well-formed here",
             "", show_level(e.uc, l));
  }
}

inline void require_level_eq(const TypingEnv& e, const Level& actual, const Level& expected,
                             const char* rule) {
  if (!level_equiv(e.uc, actual, expected))
    e.reject(rule, "universe level mismatch", show_level(e.uc, expected),
             show_level(e.uc, actual));
}

inline void require_computing_layer(const TypingEnv& e, const char* rule) {
  if (e.layer == Layer::V)
    e.reject(rule, "only variables are available at layer v");
}

inline void require_meta_layer(const TypingEnv& e, const char* rule) {
  if (e.layer != Layer::M)
    e.reject(rule, std::string("meta-programming constructs require layer m, found layer ") +
                       layer_name(e.layer));
}

}  // namespace typing_detail

// ---------------------------------------------------------------------------
// Global and local context formation

inline void check_gctx(const UnivCtx& uc, const GlobalCtx& gc, Fuel fuel = {}) {
  GlobalCtx prefix;
  for (const GlobalBind& b : gc.binds) {
    TypingEnv e{uc, prefix, LocalCtx{}, Layer::D, fuel, {}};
    std::visit(
        overloaded{[&](const CtxBind&) {},
                   [&](const TypBind& x) {
                     if (x.layer != Layer::C && x.layer != Layer::D)
                       e.reject("gctx-typ", "a type binding must live at layer c or d");
                     typing_detail::require_wf_level(e, x.level, "gctx-typ");
                     check_lctx(e.at(x.name), Layer::D, x.ctx);
                   },
                   [&](const TrmBind& x) {
                     if (x.layer != Layer::V && x.layer != Layer::C)
                       e.reject("gctx-trm", "a term binding must live at layer v or c");
                     typing_detail::require_wf_level(e, x.level, "gctx-trm");
                     check_lctx(e.at(x.name), Layer::D, x.ctx);
                     Level l = infer_type(e.at(x.name).in_ctx(x.ctx, Layer::D), x.type);
                     typing_detail::require_level_eq(e.at(x.name), l, x.level, "gctx-trm");
                   }},
        b);
    prefix = prefix.extended(b);
  }
}

inline void check_lctx(const TypingEnv& e, Layer i, const LocalCtx& ctx) {
  TypingEnv cur = e.in_ctx(LocalCtx{}, i);
  if (ctx.base) {
    if (*ctx.base < 0 || static_cast<std::size_t>(*ctx.base) >= e.gc.size())
      e.reject("lctx-var", "context variable out of range");
    if (!std::holds_alternative<CtxBind>(gctx_bind_raw(e.gc, *ctx.base)))
      e.reject("lctx-var", "context base does not name a context variable");
    cur.lc = LocalCtx::var(*ctx.base);
  }
  for (const auto& entry : ctx.entries) {
    typing_detail::require_wf_level(cur, entry.level, "lctx-ext");
    Level l = infer_type(cur.at(entry.name), entry.type);
    typing_detail::require_level_eq(cur.at(entry.name), l, entry.level, "lctx-ext");
    cur.lc = cur.lc.extended(entry.name, entry.type, entry.level);
  }
}

// Context equivalence: convertibility pairwise at computing layers, static
// equality modulo universe levels otherwise.
inline bool lctx_equiv(const UnivCtx& uc, const GlobalCtx& gc, Layer i, const LocalCtx& a,
                       const LocalCtx& b, Fuel fuel = {}) {
  if (comp(i)) return static_cast<bool>(conv_ctx(uc, gc, i, a, b, fuel));
  return aeq(a, b, LevelCmp::ModuloLevels);
}

// ---------------------------------------------------------------------------
// Local substitutions

inline void check_lsubst(const TypingEnv& e, const LocalSubst& d, const LocalCtx& target) {
  const char* rule = "lsubst";
  if (target.ends_with_var()) {
    if (d.base != LocalSubst::Base::Weaken || d.base_var != target.base)
      e.reject(rule, "substitution base must weaken from the target's context variable");
  } else {
    if (d.base != LocalSubst::Base::Empty)
      e.reject(rule, "substitution base must be empty for an empty target context");
  }
  if (d.base_var != e.lc.base)
    e.reject(rule, "substitution base does not match the context it lives in");
  if (d.base_count != e.lc.size())
    e.reject(rule, "substitution weakening count does not match the context length",
             std::to_string(e.lc.size()), std::to_string(d.base_count));
  if (d.entries.size() != target.size())
    e.reject(rule, "substitution length does not match the target context",
             std::to_string(target.size()), std::to_string(d.entries.size()));
  LocalSubst prefix = d;
  prefix.entries.clear();
  for (std::size_t j = 0; j < d.entries.size(); ++j) {
    const LocalCtxEntry& entry = target.entries[j];
    check_term(e.at("subst." + entry.name), d.entries[j], lsubst_apply_type(entry.type, prefix),
               entry.level);
    prefix.entries.push_back(d.entries[j]);
  }
}

// ---------------------------------------------------------------------------
// Types

inline Level infer_type(const TypingEnv& e, const Type& t) {
  using namespace typing_detail;
  require_computing_layer(e, "type");
  return std::visit(
      overloaded{
          [&](const TyNat&) { return Level::zero(); },
          [&](const TyPi& x) {
            require_wf_level(e, x.dom_level, "pi");
            require_wf_level(e, x.cod_level, "pi");
            Level ld = infer_type(e.at("pi.dom"), x.dom);
            require_level_eq(e.at("pi.dom"), ld, x.dom_level, "pi");
            TypingEnv e2 = e.with_local(x.binder, x.dom, x.dom_level);
            Level lc2 = infer_type(e2.at("pi.cod"), x.cod);
            require_level_eq(e2.at("pi.cod"), lc2, x.cod_level, "pi");
            return norm(e, Level::lub(x.dom_level, x.cod_level));
          },
          [&](const TyTy& x) {
            require_wf_level(e, x.level, "ty");
            return norm(e, Level::succ(x.level));
          },
          [&](const TyUPi& x) {
            require_meta_layer(e, "upi");
            if (x.var_count == 0) e.reject("upi", "at least one universe variable is required");
            TypingEnv e2 = e.with_levels(static_cast<int>(x.var_count));
            require_wf_level(e2, x.level, "upi");
            Level l = infer_type(e2.at("upi.body"), x.body);
            require_level_eq(e2.at("upi.body"), l, x.level, "upi");
            return Level::omega();
          },
          [&](const TyEl& x) {
            require_wf_level(e, x.level, "el");
            check_term(e.at("el.code"), x.code, ty::universe(x.level), Level::succ(x.level));
            return norm(e, x.level);
          },
          [&](const TyGlobal& x) {
            if (x.index < 0 || static_cast<std::size_t>(x.index) >= e.gc.size())
              e.reject("type-var", "global type variable out of range");
            GlobalBind b = gctx_lookup(e.gc, x.index);
            const auto* tb = std::get_if<TypBind>(&b);
            if (!tb) e.reject("type-var", "global variable does not name a type binding");
            if (!layer_leq(tb->layer, e.layer))
              e.reject("type-var",
                       std::string("binding at layer ") + layer_name(tb->layer) +
                           " cannot be used at layer " + layer_name(e.layer));
            check_lsubst(e.at(x.name), x.subst, tb->ctx);
            return norm(e, tb->level);
          },
          [&](const TyCtxPi& x) {
            require_meta_layer(e, "ctxpi");
            require_wf_level(e, x.level, "ctxpi");
            TypingEnv e2 = e.with_global(CtxBind{x.binder});
            Level l = infer_type(e2.at("ctxpi.body"), x.body);
            require_level_eq(e2.at("ctxpi.body"), l, x.level, "ctxpi");
            return norm(e, x.level);
          },
          [&](const TyTyPi& x) {
            require_meta_layer(e, "typi");
            require_wf_level(e, x.bind_level, "typi");
            require_wf_level(e, x.res_level, "typi");
            check_lctx(e.at("typi.ctx"), Layer::D, x.ctx);
            TypingEnv e2 = e.with_global(TypBind{x.binder, x.ctx, Layer::D, x.bind_level});
            Level l = infer_type(e2.at("typi.body"), x.body);
            require_level_eq(e2.at("typi.body"), l, x.res_level, "typi");
            return norm(e, x.res_level);
          },
          [&](const TyCodeTy& x) {
            require_meta_layer(e, "code-ty");
            require_wf_level(e, x.level, "code-ty");
            check_lctx(e.at("code.ctx"), Layer::D, x.ctx);
            return Level::zero();
          },
          [&](const TyCodeTm& x) {
            require_meta_layer(e, "code-tm");
            require_wf_level(e, x.level, "code-tm");
            check_lctx(e.at("code.ctx"), Layer::D, x.ctx);
            Level l = infer_type(e.at("code.type").in_ctx(x.ctx, Layer::D), x.type);
            require_level_eq(e.at("code.type"), l, x.level, "code-tm");
            return Level::zero();
          }},
      t.node().v);
}

// ---------------------------------------------------------------------------
// Recursor premise groups

namespace typing_detail {

inline void check_motives(const TypingEnv& e, const Motives& m, const Level& l1, const Level& l2) {
  MotiveSignature sig = motive_signature(l1, l2);
  {
    TypingEnv et = e.with_levels(1);
    for (const GlobalBind& g : sig.psi_typ) et = et.with_global(g);
    et = et.with_local(sig.x_typ.name, sig.x_typ.type, sig.x_typ.level);
    Level l = infer_type(et.at("motive.typ"), m.typ);
    require_level_eq(et.at("motive.typ"), l, sig.level_typ, "recursor-motive");
  }
  {
    TypingEnv et = e.with_levels(1);
    for (const GlobalBind& g : sig.psi_trm) et = et.with_global(g);
    et = et.with_local(sig.x_trm.name, sig.x_trm.type, sig.x_trm.level);
    Level l = infer_type(et.at("motive.trm"), m.trm);
    require_level_eq(et.at("motive.trm"), l, sig.level_trm, "recursor-motive");
  }
}

inline void check_branches(const TypingEnv& e, const Motives& m, const Branches& b, const Level& l1,
                           const Level& l2) {
  for (BranchKind k : kAllBranchKinds) {
    BranchSignature sig = branch_signature(k, m, l1, l2);
    TypingEnv eb = e.with_levels(sig.level_count);
    for (const GlobalBind& g : sig.psi_ext) eb = eb.with_global(g);
    for (const LocalCtxEntry& entry : sig.gamma_ext)
      eb = eb.with_local(entry.name, entry.type, entry.level);
    check_term(eb.at(std::string("branch.") + branch_keyword(k)), b.at(k), sig.expected,
               sig.expected_level);
  }
}

}  // namespace typing_detail

// ---------------------------------------------------------------------------
// Terms

inline std::pair<Type, Level> infer_term(const TypingEnv& e, const Term& t) {
  using namespace typing_detail;
  return std::visit(
      overloaded{
          [&](const TmVar& x) -> std::pair<Type, Level> {
            if (x.index < 0 || static_cast<std::size_t>(x.index) >= e.lc.size())
              e.reject("var", "local variable out of range" +
                                  (e.lc.ends_with_var() ? std::string(" (variables of the context "
                                                                      "variable are abstract)")
                                                        : std::string()));
            auto [ty, l] = lctx_lookup(e.lc, x.index);
            return {ty, norm(e, l)};
          },
          [&](const TmGlobal& x) -> std::pair<Type, Level> {
            if (x.index < 0 || static_cast<std::size_t>(x.index) >= e.gc.size())
              e.reject("global-var", "global term variable out of range");
            GlobalBind b = gctx_lookup(e.gc, x.index);
            const auto* tb = std::get_if<TrmBind>(&b);
            if (!tb) e.reject("global-var", "global variable does not name a term binding");
            if (!layer_leq(tb->layer, e.layer))
              e.reject("global-var",
                       std::string("binding at layer ") + layer_name(tb->layer) +
                           " cannot be used at layer " + layer_name(e.layer));
            check_lsubst(e.at(x.name), x.subst, tb->ctx);
            return {lsubst_apply_type(tb->type, x.subst), norm(e, tb->level)};
          },
          [&](const TmNat&) -> std::pair<Type, Level> {
            require_computing_layer(e, "nat-code");
            return {ty::universe(Level::zero()), Level::constant(1)};
          },
          [&](const TmPi& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "pi-code");
            require_wf_level(e, x.dom_level, "pi-code");
            require_wf_level(e, x.cod_level, "pi-code");
            check_term(e.at("pi.dom"), x.dom, ty::universe(x.dom_level), Level::succ(x.dom_level));
            TypingEnv e2 = e.with_local(x.binder, ty::el(x.dom_level, x.dom), x.dom_level);
            check_term(e2.at("pi.cod"), x.cod, ty::universe(x.cod_level), Level::succ(x.cod_level));
            Level l = Level::lub(x.dom_level, x.cod_level);
            return {ty::universe(l), norm(e, Level::succ(l))};
          },
          [&](const TmTy& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "ty-code");
            require_wf_level(e, x.level, "ty-code");
            return {ty::universe(Level::succ(x.level)), norm(e, Level::plus(2, x.level))};
          },
          [&](const TmZero&) -> std::pair<Type, Level> {
            require_computing_layer(e, "zero");
            return {ty::nat(), Level::zero()};
          },
          [&](const TmSucc& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "succ");
            check_term(e.at("succ.arg"), x.arg, ty::nat(), Level::zero());
            return {ty::nat(), Level::zero()};
          },
          [&](const TmElimNat& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "elim-nat");
            require_wf_level(e, x.level, "elim-nat");
            TypingEnv em = e.with_local(x.motive_binder, ty::nat(), Level::zero());
            Level lm = infer_type(em.at("elimNat.motive"), x.motive);
            require_level_eq(em, lm, x.level, "elim-nat");
            check_term(e.at("elimNat.base"), x.base, linst(x.motive, {tm::zero()}), x.level);
            TypingEnv es = em.with_local(x.step_rec_binder, x.motive, x.level);
            Type step_ty = linst(x.motive, {tm::succ(tm::var(1, x.step_binder))}, 2);
            check_term(es.at("elimNat.step"), x.step, step_ty, x.level);
            check_term(e.at("elimNat.scrut"), x.scrut, ty::nat(), Level::zero());
            return {linst(x.motive, {x.scrut}), norm(e, x.level)};
          },
          [&](const TmLam& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "fun");
            require_wf_level(e, x.dom_level, "fun");
            require_wf_level(e, x.cod_level, "fun");
            Level ld = infer_type(e.at("fun.dom"), x.dom);
            require_level_eq(e.at("fun.dom"), ld, x.dom_level, "fun");
            TypingEnv e2 = e.with_local(x.binder, x.dom, x.dom_level);
            auto [body_ty, body_lv] = infer_term(e2.at("fun.body"), x.body);
            require_level_eq(e2.at("fun.body"), body_lv, x.cod_level, "fun");
            return {ty::pi(x.dom_level, x.cod_level, x.binder, x.dom, body_ty),
                    norm(e, Level::lub(x.dom_level, x.cod_level))};
          },
          [&](const TmApp& x) -> std::pair<Type, Level> {
            require_computing_layer(e, "app");
            require_wf_level(e, x.dom_level, "app");
            require_wf_level(e, x.cod_level, "app");
            Level ld = infer_type(e.at("app.dom"), x.dom);
            require_level_eq(e.at("app.dom"), ld, x.dom_level, "app");
            TypingEnv e2 = e.with_local(x.binder, x.dom, x.dom_level);
            Level lcod = infer_type(e2.at("app.cod"), x.cod);
            require_level_eq(e2.at("app.cod"), lcod, x.cod_level, "app");
            Type fn_ty = ty::pi(x.dom_level, x.cod_level, x.binder, x.dom, x.cod);
            check_term(e.at("app.fn"), x.fn, fn_ty, Level::lub(x.dom_level, x.cod_level));
            check_term(e.at("app.arg"), x.arg, x.dom, x.dom_level);
            return {linst(x.cod, {x.arg}), norm(e, x.cod_level)};
          },
          [&](const TmULam& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "ulam");
            if (x.var_count == 0) e.reject("ulam", "at least one universe variable is required");
            TypingEnv e2 = e.with_levels(static_cast<int>(x.var_count));
            require_wf_level(e2, x.level, "ulam");
            auto [body_ty, body_lv] = infer_term(e2.at("ulam.body"), x.body);
            require_level_eq(e2.at("ulam.body"), body_lv, x.level, "ulam");
            return {ty::upi(x.var_count, x.binders, x.level, body_ty), Level::omega()};
          },
          [&](const TmUApp& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "uapp");
            auto [fn_ty, fn_lv] = infer_term(e.at("uapp.fn"), x.fn);
            Type w = whnf_type(fn_ty, e.fuel);
            const auto* p = w.as<TyUPi>();
            if (!p)
              e.reject("uapp", "the head is not universe polymorphic", "UPi",
                       print_type(e.scopes(), w));
            if (x.levels.size() != p->var_count || x.levels.empty())
              e.reject("uapp", "wrong number of universe levels",
                       std::to_string(p->var_count), std::to_string(x.levels.size()));
            for (const Level& l : x.levels) require_wf_level(e, l, "uapp");
            return {uinst(p->body, x.levels), norm(e, uinst_level(p->level, x.levels))};
          },
          [&](const TmCtxLam& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "ctxfun");
            require_wf_level(e, x.level, "ctxfun");
            TypingEnv e2 = e.with_global(CtxBind{x.binder});
            auto [body_ty, body_lv] = infer_term(e2.at("ctxfun.body"), x.body);
            require_level_eq(e2.at("ctxfun.body"), body_lv, x.level, "ctxfun");
            return {ty::ctx_pi(x.binder, x.level, body_ty), norm(e, x.level)};
          },
          [&](const TmCtxApp& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "ctxapp");
            auto [fn_ty, fn_lv] = infer_term(e.at("ctxapp.fn"), x.fn);
            Type w = whnf_type(fn_ty, e.fuel);
            const auto* p = w.as<TyCtxPi>();
            if (!p)
              e.reject("ctxapp", "the head is not a context function", "CtxPi",
                       print_type(e.scopes(), w));
            check_lctx(e.at("ctxapp.arg"), Layer::D, x.arg);
            return {ginst(p->body, {GlobalEntry{x.arg}}), norm(e, p->level)};
          },
          [&](const TmTyLam& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "tyfun");
            require_wf_level(e, x.bind_level, "tyfun");
            require_wf_level(e, x.res_level, "tyfun");
            check_lctx(e.at("tyfun.ctx"), Layer::D, x.ctx);
            TypingEnv e2 = e.with_global(TypBind{x.binder, x.ctx, Layer::D, x.bind_level});
            auto [body_ty, body_lv] = infer_term(e2.at("tyfun.body"), x.body);
            require_level_eq(e2.at("tyfun.body"), body_lv, x.res_level, "tyfun");
            return {ty::ty_pi(x.binder, x.ctx, x.bind_level, x.res_level, body_ty),
                    norm(e, x.res_level)};
          },
          [&](const TmTyApp& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "tyapp");
            auto [fn_ty, fn_lv] = infer_term(e.at("tyapp.fn"), x.fn);
            Type w = whnf_type(fn_ty, e.fuel);
            const auto* p = w.as<TyTyPi>();
            if (!p)
              e.reject("tyapp", "the head is not a type function", "TyPi",
                       print_type(e.scopes(), w));
            Level l = infer_type(e.at("tyapp.arg").in_ctx(p->ctx, Layer::D), x.arg);
            require_level_eq(e.at("tyapp.arg"), l, p->bind_level, "tyapp");
            return {ginst(p->body, {GlobalEntry{x.arg}}), norm(e, p->res_level)};
          },
          [&](const TmBoxTy&) -> std::pair<Type, Level> {
            e.reject("box", "boxed code cannot be inferred; it is checked against a code type");
          },
          [&](const TmBoxTm&) -> std::pair<Type, Level> {
            e.reject("box", "boxed code cannot be inferred; it is checked against a code type");
          },
          [&](const TmLetBoxTy& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "letbox-ty");
            require_wf_level(e, x.res_level, "letbox-ty");
            require_wf_level(e, x.code_level, "letbox-ty");
            check_lctx(e.at("letbox.ctx"), Layer::D, x.ctx);
            check_term(e.at("letbox.scrut"), x.scrut, ty::code_ty(x.ctx, x.code_level),
                       Level::zero());
            TypingEnv em =
                e.with_local(x.motive_binder, ty::code_ty(x.ctx, x.code_level), Level::zero());
            Level lm = infer_type(em.at("letbox.motive"), x.motive);
            require_level_eq(em, lm, x.res_level, "letbox-ty");
            TypingEnv eb = e.with_global(TypBind{x.binder, x.ctx, Layer::C, x.code_level});
            Type body_ty = linst(gshift(x.motive, 1),
                                 {tm::box_ty(ty::global(0, lwk(gshift(x.ctx, 1), 0), x.binder))});
            check_term(eb.at("letbox.body"), x.body, body_ty, x.res_level);
            return {linst(x.motive, {x.scrut}), norm(e, x.res_level)};
          },
          [&](const TmLetBoxTm& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "letbox-tm");
            require_wf_level(e, x.res_level, "letbox-tm");
            require_wf_level(e, x.code_level, "letbox-tm");
            check_lctx(e.at("letbox.ctx"), Layer::D, x.ctx);
            Level lt = infer_type(e.at("letbox.type").in_ctx(x.ctx, Layer::D), x.type);
            require_level_eq(e.at("letbox.type"), lt, x.code_level, "letbox-tm");
            check_term(e.at("letbox.scrut"), x.scrut, ty::code_tm(x.ctx, x.type, x.code_level),
                       Level::zero());
            TypingEnv em = e.with_local(x.motive_binder,
                                        ty::code_tm(x.ctx, x.type, x.code_level), Level::zero());
            Level lm = infer_type(em.at("letbox.motive"), x.motive);
            require_level_eq(em, lm, x.res_level, "letbox-tm");
            TypingEnv eb = e.with_global(TrmBind{x.binder, x.ctx, Layer::C, x.type, x.code_level});
            Type body_ty = linst(gshift(x.motive, 1),
                                 {tm::box_tm(tm::global(0, lwk(gshift(x.ctx, 1), 0), x.binder))});
            check_term(eb.at("letbox.body"), x.body, body_ty, x.res_level);
            return {linst(x.motive, {x.scrut}), norm(e, x.res_level)};
          },
          [&](const TmElimTyp& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "elim-ty");
            require_wf_level(e, x.typ_level, "elim-ty");
            require_wf_level(e, x.trm_level, "elim-ty");
            require_wf_level(e, x.index_level, "elim-ty");
            check_motives(e, x.motives, x.typ_level, x.trm_level);
            check_branches(e, x.motives, x.branches, x.typ_level, x.trm_level);
            check_lctx(e.at("elim.ctx"), Layer::D, x.index_ctx);
            check_term(e.at("elim.scrut"), x.scrut, ty::code_ty(x.index_ctx, x.index_level),
                       Level::zero());
            return {inst_motive_typ(x.motives, x.index_level, x.index_ctx, x.scrut),
                    norm(e, x.typ_level)};
          },
          [&](const TmElimTrm& x) -> std::pair<Type, Level> {
            require_meta_layer(e, "elim-tm");
            require_wf_level(e, x.typ_level, "elim-tm");
            require_wf_level(e, x.trm_level, "elim-tm");
            require_wf_level(e, x.index_level, "elim-tm");
            check_motives(e, x.motives, x.typ_level, x.trm_level);
            check_branches(e, x.motives, x.branches, x.typ_level, x.trm_level);
            check_lctx(e.at("elim.ctx"), Layer::D, x.index_ctx);
            Level lt = infer_type(e.at("elim.type").in_ctx(x.index_ctx, Layer::D), x.index_type);
            require_level_eq(e.at("elim.type"), lt, x.index_level, "elim-tm");
            check_term(e.at("elim.scrut"), x.scrut,
                       ty::code_tm(x.index_ctx, x.index_type, x.index_level), Level::zero());
            return {inst_motive_trm(x.motives, x.index_level, x.index_ctx, x.index_type, x.scrut),
                    norm(e, x.trm_level)};
          }},
      t.node().v);
}

inline void check_term(const TypingEnv& e, const Term& t, const Type& expected, const Level& l) {
  using namespace typing_detail;
  // Introduction forms propagate checking into their bodies, so that boxed
  // code (a checking-only form) may appear under binders.
  if (const auto* lam = t.as<TmLam>()) {
    require_computing_layer(e, "fun");
    Type w = whnf_type(expected, e.fuel);
    if (const auto* p = w.as<TyPi>()) {
      require_wf_level(e, lam->dom_level, "fun");
      require_wf_level(e, lam->cod_level, "fun");
      require_level_eq(e, lam->dom_level, p->dom_level, "fun");
      require_level_eq(e, lam->cod_level, p->cod_level, "fun");
      Level ld = infer_type(e.at("fun.dom"), lam->dom);
      require_level_eq(e.at("fun.dom"), ld, lam->dom_level, "fun");
      ConvVerdict v = conv_type(e.uc, e.gc, e.lc, typeof_layer(e.layer), lam->dom, p->dom,
                                lam->dom_level, e.fuel);
      if (!v)
        e.reject("fun", "domain annotation does not match the expected type: " + v.reason,
                 print_type(e.scopes(), p->dom), print_type(e.scopes(), lam->dom));
      TypingEnv e2 = e.with_local(lam->binder, lam->dom, lam->dom_level);
      check_term(e2.at("fun.body"), lam->body, p->cod, p->cod_level);
      return;
    }
    e.reject("fun", "function against a non-Pi type", print_type(e.scopes(), w), "fun");
  }
  if (const auto* ul = t.as<TmULam>()) {
    require_meta_layer(e, "ulam");
    Type w = whnf_type(expected, e.fuel);
    if (const auto* p = w.as<TyUPi>()) {
      if (ul->var_count != p->var_count)
        e.reject("ulam", "wrong number of universe variables", std::to_string(p->var_count),
                 std::to_string(ul->var_count));
      TypingEnv e2 = e.with_levels(static_cast<int>(ul->var_count));
      require_wf_level(e2, ul->level, "ulam");
      require_level_eq(e2, ul->level, p->level, "ulam");
      check_term(e2.at("ulam.body"), ul->body, p->body, p->level);
      return;
    }
    e.reject("ulam", "universe abstraction against a non-UPi type", print_type(e.scopes(), w),
             "ulam");
  }
  if (const auto* cl = t.as<TmCtxLam>()) {
    require_meta_layer(e, "ctxfun");
    Type w = whnf_type(expected, e.fuel);
    if (const auto* p = w.as<TyCtxPi>()) {
      require_wf_level(e, cl->level, "ctxfun");
      require_level_eq(e, cl->level, p->level, "ctxfun");
      TypingEnv e2 = e.with_global(CtxBind{cl->binder});
      check_term(e2.at("ctxfun.body"), cl->body, p->body, p->level);
      return;
    }
    e.reject("ctxfun", "context abstraction against a non-CtxPi type", print_type(e.scopes(), w),
             "ctxfun");
  }
  if (const auto* tl = t.as<TmTyLam>()) {
    require_meta_layer(e, "tyfun");
    Type w = whnf_type(expected, e.fuel);
    if (const auto* p = w.as<TyTyPi>()) {
      require_wf_level(e, tl->bind_level, "tyfun");
      require_wf_level(e, tl->res_level, "tyfun");
      require_level_eq(e, tl->bind_level, p->bind_level, "tyfun");
      require_level_eq(e, tl->res_level, p->res_level, "tyfun");
      check_lctx(e.at("tyfun.ctx"), Layer::D, tl->ctx);
      ConvVerdict v = conv_ctx(e.uc, e.gc, Layer::D, tl->ctx, p->ctx, e.fuel);
      if (!v)
        e.reject("tyfun", "bound context does not match the expected type: " + v.reason);
      TypingEnv e2 = e.with_global(TypBind{tl->binder, tl->ctx, Layer::D, tl->bind_level});
      check_term(e2.at("tyfun.body"), tl->body, p->body, p->res_level);
      return;
    }
    e.reject("tyfun", "type abstraction against a non-TyPi type", print_type(e.scopes(), w),
             "tyfun");
  }
  // boxed code is a checking form: the expected type supplies the context
  if (const auto* bt = t.as<TmBoxTy>()) {
    require_meta_layer(e, "box-ty");
    Type w = whnf_type(expected, e.fuel);
    const auto* code = w.as<TyCodeTy>();
    if (!code)
      e.reject("box-ty", "boxed type against a non-code type", print_type(e.scopes(), w), "box ty");
    Level lt = infer_type(e.at("box").in_ctx(code->ctx, Layer::C), bt->body);
    require_level_eq(e.at("box"), lt, code->level, "box-ty");
    return;
  }
  if (const auto* bt = t.as<TmBoxTm>()) {
    require_meta_layer(e, "box-tm");
    Type w = whnf_type(expected, e.fuel);
    const auto* code = w.as<TyCodeTm>();
    if (!code)
      e.reject("box-tm", "boxed term against a non-code type", print_type(e.scopes(), w), "box tm");
    check_term(e.at("box").in_ctx(code->ctx, Layer::C), bt->body, code->type, code->level);
    return;
  }
  auto [inferred, inferred_lv] = infer_term(e, t);
  require_level_eq(e, inferred_lv, l, "conv");
  if (inferred_lv.is_omega()) {
    // universe-polymorphic function types compare at layer m
    ConvVerdict v = conv_type(e.uc, e.gc, e.lc, Layer::M, inferred, expected, Level::omega(), e.fuel);
    if (!v)
      e.reject("conv", "type mismatch: " + v.reason, print_type(e.scopes(), expected),
               print_type(e.scopes(), inferred));
    return;
  }
  ConvVerdict v =
      conv_type(e.uc, e.gc, e.lc, typeof_layer(e.layer), inferred, expected, l, e.fuel);
  if (!v)
    e.reject("conv", "type mismatch: " + v.reason, print_type(e.scopes(), expected),
             print_type(e.scopes(), inferred));
}

}  // namespace delam
