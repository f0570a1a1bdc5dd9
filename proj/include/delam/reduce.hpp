#pragma once

// Untyped single-step weak-head reduction and fuel-bounded multi-step
// normalization, including the thirteen recursor dispatch rules.
//
// Reduction is intentionally untyped: the decoding and beta rules fire on
// the shape of the code alone, and preservation guarantees the level and
// type indices agree for well-typed subjects. The recursor for terms
// reduces its type index before its scrutinee.

#include <optional>

#include "delam/classify.hpp"
#include "delam/subst.hpp"

namespace delam {

struct Fuel {
  long long remaining = 1000000;
};

struct FuelExhausted : KernelError {
  explicit FuelExhausted(const std::string& what) : KernelError(what) {}
};

inline std::optional<Type> step_type(const Type& t);
inline std::optional<Term> step_term(const Term& t);

// Beta for the recursor over code of types; the scrutinee's box body must be
// a dispatchable type-code head.
inline Term dispatch_elim_typ(const TmElimTyp& e, const Type& code) {
  const Level& l1 = e.typ_level;
  const Level& l2 = e.trm_level;
  const LocalCtx& d = e.index_ctx;
  auto rec_ty = [&](Level l, LocalCtx ctx, Type body) {
    return tm::elim_typ(l1, l2, e.motives, e.branches, std::move(l), std::move(ctx),
                        tm::box_ty(std::move(body)));
  };
  auto rec_tm = [&](Level l, LocalCtx ctx, Type index, Term body) {
    return tm::elim_trm(l1, l2, e.motives, e.branches, std::move(l), std::move(ctx),
                        std::move(index), tm::box_tm(std::move(body)));
  };
  return std::visit(
      overloaded{
          [&](const TyNat&) { return inst_telescope(e.branches.at(BranchKind::Nat), {}, {GlobalEntry{d}}, {}); },
          [&](const TyPi& x) {
            Term s_s = rec_ty(x.dom_level, d, x.dom);
            Term s_t = rec_ty(x.cod_level, d.extended(x.binder, x.dom, x.dom_level), x.cod);
            return inst_telescope(e.branches.at(BranchKind::Pi), {x.dom_level, x.cod_level},
                                  {GlobalEntry{d}, GlobalEntry{x.dom}, GlobalEntry{x.cod}}, {s_s, s_t});
          },
          [&](const TyTy& x) {
            return inst_telescope(e.branches.at(BranchKind::Ty), {x.level}, {GlobalEntry{d}}, {});
          },
          [&](const TyEl& x) {
            Term s_t = rec_tm(Level::succ(x.level), d, ty::universe(x.level), x.code);
            return inst_telescope(e.branches.at(BranchKind::El), {x.level},
                                  {GlobalEntry{d}, GlobalEntry{x.code}}, {s_t});
          },
          [&](const auto&) -> Term {
            throw KernelError("dispatch_elim_typ: scrutinee code has no matching branch");
          }},
      code.node().v);
}

// Beta for the recursor over code of terms. The whnf'd type index supplies
// the codomain in the lambda case; everything else comes from the code.
inline Term dispatch_elim_trm(const TmElimTrm& e, const Term& code) {
  const Level& l1 = e.typ_level;
  const Level& l2 = e.trm_level;
  const LocalCtx& d = e.index_ctx;
  auto rec_ty = [&](Level l, LocalCtx ctx, Type body) {
    return tm::elim_typ(l1, l2, e.motives, e.branches, std::move(l), std::move(ctx),
                        tm::box_ty(std::move(body)));
  };
  auto rec_tm = [&](Level l, LocalCtx ctx, Type index, Term body) {
    return tm::elim_trm(l1, l2, e.motives, e.branches, std::move(l), std::move(ctx),
                        std::move(index), tm::box_tm(std::move(body)));
  };
  return std::visit(
      overloaded{
          [&](const TmVar& x) {
            return inst_telescope(e.branches.at(BranchKind::Var), {e.index_level},
                                  {GlobalEntry{d}, GlobalEntry{e.index_type}, GlobalEntry{Term(code)}},
                                  {});
          },
          [&](const TmNat&) {
            return inst_telescope(e.branches.at(BranchKind::NatCode), {}, {GlobalEntry{d}}, {});
          },
          [&](const TmPi& x) {
            Term s_s = rec_tm(Level::succ(x.dom_level), d, ty::universe(x.dom_level), x.dom);
            Term s_t = rec_tm(Level::succ(x.cod_level),
                              d.extended(x.binder, ty::el(x.dom_level, x.dom), x.dom_level),
                              ty::universe(x.cod_level), x.cod);
            return inst_telescope(e.branches.at(BranchKind::PiCode), {x.dom_level, x.cod_level},
                                  {GlobalEntry{d}, GlobalEntry{x.dom}, GlobalEntry{x.cod}}, {s_s, s_t});
          },
          [&](const TmTy& x) {
            return inst_telescope(e.branches.at(BranchKind::TyCode), {x.level}, {GlobalEntry{d}}, {});
          },
          [&](const TmZero&) {
            return inst_telescope(e.branches.at(BranchKind::Zero), {}, {GlobalEntry{d}}, {});
          },
          [&](const TmSucc& x) {
            Term s_t = rec_tm(Level::zero(), d, ty::nat(), x.arg);
            return inst_telescope(e.branches.at(BranchKind::Succ), {},
                                  {GlobalEntry{d}, GlobalEntry{x.arg}}, {s_t});
          },
          [&](const TmElimNat& x) {
            LocalCtx d_x = d.extended(x.motive_binder, ty::nat(), Level::zero());
            LocalCtx d_xy = d_x.extended(x.step_rec_binder, x.motive, x.level);
            Term s_m = rec_ty(x.level, d_x, x.motive);
            Term s_s = rec_tm(x.level, d, linst(x.motive, {tm::zero()}), x.base);
            Type motive_succ = linst(x.motive, {tm::succ(tm::var(1, x.step_binder))}, 2);
            Term s_s2 = rec_tm(x.level, d_xy, motive_succ, x.step);
            Term s_t = rec_tm(Level::zero(), d, ty::nat(), x.scrut);
            return inst_telescope(
                e.branches.at(BranchKind::ElimNat), {x.level},
                {GlobalEntry{d}, GlobalEntry{x.motive}, GlobalEntry{x.base}, GlobalEntry{x.step},
                 GlobalEntry{x.scrut}},
                {s_m, s_s, s_s2, s_t});
          },
          [&](const TmLam& x) {
            const TyPi* pi = e.index_type.as<TyPi>();
            if (!pi)
              throw KernelError("dispatch_elim_trm: lambda code with a non-Pi type index");
            Term s_s = rec_ty(x.dom_level, d, x.dom);
            Term s_t = rec_tm(x.cod_level, d.extended(x.binder, x.dom, x.dom_level), pi->cod, x.body);
            return inst_telescope(e.branches.at(BranchKind::Lam), {x.dom_level, x.cod_level},
                                  {GlobalEntry{d}, GlobalEntry{x.dom}, GlobalEntry{pi->cod},
                                   GlobalEntry{x.body}},
                                  {s_s, s_t});
          },
          [&](const TmApp& x) {
            Term s_s = rec_ty(x.dom_level, d, x.dom);
            Term s_t2 = rec_ty(x.cod_level, d.extended(x.binder, x.dom, x.dom_level), x.cod);
            Term s_t = rec_tm(Level::lub(x.dom_level, x.cod_level), d,
                              ty::pi(x.dom_level, x.cod_level, x.binder, x.dom, x.cod), x.fn);
            Term s_a = rec_tm(x.dom_level, d, x.dom, x.arg);
            return inst_telescope(e.branches.at(BranchKind::App), {x.dom_level, x.cod_level},
                                  {GlobalEntry{d}, GlobalEntry{x.dom}, GlobalEntry{x.cod},
                                   GlobalEntry{x.fn}, GlobalEntry{x.arg}},
                                  {s_s, s_t2, s_t, s_a});
          },
          [&](const auto&) -> Term {
            throw KernelError("dispatch_elim_trm: scrutinee code has no matching branch");
          }},
      code.node().v);
}

inline std::optional<Type> step_type(const Type& t) {
  const TyEl* el = t.as<TyEl>();
  if (!el) return std::nullopt;
  // decoding rules fire on the code's shape; the level index is forced by
  // typing and is not inspected
  if (el->code.is<TmNat>()) return ty::nat();
  if (const auto* u = el->code.as<TmTy>()) return ty::universe(u->level);
  if (const auto* p = el->code.as<TmPi>()) {
    return ty::pi(p->dom_level, p->cod_level, p->binder, ty::el(p->dom_level, p->dom),
                  ty::el(p->cod_level, p->cod));
  }
  if (std::optional<Term> code = step_term(el->code)) return ty::el(el->level, *code);
  return std::nullopt;
}

inline std::optional<Term> step_term(const Term& t) {
  return std::visit(
      overloaded{
          [&](const TmElimNat& x) -> std::optional<Term> {
            if (x.scrut.is<TmZero>()) return x.base;
            if (const auto* s = x.scrut.as<TmSucc>()) {
              Term rec = tm::elim_nat(x.level, x.motive_binder, x.motive, x.base, x.step_binder,
                                      x.step_rec_binder, x.step, s->arg);
              return linst(x.step, {s->arg, rec});
            }
            if (std::optional<Term> s = step_term(x.scrut))
              return tm::elim_nat(x.level, x.motive_binder, x.motive, x.base, x.step_binder,
                                  x.step_rec_binder, x.step, *s);
            return std::nullopt;
          },
          [&](const TmApp& x) -> std::optional<Term> {
            if (const auto* l = x.fn.as<TmLam>()) return linst(l->body, {x.arg});
            if (std::optional<Term> f = step_term(x.fn))
              return tm::app(*f, x.dom_level, x.cod_level, x.binder, x.dom, x.cod, x.arg);
            return std::nullopt;
          },
          [&](const TmUApp& x) -> std::optional<Term> {
            if (const auto* l = x.fn.as<TmULam>()) return uinst(l->body, x.levels);
            if (std::optional<Term> f = step_term(x.fn)) return tm::uapp(*f, x.levels);
            return std::nullopt;
          },
          [&](const TmCtxApp& x) -> std::optional<Term> {
            if (const auto* l = x.fn.as<TmCtxLam>()) return ginst(l->body, {GlobalEntry{x.arg}});
            if (std::optional<Term> f = step_term(x.fn)) return tm::ctx_app(*f, x.arg);
            return std::nullopt;
          },
          [&](const TmTyApp& x) -> std::optional<Term> {
            if (const auto* l = x.fn.as<TmTyLam>()) return ginst(l->body, {GlobalEntry{x.arg}});
            if (std::optional<Term> f = step_term(x.fn)) return tm::ty_app(*f, x.arg);
            return std::nullopt;
          },
          [&](const TmLetBoxTy& x) -> std::optional<Term> {
            if (const auto* b = x.scrut.as<TmBoxTy>()) return ginst(x.body, {GlobalEntry{b->body}});
            if (std::optional<Term> s = step_term(x.scrut))
              return tm::letbox_ty(x.res_level, x.code_level, x.ctx, x.motive_binder, x.motive,
                                   x.binder, x.body, *s);
            return std::nullopt;
          },
          [&](const TmLetBoxTm& x) -> std::optional<Term> {
            if (const auto* b = x.scrut.as<TmBoxTm>()) return ginst(x.body, {GlobalEntry{b->body}});
            if (std::optional<Term> s = step_term(x.scrut))
              return tm::letbox_tm(x.res_level, x.code_level, x.ctx, x.type, x.motive_binder,
                                   x.motive, x.binder, x.body, *s);
            return std::nullopt;
          },
          [&](const TmElimTyp& x) -> std::optional<Term> {
            if (std::optional<Term> s = step_term(x.scrut))
              return tm::elim_typ(x.typ_level, x.trm_level, x.motives, x.branches, x.index_level,
                                  x.index_ctx, *s);
            if (const auto* b = x.scrut.as<TmBoxTy>()) {
              if (b->body.is<TyGlobal>()) return std::nullopt;  // blocked on a global
              return dispatch_elim_typ(x, b->body);
            }
            return std::nullopt;
          },
          [&](const TmElimTrm& x) -> std::optional<Term> {
            if (std::optional<Type> ti = step_type(x.index_type))
              return tm::elim_trm(x.typ_level, x.trm_level, x.motives, x.branches, x.index_level,
                                  x.index_ctx, *ti, x.scrut);
            if (std::optional<Term> s = step_term(x.scrut))
              return tm::elim_trm(x.typ_level, x.trm_level, x.motives, x.branches, x.index_level,
                                  x.index_ctx, x.index_type, *s);
            if (const auto* b = x.scrut.as<TmBoxTm>()) {
              if (b->body.is<TmGlobal>()) return std::nullopt;  // blocked on a global
              return dispatch_elim_trm(x, b->body);
            }
            return std::nullopt;
          },
          [&](const auto&) -> std::optional<Term> { return std::nullopt; }},
      t.node().v);
}

inline Type whnf_type(Type t, Fuel fuel = {}) {
  while (std::optional<Type> s = step_type(t)) {
    if (--fuel.remaining < 0) throw FuelExhausted("whnf_type: fuel exhausted");
    t = *s;
  }
  return t;
}

inline Term whnf_term(Term t, Fuel fuel = {}) {
  while (std::optional<Term> s = step_term(t)) {
    if (--fuel.remaining < 0) throw FuelExhausted("whnf_term: fuel exhausted");
    t = *s;
  }
  return t;
}

}  // namespace delam
