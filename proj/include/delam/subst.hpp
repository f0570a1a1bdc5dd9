#pragma once

// The three substitution calculi: universe substitutions (phi), local
// substitutions (delta) and global substitutions (sigma), together with
// shifts, weakenings, identities, composition and the open instantiation
// helpers used by the beta rules.
//
// Each sort has one traversal engine that tracks how many binders of each
// sort have been crossed (ud: universe levels, gd: globals, ld: locals).
// Shifting, applying a substitution and instantiating a top telescope are
// leaf policies plugged into the engine, so every operation of one sort
// agrees on binder arities by construction.
//
// Descent discipline follows the application tables:
//   - universe and global operations enter box bodies and the local
//     contexts carried by contextual types, letbox and the recursors;
//   - local operations stop there, since those components carry their own
//     local context.

#include <functional>

#include "delam/syntax.hpp"

namespace delam {

// ---------------------------------------------------------------------------
// Universe-sort engine

template <class F>
Type umap(const Type& t, const F& f, int ud);
template <class F>
Term umap(const Term& t, const F& f, int ud);

template <class F>
LocalCtx umap(const LocalCtx& ctx, const F& f, int ud) {
  LocalCtx r;
  r.base = ctx.base;
  r.entries.reserve(ctx.entries.size());
  for (const auto& e : ctx.entries)
    r.entries.push_back({e.name, umap(e.type, f, ud), f.level(e.level, ud)});
  return r;
}

template <class F>
LocalSubst umap(const LocalSubst& d, const F& f, int ud) {
  LocalSubst r = d;
  r.entries.clear();
  r.entries.reserve(d.entries.size());
  for (const Term& e : d.entries) r.entries.push_back(umap(e, f, ud));
  return r;
}

template <class F>
Motives umap(const Motives& m, const F& f, int ud) {
  return Motives{umap(m.typ, f, ud + 1), umap(m.trm, f, ud + 1)};
}

template <class F>
Branches umap(const Branches& b, const F& f, int ud) {
  Branches r;
  for (BranchKind k : kAllBranchKinds)
    r.at(k) = umap(b.at(k), f, ud + branch_arity(k).levels);
  return r;
}

template <class F>
GlobalSubst umap(const GlobalSubst& s, const F& f, int ud) {
  GlobalSubst r;
  r.entries.reserve(s.entries.size());
  for (const GlobalEntry& e : s.entries)
    r.entries.push_back(std::visit(
        overloaded{[&](const LocalCtx& g) -> GlobalEntry { return umap(g, f, ud); },
                   [&](const Type& t) -> GlobalEntry { return umap(t, f, ud); },
                   [&](const Term& t) -> GlobalEntry { return umap(t, f, ud); }},
        e));
  return r;
}

template <class F>
GlobalCtx umap(const GlobalCtx& psi, const F& f, int ud) {
  GlobalCtx r;
  r.binds.reserve(psi.binds.size());
  for (const GlobalBind& b : psi.binds)
    r.binds.push_back(std::visit(
        overloaded{[&](const CtxBind& x) -> GlobalBind { return x; },
                   [&](const TypBind& x) -> GlobalBind {
                     return TypBind{x.name, umap(x.ctx, f, ud), x.layer, f.level(x.level, ud)};
                   },
                   [&](const TrmBind& x) -> GlobalBind {
                     return TrmBind{x.name, umap(x.ctx, f, ud), x.layer, umap(x.type, f, ud),
                                    f.level(x.level, ud)};
                   }},
        b));
  return r;
}

template <class F>
Type umap(const Type& t, const F& f, int ud) {
  return std::visit(
      overloaded{
          [&](const TyNat&) { return t; },
          [&](const TyPi& x) {
            return ty::pi(f.level(x.dom_level, ud), f.level(x.cod_level, ud), x.binder,
                          umap(x.dom, f, ud), umap(x.cod, f, ud));
          },
          [&](const TyTy& x) { return ty::universe(f.level(x.level, ud)); },
          [&](const TyUPi& x) {
            int n = static_cast<int>(x.var_count);
            return ty::upi(x.var_count, x.binders, f.level(x.level, ud + n), umap(x.body, f, ud + n));
          },
          [&](const TyEl& x) { return ty::el(f.level(x.level, ud), umap(x.code, f, ud)); },
          [&](const TyGlobal& x) { return ty::global(x.index, umap(x.subst, f, ud), x.name); },
          [&](const TyCtxPi& x) {
            return ty::ctx_pi(x.binder, f.level(x.level, ud), umap(x.body, f, ud));
          },
          [&](const TyTyPi& x) {
            return ty::ty_pi(x.binder, umap(x.ctx, f, ud), f.level(x.bind_level, ud),
                             f.level(x.res_level, ud), umap(x.body, f, ud));
          },
          [&](const TyCodeTy& x) { return ty::code_ty(umap(x.ctx, f, ud), f.level(x.level, ud)); },
          [&](const TyCodeTm& x) {
            return ty::code_tm(umap(x.ctx, f, ud), umap(x.type, f, ud), f.level(x.level, ud));
          }},
      t.node().v);
}

template <class F>
Term umap(const Term& t, const F& f, int ud) {
  return std::visit(
      overloaded{
          [&](const TmVar&) { return t; },
          [&](const TmGlobal& x) { return tm::global(x.index, umap(x.subst, f, ud), x.name); },
          [&](const TmNat&) { return t; },
          [&](const TmPi& x) {
            return tm::pi(f.level(x.dom_level, ud), f.level(x.cod_level, ud), x.binder,
                          umap(x.dom, f, ud), umap(x.cod, f, ud));
          },
          [&](const TmTy& x) { return tm::universe(f.level(x.level, ud)); },
          [&](const TmZero&) { return t; },
          [&](const TmSucc& x) { return tm::succ(umap(x.arg, f, ud)); },
          [&](const TmElimNat& x) {
            return tm::elim_nat(f.level(x.level, ud), x.motive_binder, umap(x.motive, f, ud),
                                umap(x.base, f, ud), x.step_binder, x.step_rec_binder,
                                umap(x.step, f, ud), umap(x.scrut, f, ud));
          },
          [&](const TmLam& x) {
            return tm::lam(f.level(x.dom_level, ud), f.level(x.cod_level, ud), x.binder,
                           umap(x.dom, f, ud), umap(x.body, f, ud));
          },
          [&](const TmApp& x) {
            return tm::app(umap(x.fn, f, ud), f.level(x.dom_level, ud), f.level(x.cod_level, ud),
                           x.binder, umap(x.dom, f, ud), umap(x.cod, f, ud), umap(x.arg, f, ud));
          },
          [&](const TmULam& x) {
            int n = static_cast<int>(x.var_count);
            return tm::ulam(f.level(x.level, ud + n), x.var_count, x.binders, umap(x.body, f, ud + n));
          },
          [&](const TmUApp& x) {
            std::vector<Level> ls;
            ls.reserve(x.levels.size());
            for (const Level& l : x.levels) ls.push_back(f.level(l, ud));
            return tm::uapp(umap(x.fn, f, ud), std::move(ls));
          },
          [&](const TmCtxLam& x) {
            return tm::ctx_lam(f.level(x.level, ud), x.binder, umap(x.body, f, ud));
          },
          [&](const TmCtxApp& x) { return tm::ctx_app(umap(x.fn, f, ud), umap(x.arg, f, ud)); },
          [&](const TmTyLam& x) {
            return tm::ty_lam(f.level(x.bind_level, ud), f.level(x.res_level, ud), x.binder,
                              umap(x.ctx, f, ud), umap(x.body, f, ud));
          },
          [&](const TmTyApp& x) { return tm::ty_app(umap(x.fn, f, ud), umap(x.arg, f, ud)); },
          [&](const TmBoxTy& x) { return tm::box_ty(umap(x.body, f, ud)); },
          [&](const TmBoxTm& x) { return tm::box_tm(umap(x.body, f, ud)); },
          [&](const TmLetBoxTy& x) {
            return tm::letbox_ty(f.level(x.res_level, ud), f.level(x.code_level, ud),
                                 umap(x.ctx, f, ud), x.motive_binder, umap(x.motive, f, ud), x.binder,
                                 umap(x.body, f, ud), umap(x.scrut, f, ud));
          },
          [&](const TmLetBoxTm& x) {
            return tm::letbox_tm(f.level(x.res_level, ud), f.level(x.code_level, ud),
                                 umap(x.ctx, f, ud), umap(x.type, f, ud), x.motive_binder,
                                 umap(x.motive, f, ud), x.binder, umap(x.body, f, ud),
                                 umap(x.scrut, f, ud));
          },
          [&](const TmElimTyp& x) {
            return tm::elim_typ(f.level(x.typ_level, ud), f.level(x.trm_level, ud),
                                umap(x.motives, f, ud), umap(x.branches, f, ud),
                                f.level(x.index_level, ud), umap(x.index_ctx, f, ud),
                                umap(x.scrut, f, ud));
          },
          [&](const TmElimTrm& x) {
            return tm::elim_trm(f.level(x.typ_level, ud), f.level(x.trm_level, ud),
                                umap(x.motives, f, ud), umap(x.branches, f, ud),
                                f.level(x.index_level, ud), umap(x.index_ctx, f, ud),
                                umap(x.index_type, f, ud), umap(x.scrut, f, ud));
          }},
      t.node().v);
}

namespace detail {

struct UShiftPolicy {
  int amount, cutoff;
  Level level(const Level& l, int ud) const { return ushift_level(l, amount, cutoff + ud); }
};

struct UApplyPolicy {
  const UnivSubst& phi;
  Level apply(const Level& l, int ud) const {
    switch (l.kind()) {
      case Level::Kind::Zero:
      case Level::Kind::Omega: return l;
      case Level::Kind::Var: {
        int j = l.var_index();
        if (j < ud) return l;
        std::size_t i = static_cast<std::size_t>(j - ud);
        if (i >= phi.entries.size()) throw KernelError("usubst: variable out of range of substitution");
        return ushift_level(phi.entries[i], ud);
      }
      case Level::Kind::Succ: return Level::succ(apply(l.arg(), ud));
      case Level::Kind::Lub: return Level::lub(apply(l.lhs(), ud), apply(l.rhs(), ud));
    }
    throw KernelError("usubst: unreachable");
  }
  Level level(const Level& l, int ud) const { return apply(l, ud); }
};

struct UInstPolicy {
  const std::vector<Level>& payload;  // in source order, the last is innermost
  int weaken;
  Level apply(const Level& l, int ud) const {
    switch (l.kind()) {
      case Level::Kind::Zero:
      case Level::Kind::Omega: return l;
      case Level::Kind::Var: {
        int j = l.var_index();
        if (j < ud) return l;
        int n = static_cast<int>(payload.size());
        int i = j - ud;
        if (i < n) return ushift_level(payload[static_cast<std::size_t>(n - 1 - i)], ud);
        return Level::var(j - n + weaken);
      }
      case Level::Kind::Succ: return Level::succ(apply(l.arg(), ud));
      case Level::Kind::Lub: return Level::lub(apply(l.lhs(), ud), apply(l.rhs(), ud));
    }
    throw KernelError("uinst: unreachable");
  }
  Level level(const Level& l, int ud) const { return apply(l, ud); }
};

}  // namespace detail

template <class X>
X ushift(const X& x, int amount, int cutoff = 0) {
  if (amount == 0) return x;
  return umap(x, detail::UShiftPolicy{amount, cutoff}, 0);
}

template <class X>
X usubst_apply_syntax(const X& x, const UnivSubst& phi) {
  return umap(x, detail::UApplyPolicy{phi}, 0);
}

// Substitutes the innermost payload.size() level variables; remaining free
// variables drop by payload.size() and rise by weaken.
template <class X>
X uinst(const X& x, const std::vector<Level>& payload, int weaken = 0) {
  return umap(x, detail::UInstPolicy{payload, weaken}, 0);
}

inline Level uinst_level(const Level& l, const std::vector<Level>& payload, int weaken = 0) {
  return detail::UInstPolicy{payload, weaken}.apply(l, 0);
}

// ---------------------------------------------------------------------------
// Global-sort engine

template <class F>
Type gmap(const Type& t, const F& f, int ud, int gd);
template <class F>
Term gmap(const Term& t, const F& f, int ud, int gd);

template <class F>
LocalCtx gmap(const LocalCtx& ctx, const F& f, int ud, int gd) {
  LocalCtx r;
  if (ctx.base) r = f.ctx_base(*ctx.base, ud, gd);
  for (const auto& e : ctx.entries) r.entries.push_back({e.name, gmap(e.type, f, ud, gd), e.level});
  return r;
}

template <class F>
LocalSubst gmap(const LocalSubst& d, const F& f, int ud, int gd) {
  LocalSubst stripped = d;
  stripped.entries.clear();
  LocalSubst r = f.subst_base(stripped, ud, gd);
  for (const Term& e : d.entries) r.entries.push_back(gmap(e, f, ud, gd));
  return r;
}

template <class F>
Motives gmap(const Motives& m, const F& f, int ud, int gd) {
  return Motives{gmap(m.typ, f, ud + 1, gd + 1), gmap(m.trm, f, ud + 1, gd + 2)};
}

template <class F>
Branches gmap(const Branches& b, const F& f, int ud, int gd) {
  Branches r;
  for (BranchKind k : kAllBranchKinds) {
    BranchArity a = branch_arity(k);
    r.at(k) = gmap(b.at(k), f, ud + a.levels, gd + a.globals);
  }
  return r;
}

template <class F>
GlobalSubst gmap(const GlobalSubst& s, const F& f, int ud, int gd) {
  GlobalSubst r;
  r.entries.reserve(s.entries.size());
  for (const GlobalEntry& e : s.entries)
    r.entries.push_back(std::visit(
        overloaded{[&](const LocalCtx& g) -> GlobalEntry { return gmap(g, f, ud, gd); },
                   [&](const Type& t) -> GlobalEntry { return gmap(t, f, ud, gd); },
                   [&](const Term& t) -> GlobalEntry { return gmap(t, f, ud, gd); }},
        e));
  return r;
}

template <class F>
Type gmap(const Type& t, const F& f, int ud, int gd) {
  return std::visit(
      overloaded{
          [&](const TyNat&) { return t; },
          [&](const TyPi& x) {
            return ty::pi(x.dom_level, x.cod_level, x.binder, gmap(x.dom, f, ud, gd),
                          gmap(x.cod, f, ud, gd));
          },
          [&](const TyTy&) { return t; },
          [&](const TyUPi& x) {
            int n = static_cast<int>(x.var_count);
            return ty::upi(x.var_count, x.binders, x.level, gmap(x.body, f, ud + n, gd));
          },
          [&](const TyEl& x) { return ty::el(x.level, gmap(x.code, f, ud, gd)); },
          [&](const TyGlobal& x) { return f.type_var(x, gmap(x.subst, f, ud, gd), ud, gd); },
          [&](const TyCtxPi& x) { return ty::ctx_pi(x.binder, x.level, gmap(x.body, f, ud, gd + 1)); },
          [&](const TyTyPi& x) {
            return ty::ty_pi(x.binder, gmap(x.ctx, f, ud, gd), x.bind_level, x.res_level,
                             gmap(x.body, f, ud, gd + 1));
          },
          [&](const TyCodeTy& x) { return ty::code_ty(gmap(x.ctx, f, ud, gd), x.level); },
          [&](const TyCodeTm& x) {
            return ty::code_tm(gmap(x.ctx, f, ud, gd), gmap(x.type, f, ud, gd), x.level);
          }},
      t.node().v);
}

template <class F>
Term gmap(const Term& t, const F& f, int ud, int gd) {
  return std::visit(
      overloaded{
          [&](const TmVar&) { return t; },
          [&](const TmGlobal& x) { return f.term_var(x, gmap(x.subst, f, ud, gd), ud, gd); },
          [&](const TmNat&) { return t; },
          [&](const TmPi& x) {
            return tm::pi(x.dom_level, x.cod_level, x.binder, gmap(x.dom, f, ud, gd),
                          gmap(x.cod, f, ud, gd));
          },
          [&](const TmTy&) { return t; },
          [&](const TmZero&) { return t; },
          [&](const TmSucc& x) { return tm::succ(gmap(x.arg, f, ud, gd)); },
          [&](const TmElimNat& x) {
            return tm::elim_nat(x.level, x.motive_binder, gmap(x.motive, f, ud, gd),
                                gmap(x.base, f, ud, gd), x.step_binder, x.step_rec_binder,
                                gmap(x.step, f, ud, gd), gmap(x.scrut, f, ud, gd));
          },
          [&](const TmLam& x) {
            return tm::lam(x.dom_level, x.cod_level, x.binder, gmap(x.dom, f, ud, gd),
                           gmap(x.body, f, ud, gd));
          },
          [&](const TmApp& x) {
            return tm::app(gmap(x.fn, f, ud, gd), x.dom_level, x.cod_level, x.binder,
                           gmap(x.dom, f, ud, gd), gmap(x.cod, f, ud, gd), gmap(x.arg, f, ud, gd));
          },
          [&](const TmULam& x) {
            int n = static_cast<int>(x.var_count);
            return tm::ulam(x.level, x.var_count, x.binders, gmap(x.body, f, ud + n, gd));
          },
          [&](const TmUApp& x) { return tm::uapp(gmap(x.fn, f, ud, gd), x.levels); },
          [&](const TmCtxLam& x) { return tm::ctx_lam(x.level, x.binder, gmap(x.body, f, ud, gd + 1)); },
          [&](const TmCtxApp& x) { return tm::ctx_app(gmap(x.fn, f, ud, gd), gmap(x.arg, f, ud, gd)); },
          [&](const TmTyLam& x) {
            return tm::ty_lam(x.bind_level, x.res_level, x.binder, gmap(x.ctx, f, ud, gd),
                              gmap(x.body, f, ud, gd + 1));
          },
          [&](const TmTyApp& x) { return tm::ty_app(gmap(x.fn, f, ud, gd), gmap(x.arg, f, ud, gd)); },
          [&](const TmBoxTy& x) { return tm::box_ty(gmap(x.body, f, ud, gd)); },
          [&](const TmBoxTm& x) { return tm::box_tm(gmap(x.body, f, ud, gd)); },
          [&](const TmLetBoxTy& x) {
            return tm::letbox_ty(x.res_level, x.code_level, gmap(x.ctx, f, ud, gd), x.motive_binder,
                                 gmap(x.motive, f, ud, gd), x.binder, gmap(x.body, f, ud, gd + 1),
                                 gmap(x.scrut, f, ud, gd));
          },
          [&](const TmLetBoxTm& x) {
            return tm::letbox_tm(x.res_level, x.code_level, gmap(x.ctx, f, ud, gd),
                                 gmap(x.type, f, ud, gd), x.motive_binder, gmap(x.motive, f, ud, gd),
                                 x.binder, gmap(x.body, f, ud, gd + 1), gmap(x.scrut, f, ud, gd));
          },
          [&](const TmElimTyp& x) {
            return tm::elim_typ(x.typ_level, x.trm_level, gmap(x.motives, f, ud, gd),
                                gmap(x.branches, f, ud, gd), x.index_level, gmap(x.index_ctx, f, ud, gd),
                                gmap(x.scrut, f, ud, gd));
          },
          [&](const TmElimTrm& x) {
            return tm::elim_trm(x.typ_level, x.trm_level, gmap(x.motives, f, ud, gd),
                                gmap(x.branches, f, ud, gd), x.index_level, gmap(x.index_ctx, f, ud, gd),
                                gmap(x.index_type, f, ud, gd), gmap(x.scrut, f, ud, gd));
          }},
      t.node().v);
}

// forward declarations used by the global policies
inline LocalSubst lwk(const LocalCtx& ctx, unsigned k);
template <class X>
X lshift(const X& x, int amount, int cutoff = 0);
inline Type lsubst_apply_type(const Type& t, const LocalSubst& d);
inline Term lsubst_apply_term(const Term& t, const LocalSubst& d);

namespace detail {

struct GShiftPolicy {
  int amount, cutoff;
  int adj(int idx, int gd) const { return idx >= cutoff + gd ? idx + amount : idx; }
  Type type_var(const TyGlobal& x, LocalSubst mapped, int, int gd) const {
    return ty::global(adj(x.index, gd), std::move(mapped), x.name);
  }
  Term term_var(const TmGlobal& x, LocalSubst mapped, int, int gd) const {
    return tm::global(adj(x.index, gd), std::move(mapped), x.name);
  }
  LocalCtx ctx_base(int g, int, int gd) const { return LocalCtx::var(adj(g, gd)); }
  LocalSubst subst_base(const LocalSubst& b, int, int gd) const {
    LocalSubst r = b;
    if (r.base_var) r.base_var = adj(*r.base_var, gd);
    return r;
  }
};

// Substitution of the innermost `payload.size()` global binders. Entries are
// given in binding order (the last is the innermost binder). Free globals
// above the telescope drop by its size and rise by `weaken`. The policy for
// applying a total sigma is the special case weaken = 0 with lookups that
// must not run past the entries.
struct GInstPolicy {
  const std::vector<GlobalEntry>& payload;
  int weaken;
  bool total;  // sigma application: running off the entries is an error

  const GlobalEntry* lookup(int idx, int gd) const {
    if (idx < gd) return nullptr;  // bound inside the subject
    int i = idx - gd;
    int n = static_cast<int>(payload.size());
    if (i < n) return &payload[static_cast<std::size_t>(n - 1 - i)];
    if (total) throw KernelError("gsubst: variable out of range of substitution");
    return nullptr;
  }
  int rename(int idx, int gd) const {
    if (idx < gd) return idx;
    return idx - static_cast<int>(payload.size()) + weaken;
  }

  Type type_var(const TyGlobal& x, LocalSubst mapped, int ud, int gd) const {
    if (const GlobalEntry* e = lookup(x.index, gd)) {
      const Type* t = std::get_if<Type>(e);
      if (!t) throw KernelError("gsubst: type variable does not resolve to a type entry");
      return lsubst_apply_type(gshift(ushift(*t, ud), gd), mapped);
    }
    return ty::global(rename(x.index, gd), std::move(mapped), x.name);
  }
  Term term_var(const TmGlobal& x, LocalSubst mapped, int ud, int gd) const {
    if (const GlobalEntry* e = lookup(x.index, gd)) {
      const Term* t = std::get_if<Term>(e);
      if (!t) throw KernelError("gsubst: term variable does not resolve to a term entry");
      return lsubst_apply_term(gshift(ushift(*t, ud), gd), mapped);
    }
    return tm::global(rename(x.index, gd), std::move(mapped), x.name);
  }
  LocalCtx ctx_base(int g, int ud, int gd) const {
    if (const GlobalEntry* e = lookup(g, gd)) {
      const LocalCtx* c = std::get_if<LocalCtx>(e);
      if (!c) throw KernelError("gsubst: context variable does not resolve to a context entry");
      return gshift(ushift(*c, ud), gd);
    }
    return LocalCtx::var(rename(g, gd));
  }
  LocalSubst subst_base(const LocalSubst& b, int ud, int gd) const {
    if (!b.base_var) return b;
    const GlobalEntry* e = lookup(*b.base_var, gd);
    if (!e) {
      LocalSubst r = b;
      r.base_var = rename(*b.base_var, gd);
      return r;
    }
    const LocalCtx* c = std::get_if<LocalCtx>(e);
    if (!c) throw KernelError("gsubst: context variable does not resolve to a context entry");
    LocalCtx target = gshift(ushift(*c, ud), gd);
    if (b.base == LocalSubst::Base::Weaken) return lwk(target, b.base_count);
    // empty base over g: the spliced context contributes its own entries
    return LocalSubst::empty(target.base, static_cast<unsigned>(target.size()) + b.base_count);
  }

 private:
  template <class X>
  static X gshift(const X& x, int gd) {
    if (gd == 0) return x;
    return gmap(x, GShiftPolicy{gd, 0}, 0, 0);
  }
  template <class X>
  static X ushift(const X& x, int ud) {
    return delam::ushift(x, ud);
  }
};

}  // namespace detail

template <class X>
X gshift(const X& x, int amount, int cutoff = 0) {
  if (amount == 0) return x;
  return gmap(x, detail::GShiftPolicy{amount, cutoff}, 0, 0);
}

template <class X>
X gsubst_apply(const X& x, const GlobalSubst& s) {
  return gmap(x, detail::GInstPolicy{s.entries, 0, true}, 0, 0);
}

template <class X>
X ginst(const X& x, const std::vector<GlobalEntry>& payload, int weaken = 0) {
  return gmap(x, detail::GInstPolicy{payload, weaken, false}, 0, 0);
}

inline GlobalSubst gsubst_compose(const GlobalSubst& a, const GlobalSubst& b) {
  return gsubst_apply(a, b);
}

// Generalized global weakening; gwk(psi, 0) is the identity substitution.
inline GlobalSubst gwk(const GlobalCtx& psi, unsigned k) {
  GlobalSubst r;
  std::size_t n = psi.size();
  r.entries.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    int idx = static_cast<int>(n - 1 - p) + static_cast<int>(k);
    int shift = static_cast<int>(n - p) + static_cast<int>(k);
    r.entries.push_back(std::visit(
        overloaded{[&](const CtxBind&) -> GlobalEntry { return LocalCtx::var(idx); },
                   [&](const TypBind& b) -> GlobalEntry {
                     return ty::global(idx, lwk(gshift(b.ctx, shift), 0), b.name);
                   },
                   [&](const TrmBind& b) -> GlobalEntry {
                     return tm::global(idx, lwk(gshift(b.ctx, shift), 0), b.name);
                   }},
        psi.binds[p]));
  }
  return r;
}

inline GlobalSubst gsubst_id(const GlobalCtx& psi) { return gwk(psi, 0); }

// Looks up a global binding with its components weakened into the full
// context.
inline GlobalBind gctx_lookup(const GlobalCtx& psi, int index) {
  const GlobalBind& b = gctx_bind_raw(psi, index);
  int shift = index + 1;
  return std::visit(
      overloaded{[&](const CtxBind& x) -> GlobalBind { return x; },
                 [&](const TypBind& x) -> GlobalBind {
                   return TypBind{x.name, gshift(x.ctx, shift), x.layer, x.level};
                 },
                 [&](const TrmBind& x) -> GlobalBind {
                   return TrmBind{x.name, gshift(x.ctx, shift), x.layer, gshift(x.type, shift), x.level};
                 }},
      b);
}

// ---------------------------------------------------------------------------
// Local-sort engine

template <class F>
Type lmap(const Type& t, const F& f, int ud, int gd, int ld);
template <class F>
Term lmap(const Term& t, const F& f, int ud, int gd, int ld);

template <class F>
LocalSubst lmap(const LocalSubst& d, const F& f, int ud, int gd, int ld) {
  LocalSubst stripped = d;
  stripped.entries.clear();
  LocalSubst r = f.subst_base(stripped, ud, gd, ld);
  for (const Term& e : d.entries) r.entries.push_back(lmap(e, f, ud, gd, ld));
  return r;
}

template <class F>
Motives lmap(const Motives& m, const F& f, int ud, int gd, int ld) {
  return Motives{lmap(m.typ, f, ud + 1, gd + 1, ld + 1), lmap(m.trm, f, ud + 1, gd + 2, ld + 1)};
}

template <class F>
Branches lmap(const Branches& b, const F& f, int ud, int gd, int ld) {
  Branches r;
  for (BranchKind k : kAllBranchKinds) {
    BranchArity a = branch_arity(k);
    r.at(k) = lmap(b.at(k), f, ud + a.levels, gd + a.globals, ld + a.locals);
  }
  return r;
}

template <class F>
Type lmap(const Type& t, const F& f, int ud, int gd, int ld) {
  return std::visit(
      overloaded{
          [&](const TyNat&) { return t; },
          [&](const TyPi& x) {
            return ty::pi(x.dom_level, x.cod_level, x.binder, lmap(x.dom, f, ud, gd, ld),
                          lmap(x.cod, f, ud, gd, ld + 1));
          },
          [&](const TyTy&) { return t; },
          [&](const TyUPi& x) {
            int n = static_cast<int>(x.var_count);
            return ty::upi(x.var_count, x.binders, x.level, lmap(x.body, f, ud + n, gd, ld));
          },
          [&](const TyEl& x) { return ty::el(x.level, lmap(x.code, f, ud, gd, ld)); },
          [&](const TyGlobal& x) { return ty::global(x.index, lmap(x.subst, f, ud, gd, ld), x.name); },
          [&](const TyCtxPi& x) {
            return ty::ctx_pi(x.binder, x.level, lmap(x.body, f, ud, gd + 1, ld));
          },
          [&](const TyTyPi& x) {
            // the bound context is its own local world
            return ty::ty_pi(x.binder, x.ctx, x.bind_level, x.res_level, lmap(x.body, f, ud, gd + 1, ld));
          },
          [&](const TyCodeTy&) { return t; },
          [&](const TyCodeTm&) { return t; }},
      t.node().v);
}

template <class F>
Term lmap(const Term& t, const F& f, int ud, int gd, int ld) {
  return std::visit(
      overloaded{
          [&](const TmVar& x) { return f.var(x, ud, gd, ld); },
          [&](const TmGlobal& x) { return tm::global(x.index, lmap(x.subst, f, ud, gd, ld), x.name); },
          [&](const TmNat&) { return t; },
          [&](const TmPi& x) {
            return tm::pi(x.dom_level, x.cod_level, x.binder, lmap(x.dom, f, ud, gd, ld),
                          lmap(x.cod, f, ud, gd, ld + 1));
          },
          [&](const TmTy&) { return t; },
          [&](const TmZero&) { return t; },
          [&](const TmSucc& x) { return tm::succ(lmap(x.arg, f, ud, gd, ld)); },
          [&](const TmElimNat& x) {
            return tm::elim_nat(x.level, x.motive_binder, lmap(x.motive, f, ud, gd, ld + 1),
                                lmap(x.base, f, ud, gd, ld), x.step_binder, x.step_rec_binder,
                                lmap(x.step, f, ud, gd, ld + 2), lmap(x.scrut, f, ud, gd, ld));
          },
          [&](const TmLam& x) {
            return tm::lam(x.dom_level, x.cod_level, x.binder, lmap(x.dom, f, ud, gd, ld),
                           lmap(x.body, f, ud, gd, ld + 1));
          },
          [&](const TmApp& x) {
            return tm::app(lmap(x.fn, f, ud, gd, ld), x.dom_level, x.cod_level, x.binder,
                           lmap(x.dom, f, ud, gd, ld), lmap(x.cod, f, ud, gd, ld + 1),
                           lmap(x.arg, f, ud, gd, ld));
          },
          [&](const TmULam& x) {
            int n = static_cast<int>(x.var_count);
            return tm::ulam(x.level, x.var_count, x.binders, lmap(x.body, f, ud + n, gd, ld));
          },
          [&](const TmUApp& x) { return tm::uapp(lmap(x.fn, f, ud, gd, ld), x.levels); },
          [&](const TmCtxLam& x) { return tm::ctx_lam(x.level, x.binder, lmap(x.body, f, ud, gd + 1, ld)); },
          [&](const TmCtxApp& x) { return tm::ctx_app(lmap(x.fn, f, ud, gd, ld), x.arg); },
          [&](const TmTyLam& x) {
            return tm::ty_lam(x.bind_level, x.res_level, x.binder, x.ctx, lmap(x.body, f, ud, gd + 1, ld));
          },
          [&](const TmTyApp& x) { return tm::ty_app(lmap(x.fn, f, ud, gd, ld), x.arg); },
          [&](const TmBoxTy&) { return t; },
          [&](const TmBoxTm&) { return t; },
          [&](const TmLetBoxTy& x) {
            return tm::letbox_ty(x.res_level, x.code_level, x.ctx, x.motive_binder,
                                 lmap(x.motive, f, ud, gd, ld + 1), x.binder,
                                 lmap(x.body, f, ud, gd + 1, ld), lmap(x.scrut, f, ud, gd, ld));
          },
          [&](const TmLetBoxTm& x) {
            return tm::letbox_tm(x.res_level, x.code_level, x.ctx, x.type, x.motive_binder,
                                 lmap(x.motive, f, ud, gd, ld + 1), x.binder,
                                 lmap(x.body, f, ud, gd + 1, ld), lmap(x.scrut, f, ud, gd, ld));
          },
          [&](const TmElimTyp& x) {
            return tm::elim_typ(x.typ_level, x.trm_level, lmap(x.motives, f, ud, gd, ld),
                                lmap(x.branches, f, ud, gd, ld), x.index_level, x.index_ctx,
                                lmap(x.scrut, f, ud, gd, ld));
          },
          [&](const TmElimTrm& x) {
            return tm::elim_trm(x.typ_level, x.trm_level, lmap(x.motives, f, ud, gd, ld),
                                lmap(x.branches, f, ud, gd, ld), x.index_level, x.index_ctx,
                                x.index_type, lmap(x.scrut, f, ud, gd, ld));
          }},
      t.node().v);
}

namespace detail {

struct LShiftPolicy {
  int amount, cutoff;
  Term var(const TmVar& x, int, int, int ld) const {
    return x.index >= cutoff + ld ? tm::var(x.index + amount, x.name) : tm::var(x.index, x.name);
  }
  LocalSubst subst_base(const LocalSubst& b, int, int, int ld) const {
    LocalSubst r = b;
    if (static_cast<int>(r.base_count) >= cutoff + ld) r.base_count = static_cast<unsigned>(
        static_cast<int>(r.base_count) + amount);
    return r;
  }
};

// Applies a local substitution. Composition with an inner annotation
// u^{d'} happens through the entries (mapped by the engine) and the base
// rules below: the hat of the lifted substitution grows by one per local
// binder crossed and its check picks up crossed global binders.
struct LApplyPolicy {
  const LocalSubst& d;
  Term var(const TmVar& x, int ud, int gd, int ld) const {
    if (x.index < ld) return tm::var(x.index, x.name);
    Term e = lsubst_lookup(d, x.index - ld);
    return lshift(gshift(ushift(e, ud), gd), ld);
  }
  LocalSubst subst_base(const LocalSubst& b, int ud, int gd, int ld) const {
    (void)ud;
    unsigned hat = d.base_count + static_cast<unsigned>(ld);
    if (b.base == LocalSubst::Base::Weaken) return LocalSubst::weaken(*b.base_var, hat);
    if (b.base_var) return LocalSubst::empty(*b.base_var, hat);
    std::optional<int> check = d.base_var;
    if (check) check = *check + gd;
    return LocalSubst::empty(check, hat);
  }
};

struct LInstPolicy {
  const std::vector<Term>& payload;  // binding order, the last is innermost
  int weaken;
  Term var(const TmVar& x, int ud, int gd, int ld) const {
    if (x.index < ld) return tm::var(x.index, x.name);
    int n = static_cast<int>(payload.size());
    int i = x.index - ld;
    if (i < n) return lshift(gshift(ushift(payload[static_cast<std::size_t>(n - 1 - i)], ud), gd), ld);
    return tm::var(x.index - n + weaken, x.name);
  }
  LocalSubst subst_base(const LocalSubst& b, int, int, int ld) const {
    int n = static_cast<int>(payload.size());
    if (static_cast<int>(b.base_count) < n + ld)
      throw KernelError("linst: substitution base does not cover the instantiated telescope");
    LocalSubst r = b;
    r.base_count = static_cast<unsigned>(static_cast<int>(r.base_count) - n + weaken);
    return r;
  }
};

}  // namespace detail

template <class X>
X lshift(const X& x, int amount, int cutoff) {
  if (amount == 0) return x;
  return lmap(x, detail::LShiftPolicy{amount, cutoff}, 0, 0, 0);
}

inline Type lsubst_apply_type(const Type& t, const LocalSubst& d) {
  return lmap(t, detail::LApplyPolicy{d}, 0, 0, 0);
}
inline Term lsubst_apply_term(const Term& t, const LocalSubst& d) {
  return lmap(t, detail::LApplyPolicy{d}, 0, 0, 0);
}

// d1 then d2, so that X[d1][d2] = X[compose(d1, d2)].
inline LocalSubst lsubst_compose(const LocalSubst& d1, const LocalSubst& d2) {
  return lmap(d1, detail::LApplyPolicy{d2}, 0, 0, 0);
}

// Substitutes the innermost payload.size() local variables.
template <class X>
X linst(const X& x, const std::vector<Term>& payload, int weaken = 0) {
  return lmap(x, detail::LInstPolicy{payload, weaken}, 0, 0, 0);
}

// Generalized local weakening wk^k over a context; lwk(ctx, 0) is the
// identity substitution.
inline LocalSubst lwk(const LocalCtx& ctx, unsigned k) {
  unsigned total = static_cast<unsigned>(ctx.size()) + k;
  LocalSubst r = ctx.ends_with_var() ? LocalSubst::weaken(*ctx.base, total)
                                     : LocalSubst::empty(std::nullopt, total);
  for (std::size_t j = 0; j < ctx.size(); ++j) {
    int idx = static_cast<int>(ctx.size() - 1 - j) + static_cast<int>(k);
    r.entries.push_back(tm::var(idx, ctx.entries[j].name));
  }
  return r;
}

inline LocalSubst lsubst_id(const LocalCtx& ctx) { return lwk(ctx, 0); }

// (d, x/x): weakens the substitution by the new binder and maps it to itself.
inline LocalSubst lsubst_lift1(const LocalSubst& d, const std::string& name = "x") {
  LocalSubst r = lshift(d, 1, 0);
  r.entries.push_back(tm::var(0, name));
  return r;
}

// Looks up a local context entry with its type weakened into the whole
// context.
inline std::pair<Type, Level> lctx_lookup(const LocalCtx& ctx, int index) {
  const LocalCtxEntry& e = lctx_entry(ctx, index);
  return {lshift(e.type, index + 1, 0), e.level};
}

// ---------------------------------------------------------------------------
// Single-substitution helpers in the order of a recursor telescope: levels
// first, then globals, then locals.

inline Term subst_top_term(const Term& body, const Term& t) { return linst(body, {t}); }
inline Type subst_top_term(const Type& body, const Term& t) { return linst(body, {t}); }
inline Term subst_top_type(const Term& body, const Type& t) { return ginst(body, {GlobalEntry{t}}); }
inline Type subst_top_type(const Type& body, const Type& t) { return ginst(body, {GlobalEntry{t}}); }
inline Term subst_top_lctx(const Term& body, const LocalCtx& g) { return ginst(body, {GlobalEntry{g}}); }
inline Type subst_top_lctx(const Type& body, const LocalCtx& g) { return ginst(body, {GlobalEntry{g}}); }
inline Term subst_top_levels(const Term& body, const std::vector<Level>& ls) { return uinst(body, ls); }
inline Type subst_top_levels(const Type& body, const std::vector<Level>& ls) { return uinst(body, ls); }

template <class X>
X inst_telescope(const X& body, const std::vector<Level>& levels,
                 const std::vector<GlobalEntry>& globals, const std::vector<Term>& locals) {
  X r = body;
  if (!levels.empty()) r = uinst(r, levels);
  if (!globals.empty()) r = ginst(r, globals);
  if (!locals.empty()) r = linst(r, locals);
  return r;
}

// Motive instantiation: M_Typ binds (l ; g ; x_T), M_Trm binds (l ; g, U_T ; x_t).
inline Type inst_motive_typ(const Motives& m, const Level& l, const LocalCtx& g, const Term& code) {
  return inst_telescope(m.typ, {l}, {GlobalEntry{g}}, {code});
}
inline Type inst_motive_trm(const Motives& m, const Level& l, const LocalCtx& g, const Type& index_type,
                            const Term& code) {
  return inst_telescope(m.trm, {l}, {GlobalEntry{g}, GlobalEntry{index_type}}, {code});
}

}  // namespace delam
