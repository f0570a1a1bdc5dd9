#pragma once

// Pretty-printer for the surface syntax (see docs/grammar.md). Printing is
// the inverse of parsing up to structural equality: binder names are
// regenerated from annotations and freshened against the enclosing scope.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "delam/syntax.hpp"

namespace delam {

struct PrintScopes {
  std::vector<std::string> levels;   // innermost last
  std::vector<std::string> globals;  // innermost last
  std::vector<std::string> locals;   // innermost last

  static PrintScopes from(const UnivCtx& uc, const GlobalCtx& gc, const LocalCtx& lc) {
    PrintScopes s;
    s.levels = uc.names;
    for (const GlobalBind& b : gc.binds)
      s.globals.push_back(std::visit(overloaded{[](const CtxBind& x) { return x.name; },
                                                [](const TypBind& x) { return x.name; },
                                                [](const TrmBind& x) { return x.name; }},
                                     b));
    for (const auto& e : lc.entries) s.locals.push_back(e.name);
    return s;
  }
};

namespace printer_detail {

inline bool in_scope(const PrintScopes& s, const std::string& n) {
  auto has = [&](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), n) != v.end();
  };
  return has(s.levels) || has(s.globals) || has(s.locals);
}

inline std::string fresh(const PrintScopes& s, std::string base, const char* fallback) {
  if (base.empty()) base = fallback;
  std::string n = base;
  int tick = 0;
  while (in_scope(s, n)) {
    ++tick;
    n = base + "'";
    if (tick > 1) n += std::to_string(tick);
  }
  return n;
}

inline std::string level_name(const PrintScopes& s, int index) {
  if (index >= 0 && static_cast<std::size_t>(index) < s.levels.size())
    return s.levels[s.levels.size() - 1 - static_cast<std::size_t>(index)];
  return "?l" + std::to_string(index);
}
inline std::string global_name(const PrintScopes& s, int index) {
  if (index >= 0 && static_cast<std::size_t>(index) < s.globals.size())
    return s.globals[s.globals.size() - 1 - static_cast<std::size_t>(index)];
  return "?g" + std::to_string(index);
}
inline std::string local_name(const PrintScopes& s, int index) {
  if (index >= 0 && static_cast<std::size_t>(index) < s.locals.size())
    return s.locals[s.locals.size() - 1 - static_cast<std::size_t>(index)];
  return "?x" + std::to_string(index);
}

}  // namespace printer_detail

inline std::string print_level(const PrintScopes& s, const Level& l, bool parens = false) {
  using printer_detail::level_name;
  switch (l.kind()) {
    case Level::Kind::Omega: return "omega";
    case Level::Kind::Zero: return "0";
    case Level::Kind::Var: return level_name(s, l.var_index());
    case Level::Kind::Succ: {
      std::uint64_t n = 0;
      Level cur = l;
      while (cur.kind() == Level::Kind::Succ) {
        ++n;
        cur = cur.arg();
      }
      if (cur.is_zero()) return std::to_string(n);
      std::string r = std::to_string(n) + "+" + print_level(s, cur, true);
      return parens ? "(" + r + ")" : r;
    }
    case Level::Kind::Lub: {
      std::string r = print_level(s, l.lhs(), true) + " \\/ " + print_level(s, l.rhs(), true);
      return parens ? "(" + r + ")" : r;
    }
  }
  return "?";
}

inline std::string print_type(const PrintScopes& s, const Type& t, bool parens = false);
inline std::string print_term(const PrintScopes& s, const Term& t, bool parens = false);

// Prints a local context; `inner` receives the scope extended with the
// (freshened) entry names, for printing components that live inside it.
inline std::string print_lctx_scoped(const PrintScopes& s, const LocalCtx& ctx, PrintScopes& inner) {
  std::string r = ctx.base ? printer_detail::global_name(s, *ctx.base) : ".";
  PrintScopes s2 = s;
  s2.locals.clear();
  for (const auto& e : ctx.entries) {
    std::string n = printer_detail::fresh(s2, e.name, "x");
    r += ", " + n + " : " + print_type(s2, e.type) + " @ " + print_level(s2, e.level);
    s2.locals.push_back(n);
  }
  inner = s2;
  return r;
}

inline std::string print_lctx(const PrintScopes& s, const LocalCtx& ctx) {
  PrintScopes ignored;
  return print_lctx_scoped(s, ctx, ignored);
}

inline std::string print_lsubst(const PrintScopes& s, const LocalSubst& d) {
  std::string r = "^(";
  if (d.base == LocalSubst::Base::Weaken) {
    r += "wk " + std::to_string(d.base_count) + " " + printer_detail::global_name(s, *d.base_var);
  } else {
    r += ". " + std::to_string(d.base_count);
    if (d.base_var) r += " " + printer_detail::global_name(s, *d.base_var);
  }
  int i = 0;
  for (const Term& e : d.entries) r += ", " + print_term(s, e, true) + "/x" + std::to_string(i++);
  return r + ")";
}

namespace printer_detail {

// Counts the local variables a piece of code leaves free, so boxes around
// open code can emit a brace binder list.
struct FreeLocalProbe {
  int* max_index;
  Term var(const TmVar& x, int, int, int ld) const {
    if (x.index >= ld && x.index - ld > *max_index) *max_index = x.index - ld;
    return tm::var(x.index, x.name);
  }
  LocalSubst subst_base(const LocalSubst& b, int, int, int) const { return b; }
};

template <class X>
int free_local_count(const X& x) {
  int max_index = -1;
  (void)lmap(x, FreeLocalProbe{&max_index}, 0, 0, 0);
  return max_index + 1;
}

template <class X, class PrintBody>
std::string print_box_body(const PrintScopes& s, const X& body, const PrintBody& pb) {
  int n = free_local_count(body);
  PrintScopes s2 = s;
  s2.locals.clear();
  if (n == 0) return pb(s2, body);
  std::string hdr;
  for (int i = 0; i < n; ++i) {
    std::string name = fresh(s2, "c" + std::to_string(i), "c");
    s2.locals.push_back(name);
    hdr += (i ? " " : "") + name;
  }
  return "{ " + hdr + " . " + pb(s2, body) + " }";
}

inline std::string print_motives(const PrintScopes& s, const Motives& m) {
  PrintScopes st = s;
  std::string l = fresh(st, "l", "l");
  st.levels.push_back(l);
  std::string g = fresh(st, "g", "g");
  st.globals.push_back(g);
  std::string xT = fresh(st, "xT", "xT");
  PrintScopes st2 = st;
  st2.locals.push_back(xT);
  std::string r = "(" + l + " " + g + " " + xT + ". " + print_type(st2, m.typ) + ")";

  PrintScopes su = s;
  std::string l2 = fresh(su, "l", "l");
  su.levels.push_back(l2);
  std::string g2 = fresh(su, "g", "g");
  su.globals.push_back(g2);
  std::string UT = fresh(su, "UT", "UT");
  su.globals.push_back(UT);
  std::string xt = fresh(su, "xt", "xt");
  PrintScopes su2 = su;
  su2.locals.push_back(xt);
  r += " (" + l2 + " " + g2 + " " + UT + " " + xt + ". " + print_type(su2, m.trm) + ")";
  return r;
}

inline std::string print_branches(const PrintScopes& s, const Branches& b) {
  // fixed binder name stems per branch, freshened against the scope
  static const std::vector<std::vector<const char*>> stems = {
      {"g"},                                                              // nat
      {"l", "l'", "g", "US", "UT", "xS", "xT"},                           // pi
      {"l", "g"},                                                         // ty
      {"l", "g", "ut", "xt"},                                             // el
      {"l", "g", "UT", "ux"},                                             // var
      {"g"},                                                              // nat'
      {"l", "l'", "g", "us", "ut", "xs", "xt"},                           // pi'
      {"l", "g"},                                                         // ty'
      {"g"},                                                              // zero
      {"g", "ut", "xt"},                                                  // succ
      {"l", "g", "UM", "us", "us'", "ut", "xM", "xs", "xs'", "xt"},       // elimnat
      {"l", "l'", "g", "US", "UT", "ut", "xS", "xt"},                     // lam
      {"l", "l'", "g", "US", "UT", "ut", "us", "xS", "xT", "xt", "xs"}};  // app
  std::string r = "(";
  for (BranchKind k : kAllBranchKinds) {
    BranchArity ar = branch_arity(k);
    const auto& names = stems[static_cast<std::size_t>(k)];
    PrintScopes sb = s;
    std::string header;
    int pos = 0;
    for (int i = 0; i < ar.levels; ++i, ++pos) {
      std::string n = fresh(sb, names[pos], "l");
      sb.levels.push_back(n);
      header += " " + n;
    }
    for (int i = 0; i < ar.globals; ++i, ++pos) {
      std::string n = fresh(sb, names[pos], "u");
      sb.globals.push_back(n);
      header += " " + n;
    }
    for (int i = 0; i < ar.locals; ++i, ++pos) {
      std::string n = fresh(sb, names[pos], "x");
      sb.locals.push_back(n);
      header += " " + n;
    }
    r += "\n    | " + std::string(branch_keyword(k)) + header + " => " + print_term(sb, b.at(k));
  }
  return r + ")";
}

}  // namespace printer_detail

inline std::string print_type(const PrintScopes& s, const Type& t, bool parens) {
  using namespace printer_detail;
  auto wrap = [&](std::string r) { return parens ? "(" + r + ")" : r; };
  return std::visit(
      overloaded{
          [&](const TyNat&) -> std::string { return "Nat"; },
          [&](const TyPi& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "x");
            std::string dom = print_type(s2, x.dom) + " @ " + print_level(s2, x.dom_level);
            s2.locals.push_back(n);
            return wrap("Pi (" + n + " : " + dom + ") @ " + print_level(s, x.cod_level) + ". " +
                        print_type(s2, x.cod, true));
          },
          [&](const TyTy& x) { return wrap("Ty " + print_level(s, x.level, true)); },
          [&](const TyUPi& x) {
            PrintScopes s2 = s;
            std::string hdr;
            for (unsigned i = 0; i < x.var_count; ++i) {
              std::string base = i < x.binders.size() ? x.binders[i] : "l";
              std::string n = fresh(s2, base, "l");
              s2.levels.push_back(n);
              hdr += (i ? " " : "") + n;
            }
            return wrap("UPi (" + hdr + ") @ " + print_level(s2, x.level) + ". " +
                        print_type(s2, x.body, true));
          },
          [&](const TyEl& x) {
            return wrap("El " + print_level(s, x.level, true) + " " + print_term(s, x.code, true));
          },
          [&](const TyGlobal& x) { return global_name(s, x.index) + print_lsubst(s, x.subst); },
          [&](const TyCtxPi& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "g");
            s2.globals.push_back(n);
            return wrap("CtxPi (" + n + ") @ " + print_level(s, x.level) + ". " +
                        print_type(s2, x.body, true));
          },
          [&](const TyTyPi& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "U");
            std::string hdr = "[" + print_lctx(s, x.ctx) + " |- Ty " +
                              print_level(s, x.bind_level, true) + "]";
            s2.globals.push_back(n);
            return wrap("TyPi (" + n + " : " + hdr + ") @ " + print_level(s, x.res_level) +
                        ". " + print_type(s2, x.body, true));
          },
          [&](const TyCodeTy& x) {
            return "[" + print_lctx(s, x.ctx) + " |- Ty " + print_level(s, x.level, true) + "]";
          },
          [&](const TyCodeTm& x) {
            PrintScopes s2;
            std::string c = print_lctx_scoped(s, x.ctx, s2);
            return "[" + c + " |- " + print_type(s2, x.type) + " : " + print_level(s, x.level) +
                   "]";
          }},
      t.node().v);
}

inline std::string print_term(const PrintScopes& s, const Term& t, bool parens) {
  using namespace printer_detail;
  auto wrap = [&](std::string r) { return parens ? "(" + r + ")" : r; };
  return std::visit(
      overloaded{
          [&](const TmVar& x) -> std::string { return local_name(s, x.index); },
          [&](const TmGlobal& x) { return global_name(s, x.index) + print_lsubst(s, x.subst); },
          [&](const TmNat&) -> std::string { return "Nat"; },
          [&](const TmPi& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "x");
            std::string dom = print_term(s2, x.dom) + " @ " + print_level(s2, x.dom_level);
            s2.locals.push_back(n);
            return wrap("Pi (" + n + " : " + dom + ") @ " + print_level(s, x.cod_level) + ". " +
                        print_term(s2, x.cod, true));
          },
          [&](const TmTy& x) { return wrap("Ty " + print_level(s, x.level, true)); },
          [&](const TmZero&) -> std::string { return "zero"; },
          [&](const TmSucc& x) { return wrap("succ " + print_term(s, x.arg, true)); },
          [&](const TmElimNat& x) {
            PrintScopes sm = s;
            std::string xm = fresh(sm, x.motive_binder, "x");
            sm.locals.push_back(xm);
            PrintScopes ss = s;
            std::string xs = fresh(ss, x.step_binder, "x");
            ss.locals.push_back(xs);
            std::string ys = fresh(ss, x.step_rec_binder, "y");
            ss.locals.push_back(ys);
            return wrap("elimNat (" + print_level(s, x.level) + ") (" + xm + ". " +
                        print_type(sm, x.motive) + ") (" + print_term(s, x.base) + ") (" + xs +
                        " " + ys + ". " + print_term(ss, x.step) + ") (" + print_term(s, x.scrut) +
                        ")");
          },
          [&](const TmLam& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "x");
            std::string dom = print_type(s2, x.dom) + " @ " + print_level(s2, x.dom_level);
            s2.locals.push_back(n);
            return wrap("fun (" + n + " : " + dom + ") @ " + print_level(s, x.cod_level) + ". " +
                        print_term(s2, x.body, true));
          },
          [&](const TmApp& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "x");
            std::string dom = print_type(s2, x.dom) + " @ " + print_level(s2, x.dom_level);
            s2.locals.push_back(n);
            return wrap("app (" + n + " : " + dom + " . " + print_type(s2, x.cod) + " @ " +
                        print_level(s, x.cod_level) + ") " + print_term(s, x.fn, true) + " " +
                        print_term(s, x.arg, true));
          },
          [&](const TmULam& x) {
            PrintScopes s2 = s;
            std::string hdr;
            for (unsigned i = 0; i < x.var_count; ++i) {
              std::string base = i < x.binders.size() ? x.binders[i] : "l";
              std::string n = fresh(s2, base, "l");
              s2.levels.push_back(n);
              hdr += (i ? " " : "") + n;
            }
            return wrap("ulam (" + hdr + ") @ " + print_level(s2, x.level) + ". " +
                        print_term(s2, x.body, true));
          },
          [&](const TmUApp& x) {
            std::string ls;
            for (std::size_t i = 0; i < x.levels.size(); ++i)
              ls += (i ? ", " : "") + print_level(s, x.levels[i]);
            return wrap("uapp " + print_term(s, x.fn, true) + " (" + ls + ")");
          },
          [&](const TmCtxLam& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "g");
            s2.globals.push_back(n);
            return wrap("ctxfun (" + n + ") @ " + print_level(s, x.level) + ". " +
                        print_term(s2, x.body, true));
          },
          [&](const TmCtxApp& x) {
            return wrap("ctxapp " + print_term(s, x.fn, true) + " (" + print_lctx(s, x.arg) + ")");
          },
          [&](const TmTyLam& x) {
            PrintScopes s2 = s;
            std::string n = fresh(s2, x.binder, "U");
            std::string hdr = "[" + print_lctx(s, x.ctx) + " |- Ty " +
                              print_level(s, x.bind_level, true) + "]";
            s2.globals.push_back(n);
            return wrap("tyfun (" + n + " : " + hdr + ") @ " + print_level(s, x.res_level) + ". " +
                        print_term(s2, x.body, true));
          },
          [&](const TmTyApp& x) {
            return wrap("tyapp " + print_term(s, x.fn, true) + " (" + print_type(s, x.arg) + ")");
          },
          [&](const TmBoxTy& x) {
            return wrap("box ty " + printer_detail::print_box_body(
                                        s, x.body, [](const PrintScopes& s2, const Type& b) {
                                          return print_type(s2, b, true);
                                        }));
          },
          [&](const TmBoxTm& x) {
            return wrap("box tm " + printer_detail::print_box_body(
                                        s, x.body, [](const PrintScopes& s2, const Term& b) {
                                          return print_term(s2, b, true);
                                        }));
          },
          [&](const TmLetBoxTy& x) {
            PrintScopes sm = s;
            std::string xT = fresh(sm, x.motive_binder, "xT");
            sm.locals.push_back(xT);
            PrintScopes sb = s;
            std::string U = fresh(sb, x.binder, "U");
            sb.globals.push_back(U);
            return wrap("letbox ty (" + print_level(s, x.res_level) + ", " +
                        print_level(s, x.code_level) + ") (" + print_lctx(s, x.ctx) + ") (" + xT +
                        ". " + print_type(sm, x.motive) + ") (" + U + ". " +
                        print_term(sb, x.body) + ") " + print_term(s, x.scrut, true));
          },
          [&](const TmLetBoxTm& x) {
            PrintScopes sc;
            std::string ctx_str = print_lctx_scoped(s, x.ctx, sc);
            PrintScopes sm = s;
            std::string xt = fresh(sm, x.motive_binder, "xt");
            sm.locals.push_back(xt);
            PrintScopes sb = s;
            std::string u = fresh(sb, x.binder, "u");
            sb.globals.push_back(u);
            return wrap("letbox tm (" + print_level(s, x.res_level) + ", " +
                        print_level(s, x.code_level) + ") (" + ctx_str + ") (" +
                        print_type(sc, x.type) + ") (" + xt + ". " + print_type(sm, x.motive) +
                        ") (" + u + ". " + print_term(sb, x.body) + ") " +
                        print_term(s, x.scrut, true));
          },
          [&](const TmElimTyp& x) {
            return wrap("elimTy (" + print_level(s, x.typ_level) + ", " +
                        print_level(s, x.trm_level) + ") " + print_motives(s, x.motives) + " " +
                        print_branches(s, x.branches) + " (" + print_level(s, x.index_level) +
                        ") (" + print_lctx(s, x.index_ctx) + ") " + print_term(s, x.scrut, true));
          },
          [&](const TmElimTrm& x) {
            PrintScopes sc;
            std::string ctx_str = print_lctx_scoped(s, x.index_ctx, sc);
            return wrap("elimTm (" + print_level(s, x.typ_level) + ", " +
                        print_level(s, x.trm_level) + ") " + print_motives(s, x.motives) + " " +
                        print_branches(s, x.branches) + " (" + print_level(s, x.index_level) +
                        ") (" + ctx_str + ") (" + print_type(sc, x.index_type) + ") " +
                        print_term(s, x.scrut, true));
          }},
      t.node().v);
}

}  // namespace delam
