#pragma once

// Executable law suites: the substitution algebra, reduction determinacy,
// preservation, convertibility properties and layering, each run over
// seeded generated subjects. A failing case reports the seed that replays
// it.

#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "delam/driver.hpp"
#include "delam/gen.hpp"

namespace delam {

struct LawReport {
  std::string suite;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  std::uint64_t first_failure_seed = 0;

  bool ok() const { return failures == 0; }
};

namespace lawbench_detail {

// Numeric oracle for universe levels: lub is max, succ is +1.
inline std::uint64_t eval_level(const Level& l, const std::vector<std::uint64_t>& assignment) {
  switch (l.kind()) {
    case Level::Kind::Zero: return 0;
    case Level::Kind::Var: return assignment.at(static_cast<std::size_t>(l.var_index()));
    case Level::Kind::Succ: return 1 + eval_level(l.arg(), assignment);
    case Level::Kind::Lub:
      return std::max(eval_level(l.lhs(), assignment), eval_level(l.rhs(), assignment));
    case Level::Kind::Omega: throw KernelError("eval_level: omega");
  }
  throw KernelError("eval_level: unreachable");
}

inline bool agree_on_assignments(std::size_t nvars, const Level& a, const Level& b,
                                 std::uint64_t top = 4) {
  std::vector<std::uint64_t> assignment(nvars, 0);
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

// Collects the variant indices of all nodes, for constructor coverage.
inline void collect_kinds(const Type& t, std::set<std::size_t>& tys, std::set<std::size_t>& tms);
inline void collect_kinds(const Term& t, std::set<std::size_t>& tys, std::set<std::size_t>& tms);

inline void collect_kinds(const LocalCtx& c, std::set<std::size_t>& tys,
                          std::set<std::size_t>& tms) {
  for (const auto& e : c.entries) collect_kinds(e.type, tys, tms);
}
inline void collect_kinds(const LocalSubst& d, std::set<std::size_t>& tys,
                          std::set<std::size_t>& tms) {
  for (const auto& e : d.entries) collect_kinds(e, tys, tms);
}

inline void collect_kinds(const Type& t, std::set<std::size_t>& tys, std::set<std::size_t>& tms) {
  tys.insert(t.node().v.index());
  std::visit(overloaded{[&](const TyPi& x) {
                          collect_kinds(x.dom, tys, tms);
                          collect_kinds(x.cod, tys, tms);
                        },
                        [&](const TyUPi& x) { collect_kinds(x.body, tys, tms); },
                        [&](const TyEl& x) { collect_kinds(x.code, tys, tms); },
                        [&](const TyGlobal& x) { collect_kinds(x.subst, tys, tms); },
                        [&](const TyCtxPi& x) { collect_kinds(x.body, tys, tms); },
                        [&](const TyTyPi& x) {
                          collect_kinds(x.ctx, tys, tms);
                          collect_kinds(x.body, tys, tms);
                        },
                        [&](const TyCodeTy& x) { collect_kinds(x.ctx, tys, tms); },
                        [&](const TyCodeTm& x) {
                          collect_kinds(x.ctx, tys, tms);
                          collect_kinds(x.type, tys, tms);
                        },
                        [&](const auto&) {}},
             t.node().v);
}

inline void collect_kinds(const Term& t, std::set<std::size_t>& tys, std::set<std::size_t>& tms) {
  tms.insert(t.node().v.index());
  std::visit(
      overloaded{[&](const TmGlobal& x) { collect_kinds(x.subst, tys, tms); },
                 [&](const TmPi& x) {
                   collect_kinds(x.dom, tys, tms);
                   collect_kinds(x.cod, tys, tms);
                 },
                 [&](const TmSucc& x) { collect_kinds(x.arg, tys, tms); },
                 [&](const TmElimNat& x) {
                   collect_kinds(x.motive, tys, tms);
                   collect_kinds(x.base, tys, tms);
                   collect_kinds(x.step, tys, tms);
                   collect_kinds(x.scrut, tys, tms);
                 },
                 [&](const TmLam& x) {
                   collect_kinds(x.dom, tys, tms);
                   collect_kinds(x.body, tys, tms);
                 },
                 [&](const TmApp& x) {
                   collect_kinds(x.fn, tys, tms);
                   collect_kinds(x.dom, tys, tms);
                   collect_kinds(x.cod, tys, tms);
                   collect_kinds(x.arg, tys, tms);
                 },
                 [&](const TmULam& x) { collect_kinds(x.body, tys, tms); },
                 [&](const TmUApp& x) { collect_kinds(x.fn, tys, tms); },
                 [&](const TmCtxLam& x) { collect_kinds(x.body, tys, tms); },
                 [&](const TmCtxApp& x) {
                   collect_kinds(x.fn, tys, tms);
                   collect_kinds(x.arg, tys, tms);
                 },
                 [&](const TmTyLam& x) {
                   collect_kinds(x.ctx, tys, tms);
                   collect_kinds(x.body, tys, tms);
                 },
                 [&](const TmTyApp& x) {
                   collect_kinds(x.fn, tys, tms);
                   collect_kinds(x.arg, tys, tms);
                 },
                 [&](const TmBoxTy& x) { collect_kinds(x.body, tys, tms); },
                 [&](const TmBoxTm& x) { collect_kinds(x.body, tys, tms); },
                 [&](const TmLetBoxTy& x) {
                   collect_kinds(x.ctx, tys, tms);
                   collect_kinds(x.motive, tys, tms);
                   collect_kinds(x.body, tys, tms);
                   collect_kinds(x.scrut, tys, tms);
                 },
                 [&](const TmLetBoxTm& x) {
                   collect_kinds(x.ctx, tys, tms);
                   collect_kinds(x.type, tys, tms);
                   collect_kinds(x.motive, tys, tms);
                   collect_kinds(x.body, tys, tms);
                   collect_kinds(x.scrut, tys, tms);
                 },
                 [&](const TmElimTyp& x) {
                   collect_kinds(x.motives.typ, tys, tms);
                   collect_kinds(x.motives.trm, tys, tms);
                   for (BranchKind k : kAllBranchKinds) collect_kinds(x.branches.at(k), tys, tms);
                   collect_kinds(x.index_ctx, tys, tms);
                   collect_kinds(x.scrut, tys, tms);
                 },
                 [&](const TmElimTrm& x) {
                   collect_kinds(x.motives.typ, tys, tms);
                   collect_kinds(x.motives.trm, tys, tms);
                   for (BranchKind k : kAllBranchKinds) collect_kinds(x.branches.at(k), tys, tms);
                   collect_kinds(x.index_ctx, tys, tms);
                   collect_kinds(x.index_type, tys, tms);
                   collect_kinds(x.scrut, tys, tms);
                 },
                 [&](const auto&) {}},
      t.node().v);
}

struct CaseRunner {
  LawReport report;

  void run(int cases, std::uint64_t seed, const std::function<void(Generator&)>& body) {
    for (int i = 0; i < cases; ++i) {
      std::uint64_t case_seed = seed + static_cast<std::uint64_t>(i);
      Generator gen(case_seed);
      ++report.cases;
      try {
        body(gen);
      } catch (const std::exception& e) {
        ++report.failures;
        if (report.failures == 1) {
          report.first_failure = e.what();
          report.first_failure_seed = case_seed;
        }
      }
    }
  }
};

struct LawFailure : std::runtime_error {
  explicit LawFailure(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw LawFailure(what);
}

// The mutant used by the mutation smoke test: extends a substitution under a
// binder without shifting the existing entries.
inline LocalSubst broken_lift1(const LocalSubst& d) {
  LocalSubst r = d;
  r.base_count += 1;
  r.entries.push_back(tm::var(0));
  return r;
}

}  // namespace lawbench_detail

inline std::vector<std::string> law_suite_names() {
  return {"ulevel",        "usubst",  "lsubst",   "gsubst",   "wk-action", "interact",
          "determinacy",   "preservation", "conv", "lift",     "classify",  "stability",
          "coverage",      "mutation", "generator"};
}

inline LawReport run_laws(const std::string& suite, int cases, std::uint64_t seed) {
  using namespace lawbench_detail;
  CaseRunner r;
  r.report.suite = suite;

  auto subject_env = [](Generator& g) { return g.gen_env(); };

  if (suite == "ulevel") {
    r.run(cases, seed, [&](Generator& g) {
      int nv = 3;
      Level a = g.gen_level(nv, 4);
      Level b = g.gen_level(nv, 4);
      UnivCtx uc({"a", "b", "c"});
      if (level_equiv(uc, a, b))
        require(agree_on_assignments(3, a, b), "equivalent levels disagree on an assignment");
      require(agree_on_assignments(3, a, normalize(uc, a)),
              "normalization changes the value of a level");
      Level n = normalize(uc, a);
      require(normalize(uc, n) == n, "normalize is not idempotent");
      // algebraic rules
      Level c = g.gen_level(nv, 3);
      require(level_equiv(uc, Level::lub(a, Level::zero()), a), "unit law");
      require(level_equiv(uc, Level::lub(Level::lub(a, b), c), Level::lub(a, Level::lub(b, c))),
              "associativity");
      require(level_equiv(uc, Level::lub(a, b), Level::lub(b, a)), "commutativity");
      require(level_equiv(uc, Level::lub(a, a), a), "idempotence");
      require(level_equiv(uc, Level::succ(Level::lub(a, b)),
                          Level::lub(Level::succ(a), Level::succ(b))),
              "distributivity of succ");
      require(level_equiv(uc, Level::lub(a, Level::succ(a)), Level::succ(a)), "absorption");
    });
    return r.report;
  }

  if (suite == "usubst") {
    r.run(cases, seed, [&](Generator& g) {
      Level l = g.gen_level(3, 3);
      UnivSubst p1 = g.gen_usubst(3, 3), p2 = g.gen_usubst(3, 3), p3 = g.gen_usubst(3, 3);
      require(usubst_apply(l, usubst_id(3)) == l, "identity");
      require(usubst_apply(usubst_apply(l, p1), p2) == usubst_apply(l, usubst_compose(p1, p2)),
              "composition");
      UnivSubst lhs = usubst_compose(usubst_compose(p1, p2), p3);
      UnivSubst rhs = usubst_compose(p1, usubst_compose(p2, p3));
      for (std::size_t i = 0; i < lhs.entries.size(); ++i)
        require(lhs.entries[i] == rhs.entries[i], "associativity");
    });
    return r.report;
  }

  if (suite == "lsubst") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      auto [g2, d1] = g.gen_lsubst_to(e, e.lc, 1);
      GenEnv e2{e.uc, e.gc, g2};
      auto [g3, d2] = g.gen_lsubst_to(e2, g2, 1);
      GenEnv e3{e.uc, e.gc, g3};
      auto [g4, d3] = g.gen_lsubst_to(e3, g3, 1);
      require(aeq(lsubst_apply_term(s.term, lsubst_id(e.lc)), s.term), "X[id] = X");
      require(aeq(lsubst_apply_term(lsubst_apply_term(s.term, d1), d2),
                  lsubst_apply_term(s.term, lsubst_compose(d1, d2))),
              "X[d][d'] = X[d o d']");
      require(aeq(lsubst_apply_type(lsubst_apply_type(s.type, d1), d2),
                  lsubst_apply_type(s.type, lsubst_compose(d1, d2))),
              "T[d][d'] = T[d o d']");
      require(aeq(lsubst_compose(lsubst_compose(d1, d2), d3),
                  lsubst_compose(d1, lsubst_compose(d2, d3))),
              "(d1 o d2) o d3 = d1 o (d2 o d3)");
      require(aeq(lsubst_compose(d1, lsubst_id(g2)), d1), "d o id = d");
      require(aeq(lsubst_compose(lsubst_id(e.lc), d1), d1), "id o d = d");
    });
    return r.report;
  }

  if (suite == "gsubst") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      auto [psi2, s1] = g.gen_gsubst_to(e, e.gc, 1);
      auto [psi3, s2] = g.gen_gsubst_to(GenEnv{e.uc, psi2, {}}, psi2, 1);
      auto [psi4, s3] = g.gen_gsubst_to(GenEnv{e.uc, psi3, {}}, psi3, 1);
      require(aeq(gsubst_apply(s.term, gsubst_id(e.gc)), s.term), "X[id] = X");
      require(aeq(gsubst_apply(e.lc, gsubst_id(e.gc)), e.lc), "ctx[id] = ctx");
      require(aeq(gsubst_apply(gsubst_apply(s.term, s1), s2),
                  gsubst_apply(s.term, gsubst_compose(s1, s2))),
              "X[s][s'] = X[s o s']");
      require(aeq(gsubst_apply(gsubst_apply(s.type, s1), s2),
                  gsubst_apply(s.type, gsubst_compose(s1, s2))),
              "T[s][s'] = T[s o s']");
      require(aeq(gsubst_compose(gsubst_compose(s1, s2), s3),
                  gsubst_compose(s1, gsubst_compose(s2, s3))),
              "associativity");
      require(aeq(gsubst_compose(s1, gsubst_id(psi2)), s1), "s o id = s");
      require(aeq(gsubst_compose(gsubst_id(e.gc), s1), s1), "id o s = s");
    });
    return r.report;
  }

  if (suite == "wk-action") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto [psi2, s1] = g.gen_gsubst_to(e, e.gc, 1);
      unsigned k = static_cast<unsigned>(g.pick(3));
      require(aeq(gsubst_apply(lwk(e.lc, k), s1), lwk(gsubst_apply(e.lc, s1), k)),
              "wk_G[s] = wk_{G[s]}");
      require(aeq(gsubst_apply(lsubst_id(e.lc), s1), lsubst_id(gsubst_apply(e.lc, s1))),
              "id_G[s] = id_{G[s]}");
      UnivSubst phi = g.gen_usubst(2, static_cast<int>(e.uc.size()));
      UnivCtx target({"m0", "m1"});
      require(aeq(usubst_apply_syntax(lwk(e.lc, k), phi),
                  lwk(usubst_apply_syntax(e.lc, phi), k)),
              "wk_G[phi] = wk_{G[phi]}");
      // global weakening acts as an index shift
      GlobalCtx bigger = e.gc.extended(CtxBind{"h"});
      auto subj = g.gen_subject(e, Layer::M, 1);
      require(aeq(gsubst_apply(subj.term, gwk(e.gc, 1)), gshift(subj.term, 1)),
              "wk_Psi acts as a shift");
      (void)bigger;
    });
    return r.report;
  }

  if (suite == "interact") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      auto [g2, d1] = g.gen_lsubst_to(e, e.lc, 1);
      GenEnv e2{e.uc, e.gc, g2};
      auto [g3, d2] = g.gen_lsubst_to(e2, g2, 1);
      auto [psi2, sg] = g.gen_gsubst_to(e, e.gc, 1);
      UnivSubst phi = g.gen_usubst(2, static_cast<int>(e.uc.size()));
      // X[d][phi] = X[phi][d[phi]]
      require(aeq(usubst_apply_syntax(lsubst_apply_term(s.term, d1), phi),
                  lsubst_apply_term(usubst_apply_syntax(s.term, phi),
                                    usubst_apply_syntax(d1, phi))),
              "X[d][phi] = X[phi][d[phi]]");
      // (d o d')[phi] = d[phi] o d'[phi]
      require(aeq(usubst_apply_syntax(lsubst_compose(d1, d2), phi),
                  lsubst_compose(usubst_apply_syntax(d1, phi), usubst_apply_syntax(d2, phi))),
              "(d o d')[phi] = d[phi] o d'[phi]");
      // X[s][phi] = X[phi][s[phi]]
      require(aeq(usubst_apply_syntax(gsubst_apply(s.term, sg), phi),
                  gsubst_apply(usubst_apply_syntax(s.term, phi), usubst_apply_syntax(sg, phi))),
              "X[s][phi] = X[phi][s[phi]]");
      // X[d][s] = X[s][d[s]]
      require(aeq(gsubst_apply(lsubst_apply_term(s.term, d1), sg),
                  lsubst_apply_term(gsubst_apply(s.term, sg), gsubst_apply(d1, sg))),
              "X[d][s] = X[s][d[s]]");
      // (d o d')[s] = d[s] o d'[s]
      require(aeq(gsubst_apply(lsubst_compose(d1, d2), sg),
                  lsubst_compose(gsubst_apply(d1, sg), gsubst_apply(d2, sg))),
              "(d o d')[s] = d[s] o d'[s]");
    });
    return r.report;
  }

  if (suite == "determinacy") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 3);
      Term a = whnf_term(s.term);
      Term b = whnf_term(s.term);
      require(aeq(a, b), "whnf is not deterministic");
      Form f = classify_term_whnf(a);
      require(f == Form::Whnf || f == Form::Neutral, "whnf result still reduces");
    });
    return r.report;
  }

  if (suite == "preservation") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 3);
      TypingEnv env{e.uc, e.gc, e.lc, Layer::M, {}, {}};
      Term t = s.term;
      int steps = 0;
      while (std::optional<Term> next = step_term(t)) {
        t = *next;
        check_term(env, t, s.type, s.level);
        if (++steps > 100) break;
      }
    });
    return r.report;
  }

  if (suite == "conv") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      ConvVerdict refl = conv_term(e.uc, e.gc, e.lc, Layer::M, s.term, s.term, s.type, s.level);
      require(refl.ok, "reflexivity: " + refl.reason);
      if (std::optional<Term> next = step_term(s.term)) {
        ConvVerdict beta =
            conv_term(e.uc, e.gc, e.lc, Layer::M, s.term, *next, s.type, s.level);
        require(beta.ok, "redex/reduct: " + beta.reason);
        ConvVerdict sym = conv_term(e.uc, e.gc, e.lc, Layer::M, *next, s.term, s.type, s.level);
        require(sym.ok, "symmetry: " + sym.reason);
        Term v = whnf_term(s.term);
        ConvVerdict trans = conv_term(e.uc, e.gc, e.lc, Layer::M, *next, v, s.type, s.level);
        require(trans.ok, "transitivity: " + trans.reason);
      }
    });
    return r.report;
  }

  if (suite == "lift") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::C, 2);
      for (Layer i : {Layer::C, Layer::D, Layer::M}) {
        TypingEnv env{e.uc, e.gc, e.lc, i, {}, {}};
        check_term(env, s.term, s.type, s.level);
      }
      // static code equality at c coincides with structural equality modulo
      // universe levels: perturb levels by an equivalent form
      Level lv = g.gen_level(static_cast<int>(e.uc.size()), 2);
      Term left = tm::box_ty(ty::universe(lv));
      Term right = tm::box_ty(ty::universe(Level::lub(lv, lv)));
      Type code = ty::code_ty(LocalCtx::empty(), Level::succ(lv));
      ConvVerdict v = conv_term(e.uc, e.gc, e.lc, Layer::M, left, right, code, Level::zero());
      require(v.ok == aeq(left, right, LevelCmp::ModuloLevels),
              "static code equality disagrees with the alpha routine");
      Term other = tm::box_ty(ty::universe(Level::succ(lv)));
      ConvVerdict v2 = conv_term(e.uc, e.gc, e.lc, Layer::M, left, other, code, Level::zero());
      require(v2.ok == aeq(left, other, LevelCmp::ModuloLevels),
              "static code inequality disagrees with the alpha routine");
    });
    return r.report;
  }

  if (suite == "classify") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      Form f = classify_term_whnf(s.term);
      bool steps = step_term(s.term).has_value();
      require((f == Form::Reducible) == steps, "classification does not mirror reduction");
      Form ft = classify_type_whnf(s.type);
      bool tsteps = step_type(s.type).has_value();
      require((ft == Form::Reducible) == tsteps, "type classification does not mirror reduction");
    });
    return r.report;
  }

  if (suite == "stability") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = subject_env(g);
      auto s = g.gen_subject(e, Layer::M, 2);
      auto [psi2, sg] = g.gen_gsubst_to(e, e.gc, 1);
      Term lhs = whnf_term(gsubst_apply(s.term, sg));
      Term rhs = whnf_term(gsubst_apply(whnf_term(s.term), sg));
      require(aeq(lhs, rhs), "whnf is not stable under global substitution");
    });
    return r.report;
  }

  if (suite == "coverage") {
    std::set<std::size_t> tys, tms;
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = g.gen_env();
      auto s = g.gen_subject(e, Layer::M, 3);
      collect_kinds(s.term, tys, tms);
      collect_kinds(s.type, tys, tms);
    });
    std::size_t n_ty = std::variant_size_v<decltype(TypeNode::v)>;
    std::size_t n_tm = std::variant_size_v<decltype(TermNode::v)>;
    if (tys.size() < n_ty || tms.size() < n_tm) {
      ++r.report.failures;
      std::ostringstream os;
      os << "constructor coverage incomplete: " << tys.size() << "/" << n_ty << " types, "
         << tms.size() << "/" << n_tm << " terms";
      r.report.first_failure = os.str();
    }
    return r.report;
  }

  if (suite == "mutation") {
    r.run(cases, seed, [&](Generator& g) {
      // the harness must detect a lift that forgets to shift entries
      GenEnv e = subject_env(g);
      LocalCtx target = LocalCtx::empty().extended("a", ty::nat(), Level::zero());
      auto [from, d] = g.gen_lsubst_to(GenEnv{e.uc, e.gc, {}}, target, 1);
      bool uses_entry = false;
      for (const Term& entry : d.entries)
        if (!entry.is<TmZero>()) uses_entry = true;
      LocalSubst good = lsubst_lift1(d);
      LocalSubst bad = lawbench_detail::broken_lift1(d);
      if (uses_entry || !d.entries.empty()) {
        // under a binder, a variable past the bound one must hit the shifted
        // entry; with the mutant it resolves one slot too early
        Term subject = tm::lam(Level::zero(), Level::zero(), "x", ty::nat(), tm::var(1));
        Term via_good = lsubst_apply_term(subject, d);
        Term body_good = lsubst_apply_term(tm::var(1), good);
        Term body_bad = lsubst_apply_term(tm::var(1), bad);
        require(aeq(via_good.as<TmLam>()->body, body_good), "lift agrees with the table");
        if (!aeq(lshift(d.entries[0], 1, 0), d.entries[0]))
          require(!aeq(body_good, body_bad), "the mutant went undetected");
      }
    });
    return r.report;
  }

  if (suite == "generator") {
    r.run(cases, seed, [&](Generator& g) {
      GenEnv e = g.gen_env();
      check_gctx(e.uc, e.gc);
      TypingEnv env{e.uc, e.gc, LocalCtx{}, Layer::D, {}, {}};
      check_lctx(env, Layer::D, e.lc);
      auto s = g.gen_subject(e, Layer::M, 3);
      TypingEnv env2{e.uc, e.gc, e.lc, Layer::M, {}, {}};
      check_term(env2, s.term, s.type, s.level);
    });
    return r.report;
  }

  throw KernelError("unknown law suite: " + suite);
}

}  // namespace delam
