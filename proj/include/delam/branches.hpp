#pragma once

// Checking-side signatures for the code recursors: for each of the thirteen
// branches, the global bindings it introduces, the recursive-call entries it
// adds to the local context, and the motive instance its body must check
// against. The same data drives convertibility checking of stuck recursors.
//
// Everything returned lives in the extended world: the ambient universe
// context grown by level_count, the ambient global context grown by psi_ext,
// and the ambient local context (suitably weakened) grown by gamma_ext.

#include "delam/subst.hpp"

namespace delam {

struct BranchSignature {
  int level_count = 0;
  std::vector<GlobalBind> psi_ext;        // binding order
  std::vector<LocalCtxEntry> gamma_ext;   // recursive-call variables
  Type expected;                          // motive instance for the body
  Level expected_level;                   // l1 or l2 in the extended universe context
};

struct MotiveSignature {
  std::vector<GlobalBind> psi_typ;  // g
  LocalCtxEntry x_typ;              // x_T : [g |- Ty l0] @ 0
  Level level_typ;                  // l1 shifted
  std::vector<GlobalBind> psi_trm;  // g, U_T
  LocalCtxEntry x_trm;              // x_t : [g |- U_T : l0] @ 0
  Level level_trm;                  // l2 shifted
};

inline MotiveSignature motive_signature(const Level& l1, const Level& l2) {
  MotiveSignature s;
  s.psi_typ = {CtxBind{"g"}};
  s.x_typ = {"x_T", ty::code_ty(LocalCtx::var(0), Level::var(0)), Level::zero()};
  s.level_typ = ushift_level(l1, 1);
  s.psi_trm = {CtxBind{"g"}, TypBind{"U_T", LocalCtx::var(0), Layer::D, Level::var(0)}};
  s.x_trm = {"x_t",
             ty::code_tm(LocalCtx::var(1), ty::global(0, lwk(LocalCtx::var(1), 0), "U_T"),
                         Level::var(0)),
             Level::zero()};
  s.level_trm = ushift_level(l2, 1);
  return s;
}

namespace detail {

inline Motives shift_motives(const Motives& m, int nlev, int nglob, int nloc) {
  return lshift(gshift(ushift(m, nlev), nglob), nloc);
}

inline Type gvar(int idx, const LocalCtx& ctx, const char* name) {
  return ty::global(idx, lwk(ctx, 0), name);
}
inline Term uvar(int idx, const LocalCtx& ctx, const char* name) {
  return tm::global(idx, lwk(ctx, 0), name);
}

}  // namespace detail

inline BranchSignature branch_signature(BranchKind kind, const Motives& m, const Level& l1,
                                        const Level& l2) {
  using detail::gvar;
  using detail::shift_motives;
  using detail::uvar;

  BranchArity ar = branch_arity(kind);
  BranchSignature s;
  s.level_count = ar.levels;
  Level l1x = ushift_level(l1, ar.levels);
  Level l2x = ushift_level(l2, ar.levels);
  // shifted copies of the motives, one per local depth inside the branch
  auto mot = [&](int nloc) { return shift_motives(m, ar.levels, ar.globals, nloc); };

  switch (kind) {
    case BranchKind::Nat: {
      LocalCtx g = LocalCtx::var(0);
      s.psi_ext = {CtxBind{"g"}};
      s.expected = inst_motive_typ(mot(0), Level::zero(), g, tm::box_ty(ty::nat()));
      s.expected_level = l1x;
      return s;
    }
    case BranchKind::Pi: {
      // (l, l' ; g, U_S : (g |-c Ty l), U_T : ((g, x:U_S) |-c Ty l') ; x_S, x_T)
      LocalCtx g = LocalCtx::var(2);
      LocalCtx gx = g.extended("x", gvar(1, g, "U_S"), Level::var(1));
      s.psi_ext = {CtxBind{"g"}, TypBind{"U_S", LocalCtx::var(0), Layer::C, Level::var(1)},
                   TypBind{"U_T",
                           LocalCtx::var(1).extended("x", gvar(0, LocalCtx::var(1), "U_S"),
                                                     Level::var(1)),
                           Layer::C, Level::var(0)}};
      s.gamma_ext = {
          {"x_S", inst_motive_typ(mot(0), Level::var(1), g, tm::box_ty(gvar(1, g, "U_S"))), l1x},
          {"x_T", inst_motive_typ(mot(1), Level::var(0), gx, tm::box_ty(gvar(0, gx, "U_T"))), l1x}};
      s.expected = inst_motive_typ(
          mot(2), Level::lub(Level::var(1), Level::var(0)), g,
          tm::box_ty(ty::pi(Level::var(1), Level::var(0), "x", gvar(1, g, "U_S"), gvar(0, gx, "U_T"))));
      s.expected_level = l1x;
      return s;
    }
    case BranchKind::Ty: {
      LocalCtx g = LocalCtx::var(0);
      s.psi_ext = {CtxBind{"g"}};
      s.expected = inst_motive_typ(mot(0), Level::succ(Level::var(0)), g,
                                   tm::box_ty(ty::universe(Level::var(0))));
      s.expected_level = l1x;
      return s;
    }
    case BranchKind::El: {
      // (l ; g, u_t : (g |-c Ty l : 1+l) ; x_t)
      LocalCtx g = LocalCtx::var(1);
      s.psi_ext = {CtxBind{"g"}, TrmBind{"u_t", LocalCtx::var(0), Layer::C,
                                         ty::universe(Level::var(0)), Level::succ(Level::var(0))}};
      s.gamma_ext = {{"x_t",
                      inst_motive_trm(mot(0), Level::succ(Level::var(0)), g,
                                      ty::universe(Level::var(0)), tm::box_tm(uvar(0, g, "u_t"))),
                      l2x}};
      s.expected = inst_motive_typ(mot(1), Level::var(0), g,
                                   tm::box_ty(ty::el(Level::var(0), uvar(0, g, "u_t"))));
      s.expected_level = l1x;
      return s;
    }
    case BranchKind::Var: {
      // (l ; g, U_T : (g |-d l), u_x : (g |-v U_T : l) ; -)
      LocalCtx g = LocalCtx::var(2);
      s.psi_ext = {CtxBind{"g"}, TypBind{"U_T", LocalCtx::var(0), Layer::D, Level::var(0)},
                   TrmBind{"u_x", LocalCtx::var(1), Layer::V,
                           gvar(0, LocalCtx::var(1), "U_T"), Level::var(0)}};
      s.expected = inst_motive_trm(mot(0), Level::var(0), g, gvar(1, g, "U_T"),
                                   tm::box_tm(uvar(0, g, "u_x")));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::NatCode: {
      LocalCtx g = LocalCtx::var(0);
      s.psi_ext = {CtxBind{"g"}};
      s.expected = inst_motive_trm(mot(0), Level::constant(1), g, ty::universe(Level::zero()),
                                   tm::box_tm(tm::nat()));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::PiCode: {
      // (l, l' ; g, u_s : (g |-c Ty l), u_t : ((g, x : El l u_s) |-c Ty l') ; x_s, x_t)
      LocalCtx g = LocalCtx::var(2);
      LocalCtx gx = g.extended("x", ty::el(Level::var(1), uvar(1, g, "u_s")), Level::var(1));
      s.psi_ext = {
          CtxBind{"g"},
          TrmBind{"u_s", LocalCtx::var(0), Layer::C, ty::universe(Level::var(1)),
                  Level::succ(Level::var(1))},
          TrmBind{"u_t",
                  LocalCtx::var(1).extended(
                      "x", ty::el(Level::var(1), uvar(0, LocalCtx::var(1), "u_s")), Level::var(1)),
                  Layer::C, ty::universe(Level::var(0)), Level::succ(Level::var(0))}};
      s.gamma_ext = {{"x_s",
                      inst_motive_trm(mot(0), Level::succ(Level::var(1)), g,
                                      ty::universe(Level::var(1)), tm::box_tm(uvar(1, g, "u_s"))),
                      l2x},
                     {"x_t",
                      inst_motive_trm(mot(1), Level::succ(Level::var(0)), gx,
                                      ty::universe(Level::var(0)), tm::box_tm(uvar(0, gx, "u_t"))),
                      l2x}};
      s.expected = inst_motive_trm(
          mot(2), Level::succ(Level::lub(Level::var(1), Level::var(0))), g,
          ty::universe(Level::lub(Level::var(1), Level::var(0))),
          tm::box_tm(tm::pi(Level::var(1), Level::var(0), "x", uvar(1, g, "u_s"), uvar(0, gx, "u_t"))));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::TyCode: {
      LocalCtx g = LocalCtx::var(0);
      s.psi_ext = {CtxBind{"g"}};
      s.expected = inst_motive_trm(mot(0), Level::plus(2, Level::var(0)), g,
                                   ty::universe(Level::succ(Level::var(0))),
                                   tm::box_tm(tm::universe(Level::var(0))));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::Zero: {
      LocalCtx g = LocalCtx::var(0);
      s.psi_ext = {CtxBind{"g"}};
      s.expected = inst_motive_trm(mot(0), Level::zero(), g, ty::nat(), tm::box_tm(tm::zero()));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::Succ: {
      // (- ; g, u_t : (g |-c Nat : 0) ; x_t)
      LocalCtx g = LocalCtx::var(1);
      s.psi_ext = {CtxBind{"g"},
                   TrmBind{"u_t", LocalCtx::var(0), Layer::C, ty::nat(), Level::zero()}};
      s.gamma_ext = {{"x_t",
                      inst_motive_trm(mot(0), Level::zero(), g, ty::nat(),
                                      tm::box_tm(uvar(0, g, "u_t"))),
                      l2x}};
      s.expected = inst_motive_trm(mot(1), Level::zero(), g, ty::nat(),
                                   tm::box_tm(tm::succ(uvar(0, g, "u_t"))));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::ElimNat: {
      // (l ; g, U_M : ((g, x:Nat) |-c l), u_s : (g |-c U_M[zero/x] : l),
      //  u_s' : ((g, x:Nat, y:U_M) |-c U_M[succ x/x] : l), u_t : (g |-c Nat : 0)
      //  ; x_M, x_s, x_s', x_t)
      LocalCtx g = LocalCtx::var(4);
      LocalCtx g_x = g.extended("x", ty::nat(), Level::zero());
      LocalCtx g_xy = g_x.extended("y", ty::global(3, lwk(g_x, 0), "U_M"), Level::var(0));
      // delta : g -> (g, x) sending x to zero / succ x / u_t
      auto um_at = [&](Term arg) {
        LocalSubst d = lwk(g, 0);
        d.entries.push_back(std::move(arg));
        return ty::global(3, std::move(d), "U_M");
      };
      {
        // binding-world variants (global indices inside each binding's own prefix)
        LocalCtx bg1 = LocalCtx::var(1);  // g as seen by u_s
        LocalCtx bg2 = LocalCtx::var(2);  // g as seen by u_s'
        LocalCtx bg2_x = bg2.extended("x", ty::nat(), Level::zero());
        LocalCtx bg2_xy = bg2_x.extended("y", ty::global(1, lwk(bg2_x, 0), "U_M"), Level::var(0));
        auto um_bind = [&](int um_idx, const LocalCtx& from, unsigned k, Term arg) {
          LocalSubst d = lwk(from, k);
          d.entries.push_back(std::move(arg));
          return ty::global(um_idx, std::move(d), "U_M");
        };
        s.psi_ext = {
            CtxBind{"g"},
            TypBind{"U_M", LocalCtx::var(0).extended("x", ty::nat(), Level::zero()), Layer::C,
                    Level::var(0)},
            TrmBind{"u_s", bg1, Layer::C, um_bind(0, bg1, 0, tm::zero()), Level::var(0)},
            TrmBind{"u_s'", bg2_xy, Layer::C,
                    um_bind(1, bg2, 2, tm::succ(tm::var(1, "x"))), Level::var(0)},
            TrmBind{"u_t", LocalCtx::var(3), Layer::C, ty::nat(), Level::zero()}};
      }
      s.gamma_ext = {
          {"x_M", inst_motive_typ(mot(0), Level::var(0), g_x, tm::box_ty(ty::global(3, lwk(g_x, 0), "U_M"))),
           l1x},
          {"x_s", inst_motive_trm(mot(1), Level::var(0), g, um_at(tm::zero()),
                                  tm::box_tm(uvar(2, g, "u_s"))),
           l2x},
          {"x_s'",
           inst_motive_trm(mot(2), Level::var(0), g_xy,
                           [&] {
                             LocalSubst d = lwk(g, 2);
                             d.entries.push_back(tm::succ(tm::var(1, "x")));
                             return ty::global(3, std::move(d), "U_M");
                           }(),
                           tm::box_tm(uvar(1, g_xy, "u_s'"))),
           l2x},
          {"x_t", inst_motive_trm(mot(3), Level::zero(), g, ty::nat(),
                                  tm::box_tm(uvar(0, g, "u_t"))),
           l2x}};
      Term elim_code = tm::elim_nat(
          Level::var(0), "x", ty::global(3, lwk(g_x, 0), "U_M"), uvar(2, g, "u_s"), "x", "y",
          tm::global(1, lwk(g_xy, 0), "u_s'"), uvar(0, g, "u_t"));
      s.expected = inst_motive_trm(mot(4), Level::var(0), g, um_at(uvar(0, g, "u_t")),
                                   tm::box_tm(std::move(elim_code)));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::Lam: {
      // (l, l' ; g, U_S : (g |-c l), U_T : ((g,x:U_S) |-d l'), u_t : ((g,x:U_S) |-c U_T : l')
      //  ; x_S, x_t)
      LocalCtx g = LocalCtx::var(3);
      LocalCtx gx = g.extended("x", gvar(2, g, "U_S"), Level::var(1));
      LocalCtx bgx = LocalCtx::var(1).extended("x", gvar(0, LocalCtx::var(1), "U_S"), Level::var(1));
      LocalCtx bgx2 = LocalCtx::var(2).extended("x", gvar(1, LocalCtx::var(2), "U_S"), Level::var(1));
      s.psi_ext = {CtxBind{"g"}, TypBind{"U_S", LocalCtx::var(0), Layer::C, Level::var(1)},
                   TypBind{"U_T", bgx, Layer::D, Level::var(0)},
                   TrmBind{"u_t", bgx2, Layer::C, gvar(0, bgx2, "U_T"), Level::var(0)}};
      s.gamma_ext = {
          {"x_S", inst_motive_typ(mot(0), Level::var(1), g, tm::box_ty(gvar(2, g, "U_S"))), l1x},
          {"x_t",
           inst_motive_trm(mot(1), Level::var(0), gx, gvar(1, gx, "U_T"),
                           tm::box_tm(uvar(0, gx, "u_t"))),
           l2x}};
      s.expected = inst_motive_trm(
          mot(2), Level::lub(Level::var(1), Level::var(0)), g,
          ty::pi(Level::var(1), Level::var(0), "x", gvar(2, g, "U_S"), gvar(1, gx, "U_T")),
          tm::box_tm(tm::lam(Level::var(1), Level::var(0), "x", gvar(2, g, "U_S"),
                             uvar(0, gx, "u_t"))));
      s.expected_level = l2x;
      return s;
    }
    case BranchKind::App: {
      // (l, l' ; g, U_S : (g |-c l), U_T : ((g,x:U_S) |-c l'),
      //  u_t : (g |-c Pi(x:U_S).U_T : l\/l'), u_s : (g |-c U_S : l)
      //  ; x_S, x_T, x_t, x_s)
      LocalCtx g = LocalCtx::var(4);
      LocalCtx gx = g.extended("x", gvar(3, g, "U_S"), Level::var(1));
      LocalCtx bgx = LocalCtx::var(1).extended("x", gvar(0, LocalCtx::var(1), "U_S"), Level::var(1));
      LocalCtx bg2 = LocalCtx::var(2);
      LocalCtx bg2x = bg2.extended("x", gvar(1, bg2, "U_S"), Level::var(1));
      LocalCtx bg3 = LocalCtx::var(3);
      s.psi_ext = {
          CtxBind{"g"}, TypBind{"U_S", LocalCtx::var(0), Layer::C, Level::var(1)},
          TypBind{"U_T", bgx, Layer::C, Level::var(0)},
          TrmBind{"u_t", bg2, Layer::C,
                  ty::pi(Level::var(1), Level::var(0), "x", gvar(1, bg2, "U_S"),
                         gvar(0, bg2x, "U_T")),
                  Level::lub(Level::var(1), Level::var(0))},
          TrmBind{"u_s", bg3, Layer::C, gvar(2, bg3, "U_S"), Level::var(1)}};
      Type pi_ty = ty::pi(Level::var(1), Level::var(0), "x", gvar(3, g, "U_S"), gvar(2, gx, "U_T"));
      s.gamma_ext = {
          {"x_S", inst_motive_typ(mot(0), Level::var(1), g, tm::box_ty(gvar(3, g, "U_S"))), l1x},
          {"x_T", inst_motive_typ(mot(1), Level::var(0), gx, tm::box_ty(gvar(2, gx, "U_T"))), l1x},
          {"x_t",
           inst_motive_trm(mot(2), Level::lub(Level::var(1), Level::var(0)), g, pi_ty,
                           tm::box_tm(uvar(1, g, "u_t"))),
           l2x},
          {"x_s",
           inst_motive_trm(mot(3), Level::var(1), g, gvar(3, g, "U_S"),
                           tm::box_tm(uvar(0, g, "u_s"))),
           l2x}};
      Type ut_at_us = [&] {
        LocalSubst d = lwk(g, 0);
        d.entries.push_back(uvar(0, g, "u_s"));
        return ty::global(2, std::move(d), "U_T");
      }();
      Term app_code = tm::app(uvar(1, g, "u_t"), Level::var(1), Level::var(0), "x",
                              gvar(3, g, "U_S"), gvar(2, gx, "U_T"), uvar(0, g, "u_s"));
      s.expected = inst_motive_trm(mot(4), Level::var(0), g, ut_at_us,
                                   tm::box_tm(std::move(app_code)));
      s.expected_level = l2x;
      return s;
    }
  }
  throw KernelError("branch_signature: unknown branch kind");
}

}  // namespace delam
