#pragma once

// Abstract syntax for all sorts: layers, types, terms, the three context
// sorts and the three substitution sorts, plus motives and branches for the
// mutual code recursors.
//
// Variables of every sort are de Bruijn indices with the innermost binder at
// index 0. Binder names are display annotations only; structural equality
// ignores them.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "delam/level.hpp"

namespace delam {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Layers

enum class Layer { V, C, D, M };

inline Layer typeof_layer(Layer i) { return i == Layer::M ? Layer::M : Layer::D; }
inline bool comp(Layer i) { return i == Layer::D || i == Layer::M; }
inline bool layer_leq(Layer a, Layer b) { return static_cast<int>(a) <= static_cast<int>(b); }
inline const char* layer_name(Layer i) {
  switch (i) {
    case Layer::V: return "v";
    case Layer::C: return "c";
    case Layer::D: return "d";
    case Layer::M: return "m";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Handles

struct TypeNode;
struct TermNode;

class Type {
 public:
  Type();  // Nat, as a harmless default
  const TypeNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

  static Type make(TypeNode n);

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

class Term {
 public:
  Term();  // zero, as a harmless default
  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

  static Term make(TermNode n);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

// ---------------------------------------------------------------------------
// Local contexts: a base (empty or a context variable) plus entries.
// |Γ| counts entries only; the base is opaque.

struct LocalCtxEntry {
  std::string name;
  Type type;
  Level level;
};

struct LocalCtx {
  std::optional<int> base;  // global index of the context variable, if any
  std::vector<LocalCtxEntry> entries;  // entries[0] is the outermost

  static LocalCtx empty() { return {}; }
  static LocalCtx var(int g) {
    LocalCtx r;
    r.base = g;
    return r;
  }

  std::size_t size() const { return entries.size(); }
  bool ends_with_var() const { return base.has_value(); }

  LocalCtx extended(std::string name, Type type, Level level) const {
    LocalCtx r = *this;
    r.entries.push_back(LocalCtxEntry{std::move(name), std::move(type), std::move(level)});
    return r;
  }
};

// ---------------------------------------------------------------------------
// Local substitutions: a base carrying the weakening count plus term entries.
// entries[0] substitutes the outermost entry of the target context.

struct LocalSubst {
  enum class Base { Empty, Weaken };

  Base base = Base::Empty;
  std::optional<int> base_var;  // Empty: the source context's variable, if any; Weaken: required
  unsigned base_count = 0;      // the hat value of the stripped base
  std::vector<Term> entries;

  static LocalSubst empty(std::optional<int> g, unsigned k) {
    LocalSubst r;
    r.base = Base::Empty;
    r.base_var = g;
    r.base_count = k;
    return r;
  }
  static LocalSubst weaken(int g, unsigned k) {
    LocalSubst r;
    r.base = Base::Weaken;
    r.base_var = g;
    r.base_count = k;
    return r;
  }

  LocalSubst extended(Term t) const {
    LocalSubst r = *this;
    r.entries.push_back(std::move(t));
    return r;
  }
};

inline unsigned lsubst_hat(const LocalSubst& d) { return d.base_count; }
inline std::optional<int> lsubst_check(const LocalSubst& d) { return d.base_var; }

// ---------------------------------------------------------------------------
// Global contexts: telescopes of context, type-code and term-code bindings.
// Stored components are well-formed in their own prefix; lookup re-weakens.

struct CtxBind {
  std::string name;
};
struct TypBind {
  std::string name;
  LocalCtx ctx;
  Layer layer;  // c or d
  Level level;
};
struct TrmBind {
  std::string name;
  LocalCtx ctx;
  Layer layer;  // v or c
  Type type;
  Level level;
};

using GlobalBind = std::variant<CtxBind, TypBind, TrmBind>;

struct GlobalCtx {
  std::vector<GlobalBind> binds;  // binds[0] is the outermost

  std::size_t size() const { return binds.size(); }
  GlobalCtx extended(GlobalBind b) const {
    GlobalCtx r = *this;
    r.binds.push_back(std::move(b));
    return r;
  }
};

// ---------------------------------------------------------------------------
// Global substitutions: positional entries for a source global context.

using GlobalEntry = std::variant<LocalCtx, Type, Term>;

struct GlobalSubst {
  std::vector<GlobalEntry> entries;  // entries[0] for the outermost binding

  GlobalSubst extended(GlobalEntry e) const {
    GlobalSubst r = *this;
    r.entries.push_back(std::move(e));
    return r;
  }
};

// ---------------------------------------------------------------------------
// Motives and branches of the mutual code recursors.
//
// Binder telescopes are fixed; substitution and the recursor machinery rely
// on the arities below. Telescope order is levels, then globals, then locals.

struct Motives {
  Type typ;  // binds (l ; g ; x_T)
  Type trm;  // binds (l ; g, U_T ; x_t)
};

enum class BranchKind {
  Nat,       // type Nat          (- ; g ; -)
  Pi,        // type Pi           (l, l' ; g, U_S, U_T ; x_S, x_T)
  Ty,        // type Ty           (l ; g ; -)
  El,        // type El           (l ; g, u_t ; x_t)
  Var,       // term x            (l ; g, U_T, u_x ; -)
  NatCode,   // term Nat          (- ; g ; -)
  PiCode,    // term Pi           (l, l' ; g, u_s, u_t ; x_s, x_t)
  TyCode,    // term Ty           (l ; g ; -)
  Zero,      // term zero         (- ; g ; -)
  Succ,      // term succ         (- ; g, u_t ; x_t)
  ElimNat,   // term elimNat      (l ; g, U_M, u_s, u_s', u_t ; x_M, x_s, x_s', x_t)
  Lam,       // term fun          (l, l' ; g, U_S, U_T, u_t ; x_S, x_t)
  App,       // term app          (l, l' ; g, U_S, U_T, u_t, u_s ; x_S, x_T, x_t, x_s)
};

struct BranchArity {
  int levels;
  int globals;
  int locals;
};

constexpr BranchArity branch_arity(BranchKind k) {
  switch (k) {
    case BranchKind::Nat: return {0, 1, 0};
    case BranchKind::Pi: return {2, 3, 2};
    case BranchKind::Ty: return {1, 1, 0};
    case BranchKind::El: return {1, 2, 1};
    case BranchKind::Var: return {1, 3, 0};
    case BranchKind::NatCode: return {0, 1, 0};
    case BranchKind::PiCode: return {2, 3, 2};
    case BranchKind::TyCode: return {1, 1, 0};
    case BranchKind::Zero: return {0, 1, 0};
    case BranchKind::Succ: return {0, 2, 1};
    case BranchKind::ElimNat: return {1, 5, 4};
    case BranchKind::Lam: return {2, 4, 2};
    case BranchKind::App: return {2, 5, 4};
  }
  return {0, 0, 0};
}

constexpr std::array<BranchKind, 13> kAllBranchKinds = {
    BranchKind::Nat,    BranchKind::Pi,      BranchKind::Ty,      BranchKind::El,
    BranchKind::Var,    BranchKind::NatCode, BranchKind::PiCode,  BranchKind::TyCode,
    BranchKind::Zero,   BranchKind::Succ,    BranchKind::ElimNat, BranchKind::Lam,
    BranchKind::App};

inline const char* branch_keyword(BranchKind k) {
  switch (k) {
    case BranchKind::Nat: return "nat";
    case BranchKind::Pi: return "pi";
    case BranchKind::Ty: return "ty";
    case BranchKind::El: return "el";
    case BranchKind::Var: return "var";
    case BranchKind::NatCode: return "nat'";
    case BranchKind::PiCode: return "pi'";
    case BranchKind::TyCode: return "ty'";
    case BranchKind::Zero: return "zero";
    case BranchKind::Succ: return "succ";
    case BranchKind::ElimNat: return "elimnat";
    case BranchKind::Lam: return "lam";
    case BranchKind::App: return "app";
  }
  return "?";
}

struct Branches {
  std::array<Term, 13> bodies;

  Term& at(BranchKind k) { return bodies[static_cast<std::size_t>(k)]; }
  const Term& at(BranchKind k) const { return bodies[static_cast<std::size_t>(k)]; }
};

// ---------------------------------------------------------------------------
// Type payloads

struct TyNat {};
struct TyPi {
  Level dom_level, cod_level;
  std::string binder;
  Type dom;
  Type cod;  // binds 1 local
};
struct TyTy {
  Level level;
};
struct TyUPi {
  unsigned var_count;  // > 0
  std::vector<std::string> binders;
  Level level;  // binds var_count levels
  Type body;    // binds var_count levels
};
struct TyEl {
  Level level;
  Term code;
};
struct TyGlobal {  // U^delta
  int index;
  LocalSubst subst;
  std::string name;
};
struct TyCtxPi {
  std::string binder;
  Level level;
  Type body;  // binds 1 global (g)
};
struct TyTyPi {
  std::string binder;
  LocalCtx ctx;
  Level bind_level, res_level;
  Type body;  // binds 1 global (U)
};
struct TyCodeTy {
  LocalCtx ctx;  // its own local context
  Level level;
};
struct TyCodeTm {
  LocalCtx ctx;  // its own local context
  Type type;     // lives in ctx
  Level level;
};

struct TypeNode {
  std::variant<TyNat, TyPi, TyTy, TyUPi, TyEl, TyGlobal, TyCtxPi, TyTyPi, TyCodeTy, TyCodeTm> v;
};

// ---------------------------------------------------------------------------
// Term payloads

struct TmVar {
  int index;
  std::string name;
};
struct TmGlobal {  // u^delta
  int index;
  LocalSubst subst;
  std::string name;
};
struct TmNat {};  // encoding of Nat
struct TmPi {     // encoding of Pi
  Level dom_level, cod_level;
  std::string binder;
  Term dom;
  Term cod;  // binds 1 local
};
struct TmTy {  // encoding of Ty
  Level level;
};
struct TmZero {};
struct TmSucc {
  Term arg;
};
struct TmElimNat {
  Level level;
  std::string motive_binder;
  Type motive;  // binds 1 local (x)
  Term base;
  std::string step_binder, step_rec_binder;
  Term step;  // binds 2 locals (x, y)
  Term scrut;
};
struct TmLam {
  Level dom_level, cod_level;
  std::string binder;
  Type dom;
  Term body;  // binds 1 local
};
struct TmApp {
  Term fn;
  Level dom_level, cod_level;
  std::string binder;
  Type dom;
  Type cod;  // binds 1 local
  Term arg;
};
struct TmULam {
  Level level;  // binds var_count levels
  unsigned var_count;
  std::vector<std::string> binders;
  Term body;  // binds var_count levels
};
struct TmUApp {
  Term fn;
  std::vector<Level> levels;  // in source order; the last is the innermost
};
struct TmCtxLam {
  Level level;
  std::string binder;
  Term body;  // binds 1 global (g)
};
struct TmCtxApp {
  Term fn;
  LocalCtx arg;
};
struct TmTyLam {
  Level bind_level, res_level;
  std::string binder;
  LocalCtx ctx;
  Term body;  // binds 1 global (U)
};
struct TmTyApp {
  Term fn;
  Type arg;  // lives in the TyPi's own context
};
struct TmBoxTy {
  Type body;  // lives in its code context
};
struct TmBoxTm {
  Term body;  // lives in its code context
};
struct TmLetBoxTy {
  Level res_level, code_level;
  LocalCtx ctx;
  std::string motive_binder;
  Type motive;  // binds 1 local (x_T)
  std::string binder;
  Term body;  // binds 1 global (U)
  Term scrut;
};
struct TmLetBoxTm {
  Level res_level, code_level;
  LocalCtx ctx;
  Type type;  // lives in ctx
  std::string motive_binder;
  Type motive;  // binds 1 local (x_t)
  std::string binder;
  Term body;  // binds 1 global (u)
  Term scrut;
};
struct TmElimTyp {
  Level typ_level, trm_level;  // l1, l2
  Motives motives;
  Branches branches;
  Level index_level;
  LocalCtx index_ctx;
  Term scrut;
};
struct TmElimTrm {
  Level typ_level, trm_level;  // l1, l2
  Motives motives;
  Branches branches;
  Level index_level;
  LocalCtx index_ctx;
  Type index_type;  // lives in index_ctx
  Term scrut;
};

struct TermNode {
  std::variant<TmVar, TmGlobal, TmNat, TmPi, TmTy, TmZero, TmSucc, TmElimNat, TmLam, TmApp,
               TmULam, TmUApp, TmCtxLam, TmCtxApp, TmTyLam, TmTyApp, TmBoxTy, TmBoxTm,
               TmLetBoxTy, TmLetBoxTm, TmElimTyp, TmElimTrm>
      v;
};

// ---------------------------------------------------------------------------
// Handle definitions

inline Type Type::make(TypeNode n) { return Type(std::make_shared<const TypeNode>(std::move(n))); }
inline Term Term::make(TermNode n) { return Term(std::make_shared<const TermNode>(std::move(n))); }

inline Type::Type() : node_(std::make_shared<const TypeNode>(TypeNode{TyNat{}})) {}
inline Term::Term() : node_(std::make_shared<const TermNode>(TermNode{TmZero{}})) {}

template <class T>
const T* Type::as() const {
  return std::get_if<T>(&node_->v);
}
template <class T>
const T* Term::as() const {
  return std::get_if<T>(&node_->v);
}

// ---------------------------------------------------------------------------
// Constructors

namespace ty {
inline Type nat() { return Type::make({TyNat{}}); }
inline Type pi(Level l, Level l2, std::string x, Type s, Type t) {
  return Type::make({TyPi{std::move(l), std::move(l2), std::move(x), std::move(s), std::move(t)}});
}
inline Type universe(Level l) { return Type::make({TyTy{std::move(l)}}); }
inline Type upi(unsigned n, std::vector<std::string> names, Level l, Type t) {
  return Type::make({TyUPi{n, std::move(names), std::move(l), std::move(t)}});
}
inline Type el(Level l, Term t) { return Type::make({TyEl{std::move(l), std::move(t)}}); }
inline Type global(int idx, LocalSubst d, std::string name = "U") {
  return Type::make({TyGlobal{idx, std::move(d), std::move(name)}});
}
inline Type ctx_pi(std::string g, Level l, Type t) {
  return Type::make({TyCtxPi{std::move(g), std::move(l), std::move(t)}});
}
inline Type ty_pi(std::string u, LocalCtx ctx, Level l, Level l2, Type t) {
  return Type::make({TyTyPi{std::move(u), std::move(ctx), std::move(l), std::move(l2), std::move(t)}});
}
inline Type code_ty(LocalCtx ctx, Level l) { return Type::make({TyCodeTy{std::move(ctx), std::move(l)}}); }
inline Type code_tm(LocalCtx ctx, Type t, Level l) {
  return Type::make({TyCodeTm{std::move(ctx), std::move(t), std::move(l)}});
}
}  // namespace ty

namespace tm {
inline Term var(int idx, std::string name = "x") { return Term::make({TmVar{idx, std::move(name)}}); }
inline Term global(int idx, LocalSubst d, std::string name = "u") {
  return Term::make({TmGlobal{idx, std::move(d), std::move(name)}});
}
inline Term nat() { return Term::make({TmNat{}}); }
inline Term pi(Level l, Level l2, std::string x, Term s, Term t) {
  return Term::make({TmPi{std::move(l), std::move(l2), std::move(x), std::move(s), std::move(t)}});
}
inline Term universe(Level l) { return Term::make({TmTy{std::move(l)}}); }
inline Term zero() { return Term::make({TmZero{}}); }
inline Term succ(Term t) { return Term::make({TmSucc{std::move(t)}}); }
inline Term elim_nat(Level l, std::string xm, Type motive, Term base, std::string xs, std::string ys,
                     Term step, Term scrut) {
  return Term::make({TmElimNat{std::move(l), std::move(xm), std::move(motive), std::move(base),
                               std::move(xs), std::move(ys), std::move(step), std::move(scrut)}});
}
inline Term lam(Level l, Level l2, std::string x, Type s, Term body) {
  return Term::make({TmLam{std::move(l), std::move(l2), std::move(x), std::move(s), std::move(body)}});
}
inline Term app(Term fn, Level l, Level l2, std::string x, Type s, Type t, Term arg) {
  return Term::make({TmApp{std::move(fn), std::move(l), std::move(l2), std::move(x), std::move(s),
                           std::move(t), std::move(arg)}});
}
inline Term ulam(Level l, unsigned n, std::vector<std::string> names, Term body) {
  return Term::make({TmULam{std::move(l), n, std::move(names), std::move(body)}});
}
inline Term uapp(Term fn, std::vector<Level> ls) {
  return Term::make({TmUApp{std::move(fn), std::move(ls)}});
}
inline Term ctx_lam(Level l, std::string g, Term body) {
  return Term::make({TmCtxLam{std::move(l), std::move(g), std::move(body)}});
}
inline Term ctx_app(Term fn, LocalCtx arg) {
  return Term::make({TmCtxApp{std::move(fn), std::move(arg)}});
}
inline Term ty_lam(Level l, Level l2, std::string u, LocalCtx ctx, Term body) {
  return Term::make({TmTyLam{std::move(l), std::move(l2), std::move(u), std::move(ctx), std::move(body)}});
}
inline Term ty_app(Term fn, Type arg) { return Term::make({TmTyApp{std::move(fn), std::move(arg)}}); }
inline Term box_ty(Type t) { return Term::make({TmBoxTy{std::move(t)}}); }
inline Term box_tm(Term t) { return Term::make({TmBoxTm{std::move(t)}}); }
inline Term letbox_ty(Level l2, Level l, LocalCtx ctx, std::string xt, Type motive, std::string u,
                      Term body, Term scrut) {
  return Term::make({TmLetBoxTy{std::move(l2), std::move(l), std::move(ctx), std::move(xt),
                                std::move(motive), std::move(u), std::move(body), std::move(scrut)}});
}
inline Term letbox_tm(Level l2, Level l, LocalCtx ctx, Type type, std::string xt, Type motive,
                      std::string u, Term body, Term scrut) {
  return Term::make({TmLetBoxTm{std::move(l2), std::move(l), std::move(ctx), std::move(type),
                                std::move(xt), std::move(motive), std::move(u), std::move(body),
                                std::move(scrut)}});
}
inline Term elim_typ(Level l1, Level l2, Motives m, Branches b, Level l, LocalCtx ctx, Term scrut) {
  return Term::make({TmElimTyp{std::move(l1), std::move(l2), std::move(m), std::move(b), std::move(l),
                               std::move(ctx), std::move(scrut)}});
}
inline Term elim_trm(Level l1, Level l2, Motives m, Branches b, Level l, LocalCtx ctx, Type t,
                     Term scrut) {
  return Term::make({TmElimTrm{std::move(l1), std::move(l2), std::move(m), std::move(b), std::move(l),
                               std::move(ctx), std::move(t), std::move(scrut)}});
}
}  // namespace tm

// ---------------------------------------------------------------------------
// Raw lookups. Components are returned exactly as stored (valid in their own
// prefix); the weakening-on-lookup variants live with the substitution
// operations.

inline const LocalCtxEntry& lctx_entry(const LocalCtx& ctx, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= ctx.entries.size())
    throw KernelError("lctx_entry: index out of range");
  return ctx.entries[ctx.entries.size() - 1 - static_cast<std::size_t>(index)];
}

inline const GlobalBind& gctx_bind_raw(const GlobalCtx& psi, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= psi.binds.size())
    throw KernelError("gctx_bind_raw: index out of range");
  return psi.binds[psi.binds.size() - 1 - static_cast<std::size_t>(index)];
}

// Looks up a term entry of a local substitution; indexing past the entries
// resolves through a weakening base or fails on an empty base.
inline Term lsubst_lookup(const LocalSubst& d, int index) {
  if (index < 0) throw KernelError("lsubst_lookup: negative index");
  std::size_t i = static_cast<std::size_t>(index);
  if (i < d.entries.size()) return d.entries[d.entries.size() - 1 - i];
  if (d.base == LocalSubst::Base::Weaken)
    return tm::var(static_cast<int>(i - d.entries.size() + d.base_count));
  throw KernelError("lsubst_lookup: variable not covered by substitution");
}

// ---------------------------------------------------------------------------
// Structural equality. Strict compares levels syntactically; ModuloLevels
// compares them with level_equiv, which is the equality of static code.

enum class LevelCmp { Strict, ModuloLevels };

inline bool aeq(const Type& a, const Type& b, LevelCmp mode = LevelCmp::Strict);
inline bool aeq(const Term& a, const Term& b, LevelCmp mode = LevelCmp::Strict);

inline bool aeq(const Level& a, const Level& b, LevelCmp mode) {
  if (mode == LevelCmp::Strict) return a == b;
  return level_equiv(UnivCtx{}, a, b);
}

inline bool aeq(const std::vector<Level>& a, const std::vector<Level>& b, LevelCmp mode) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!aeq(a[i], b[i], mode)) return false;
  return true;
}

inline bool aeq(const LocalCtx& a, const LocalCtx& b, LevelCmp mode = LevelCmp::Strict) {
  if (a.base != b.base || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!aeq(a.entries[i].type, b.entries[i].type, mode)) return false;
    if (!aeq(a.entries[i].level, b.entries[i].level, mode)) return false;
  }
  return true;
}

inline bool aeq(const LocalSubst& a, const LocalSubst& b, LevelCmp mode = LevelCmp::Strict) {
  if (a.base != b.base || a.base_var != b.base_var || a.base_count != b.base_count) return false;
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (!aeq(a.entries[i], b.entries[i], mode)) return false;
  return true;
}

inline bool aeq(const Motives& a, const Motives& b, LevelCmp mode = LevelCmp::Strict) {
  return aeq(a.typ, b.typ, mode) && aeq(a.trm, b.trm, mode);
}

inline bool aeq(const Branches& a, const Branches& b, LevelCmp mode = LevelCmp::Strict) {
  for (std::size_t i = 0; i < a.bodies.size(); ++i)
    if (!aeq(a.bodies[i], b.bodies[i], mode)) return false;
  return true;
}

inline bool aeq(const GlobalSubst& a, const GlobalSubst& b, LevelCmp mode = LevelCmp::Strict) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const GlobalEntry& x = a.entries[i];
    const GlobalEntry& y = b.entries[i];
    if (x.index() != y.index()) return false;
    bool same = std::visit(
        overloaded{[&](const LocalCtx& g) { return aeq(g, std::get<LocalCtx>(y), mode); },
                   [&](const Type& t) { return aeq(t, std::get<Type>(y), mode); },
                   [&](const Term& t) { return aeq(t, std::get<Term>(y), mode); }},
        x);
    if (!same) return false;
  }
  return true;
}

inline bool aeq(const GlobalCtx& a, const GlobalCtx& b, LevelCmp mode = LevelCmp::Strict) {
  if (a.binds.size() != b.binds.size()) return false;
  for (std::size_t i = 0; i < a.binds.size(); ++i) {
    const GlobalBind& x = a.binds[i];
    const GlobalBind& y = b.binds[i];
    if (x.index() != y.index()) return false;
    bool same = std::visit(
        overloaded{[&](const CtxBind&) { return true; },
                   [&](const TypBind& t) {
                     const auto& o = std::get<TypBind>(y);
                     return t.layer == o.layer && aeq(t.ctx, o.ctx, mode) && aeq(t.level, o.level, mode);
                   },
                   [&](const TrmBind& t) {
                     const auto& o = std::get<TrmBind>(y);
                     return t.layer == o.layer && aeq(t.ctx, o.ctx, mode) && aeq(t.type, o.type, mode) &&
                            aeq(t.level, o.level, mode);
                   }},
        x);
    if (!same) return false;
  }
  return true;
}

inline bool aeq(const Type& a, const Type& b, LevelCmp mode) {
  if (&a.node() == &b.node()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      overloaded{
          [&](const TyNat&) { return true; },
          [&](const TyPi& x) {
            const auto& y = *b.as<TyPi>();
            return aeq(x.dom_level, y.dom_level, mode) && aeq(x.cod_level, y.cod_level, mode) &&
                   aeq(x.dom, y.dom, mode) && aeq(x.cod, y.cod, mode);
          },
          [&](const TyTy& x) { return aeq(x.level, b.as<TyTy>()->level, mode); },
          [&](const TyUPi& x) {
            const auto& y = *b.as<TyUPi>();
            return x.var_count == y.var_count && aeq(x.level, y.level, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TyEl& x) {
            const auto& y = *b.as<TyEl>();
            return aeq(x.level, y.level, mode) && aeq(x.code, y.code, mode);
          },
          [&](const TyGlobal& x) {
            const auto& y = *b.as<TyGlobal>();
            return x.index == y.index && aeq(x.subst, y.subst, mode);
          },
          [&](const TyCtxPi& x) {
            const auto& y = *b.as<TyCtxPi>();
            return aeq(x.level, y.level, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TyTyPi& x) {
            const auto& y = *b.as<TyTyPi>();
            return aeq(x.ctx, y.ctx, mode) && aeq(x.bind_level, y.bind_level, mode) &&
                   aeq(x.res_level, y.res_level, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TyCodeTy& x) {
            const auto& y = *b.as<TyCodeTy>();
            return aeq(x.ctx, y.ctx, mode) && aeq(x.level, y.level, mode);
          },
          [&](const TyCodeTm& x) {
            const auto& y = *b.as<TyCodeTm>();
            return aeq(x.ctx, y.ctx, mode) && aeq(x.type, y.type, mode) && aeq(x.level, y.level, mode);
          }},
      a.node().v);
}

inline bool aeq(const Term& a, const Term& b, LevelCmp mode) {
  if (&a.node() == &b.node()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      overloaded{
          [&](const TmVar& x) { return x.index == b.as<TmVar>()->index; },
          [&](const TmGlobal& x) {
            const auto& y = *b.as<TmGlobal>();
            return x.index == y.index && aeq(x.subst, y.subst, mode);
          },
          [&](const TmNat&) { return true; },
          [&](const TmPi& x) {
            const auto& y = *b.as<TmPi>();
            return aeq(x.dom_level, y.dom_level, mode) && aeq(x.cod_level, y.cod_level, mode) &&
                   aeq(x.dom, y.dom, mode) && aeq(x.cod, y.cod, mode);
          },
          [&](const TmTy& x) { return aeq(x.level, b.as<TmTy>()->level, mode); },
          [&](const TmZero&) { return true; },
          [&](const TmSucc& x) { return aeq(x.arg, b.as<TmSucc>()->arg, mode); },
          [&](const TmElimNat& x) {
            const auto& y = *b.as<TmElimNat>();
            return aeq(x.level, y.level, mode) && aeq(x.motive, y.motive, mode) &&
                   aeq(x.base, y.base, mode) && aeq(x.step, y.step, mode) && aeq(x.scrut, y.scrut, mode);
          },
          [&](const TmLam& x) {
            const auto& y = *b.as<TmLam>();
            return aeq(x.dom_level, y.dom_level, mode) && aeq(x.cod_level, y.cod_level, mode) &&
                   aeq(x.dom, y.dom, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TmApp& x) {
            const auto& y = *b.as<TmApp>();
            return aeq(x.fn, y.fn, mode) && aeq(x.dom_level, y.dom_level, mode) &&
                   aeq(x.cod_level, y.cod_level, mode) && aeq(x.dom, y.dom, mode) &&
                   aeq(x.cod, y.cod, mode) && aeq(x.arg, y.arg, mode);
          },
          [&](const TmULam& x) {
            const auto& y = *b.as<TmULam>();
            return x.var_count == y.var_count && aeq(x.level, y.level, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TmUApp& x) {
            const auto& y = *b.as<TmUApp>();
            return aeq(x.fn, y.fn, mode) && aeq(x.levels, y.levels, mode);
          },
          [&](const TmCtxLam& x) {
            const auto& y = *b.as<TmCtxLam>();
            return aeq(x.level, y.level, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TmCtxApp& x) {
            const auto& y = *b.as<TmCtxApp>();
            return aeq(x.fn, y.fn, mode) && aeq(x.arg, y.arg, mode);
          },
          [&](const TmTyLam& x) {
            const auto& y = *b.as<TmTyLam>();
            return aeq(x.bind_level, y.bind_level, mode) && aeq(x.res_level, y.res_level, mode) &&
                   aeq(x.ctx, y.ctx, mode) && aeq(x.body, y.body, mode);
          },
          [&](const TmTyApp& x) {
            const auto& y = *b.as<TmTyApp>();
            return aeq(x.fn, y.fn, mode) && aeq(x.arg, y.arg, mode);
          },
          [&](const TmBoxTy& x) { return aeq(x.body, b.as<TmBoxTy>()->body, mode); },
          [&](const TmBoxTm& x) { return aeq(x.body, b.as<TmBoxTm>()->body, mode); },
          [&](const TmLetBoxTy& x) {
            const auto& y = *b.as<TmLetBoxTy>();
            return aeq(x.res_level, y.res_level, mode) && aeq(x.code_level, y.code_level, mode) &&
                   aeq(x.ctx, y.ctx, mode) && aeq(x.motive, y.motive, mode) && aeq(x.body, y.body, mode) &&
                   aeq(x.scrut, y.scrut, mode);
          },
          [&](const TmLetBoxTm& x) {
            const auto& y = *b.as<TmLetBoxTm>();
            return aeq(x.res_level, y.res_level, mode) && aeq(x.code_level, y.code_level, mode) &&
                   aeq(x.ctx, y.ctx, mode) && aeq(x.type, y.type, mode) && aeq(x.motive, y.motive, mode) &&
                   aeq(x.body, y.body, mode) && aeq(x.scrut, y.scrut, mode);
          },
          [&](const TmElimTyp& x) {
            const auto& y = *b.as<TmElimTyp>();
            return aeq(x.typ_level, y.typ_level, mode) && aeq(x.trm_level, y.trm_level, mode) &&
                   aeq(x.motives, y.motives, mode) && aeq(x.branches, y.branches, mode) &&
                   aeq(x.index_level, y.index_level, mode) && aeq(x.index_ctx, y.index_ctx, mode) &&
                   aeq(x.scrut, y.scrut, mode);
          },
          [&](const TmElimTrm& x) {
            const auto& y = *b.as<TmElimTrm>();
            return aeq(x.typ_level, y.typ_level, mode) && aeq(x.trm_level, y.trm_level, mode) &&
                   aeq(x.motives, y.motives, mode) && aeq(x.branches, y.branches, mode) &&
                   aeq(x.index_level, y.index_level, mode) && aeq(x.index_ctx, y.index_ctx, mode) &&
                   aeq(x.index_type, y.index_type, mode) && aeq(x.scrut, y.scrut, mode);
          }},
      a.node().v);
}

}  // namespace delam
