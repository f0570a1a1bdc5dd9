#pragma once

// Recursive-descent parser for the surface syntax (docs/grammar.md).
// Every binder form is keyword-prefixed with a fixed arity, so the grammar
// needs no backtracking beyond one-token lookahead. Names resolve to de
// Bruijn indices against scope stacks; definitions are transparent
// abbreviations expanded at use.

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delam/branches.hpp"

namespace delam {

struct SourcePos {
  int line = 1;
  int col = 1;
};

struct ParseError : std::runtime_error {
  SourcePos pos;
  ParseError(SourcePos p, const std::string& what)
      : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + what),
        pos(p) {}
};

struct Definition {
  std::string name;
  Layer layer;
  Type type;
  Level level;
  Term term;
};

struct SourceFile {
  UnivCtx uctx;
  GlobalCtx gctx;
  std::vector<Definition> defs;
};

namespace parser_detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space();
    tok_.pos = pos_;
    if (i_ >= src_.size()) {
      tok_ = Token{Token::Kind::End, "", pos_};
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i_ < src_.size()) {
        char d = src_[i_];
        bool ident_char = std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'';
        // a single dash joins identifier parts (as in level-vars); a double
        // dash starts a comment
        bool joining_dash = d == '-' && i_ + 1 < src_.size() &&
                            (std::isalnum(static_cast<unsigned char>(src_[i_ + 1])) ||
                             src_[i_ + 1] == '_');
        if (!ident_char && !joining_dash) break;
        s += d;
        bump();
      }
      tok_ = Token{Token::Kind::Ident, s, tok_.pos};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        s += src_[i_];
        bump();
      }
      tok_ = Token{Token::Kind::Number, s, tok_.pos};
      return;
    }
    // multi-char punctuation first
    static const char* two[] = {"|-", ":=", "=>", "\\/"};
    for (const char* p : two) {
      if (src_.substr(i_, 2) == p) {
        bump();
        bump();
        tok_ = Token{Token::Kind::Punct, p, tok_.pos};
        return;
      }
    }
    std::string s(1, c);
    bump();
    tok_ = Token{Token::Kind::Punct, s, tok_.pos};
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '-' && i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
        while (i_ < src_.size() && src_[i_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
  Token tok_;
};

enum class GlobalKind { Ctx, Typ, Trm };

struct GlobalScopeEntry {
  std::string name;
  GlobalKind kind;
  LocalCtx ctx;            // the binding's context, in the world just before this binder
  std::size_t levels_at_bind = 0;
};

struct Scope {
  std::vector<std::string> levels;          // innermost last
  std::vector<GlobalScopeEntry> globals;    // innermost last
  std::vector<std::string> locals;          // innermost last
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  SourceFile parse_file() {
    SourceFile f;
    bool seen_global = false, seen_def = false;
    while (lex_.peek().kind != Token::Kind::End) {
      Token t = expect_ident("declaration");
      if (t.text == "level-vars") {
        if (!f.uctx.names.empty() || seen_global || seen_def)
          fail(t.pos, "level-vars must appear once, before other declarations");
        while (lex_.peek().kind == Token::Kind::Ident) {
          std::string n = lex_.next().text;
          f.uctx.names.push_back(n);
          scope_.levels.push_back(n);
        }
        if (f.uctx.names.empty()) fail(t.pos, "level-vars needs at least one name");
        preamble_levels_ = scope_.levels.size();
        expect_punct(";");
      } else if (t.text == "global") {
        if (seen_def) fail(t.pos, "global declarations must precede definitions");
        seen_global = true;
        parse_global(f);
      } else if (t.text == "def") {
        seen_def = true;
        parse_def(f);
      } else {
        fail(t.pos, "expected level-vars, global or def, found '" + t.text + "'");
      }
    }
    return f;
  }

  // Parses a standalone level expression against the given context.
  static Level parse_level_expr(std::string_view text, const UnivCtx& uctx) {
    Parser p(text);
    p.scope_.levels = uctx.names;
    Level l = p.parse_level();
    if (p.lex_.peek().kind != Token::Kind::End)
      p.fail(p.lex_.peek().pos, "trailing input after level expression");
    return l;
  }

 private:
  [[noreturn]] void fail(SourcePos pos, const std::string& msg) { throw ParseError(pos, msg); }

  Token expect_ident(const char* what) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Ident) fail(t.pos, std::string("expected ") + what);
    return t;
  }
  void expect_punct(const std::string& p) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Punct || t.text != p)
      fail(t.pos, "expected '" + p + "', found '" + t.text + "'");
  }
  void expect_keyword(const std::string& k) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Ident || t.text != k)
      fail(t.pos, "expected '" + k + "', found '" + t.text + "'");
  }
  bool peek_punct(const std::string& p) const {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }
  bool peek_ident(const std::string& s) const {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
  }
  bool eat_punct(const std::string& p) {
    if (!peek_punct(p)) return false;
    lex_.next();
    return true;
  }

  Layer parse_layer() {
    Token t = expect_ident("layer (v, c, d or m)");
    if (t.text == "v") return Layer::V;
    if (t.text == "c") return Layer::C;
    if (t.text == "d") return Layer::D;
    if (t.text == "m") return Layer::M;
    fail(t.pos, "unknown layer '" + t.text + "'");
  }

  // ---------------------------------------------------------------- levels

  Level parse_level() {
    Level l = parse_level1();
    if (peek_punct("\\/")) {
      lex_.next();
      return Level::lub(std::move(l), parse_level());  // right associated
    }
    return l;
  }

  Level parse_level1() {
    Token t = lex_.next();
    if (t.kind == Token::Kind::Number) {
      std::uint64_t n = std::stoull(t.text);
      if (peek_punct("+")) {
        lex_.next();
        return Level::plus(n, parse_level1());
      }
      return Level::constant(n);
    }
    if (t.kind == Token::Kind::Ident) {
      // omega is accepted syntactically; the checker admits it only as the
      // level of a universe-polymorphic definition
      if (t.text == "omega") return Level::omega();
      for (std::size_t i = scope_.levels.size(); i-- > 0;) {
        if (scope_.levels[i] == t.text)
          return Level::var(static_cast<int>(scope_.levels.size() - 1 - i));
      }
      fail(t.pos, "unknown universe level variable '" + t.text + "'");
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      Level l = parse_level();
      expect_punct(")");
      return l;
    }
    fail(t.pos, "expected a universe level");
  }

  // ------------------------------------------------------------- contexts

  // Parses a local context; the entries extend the local scope in place, so
  // callers must save and restore scope_.locals around it when needed.
  LocalCtx parse_lctx() {
    LocalCtx ctx;
    Token t = lex_.next();
    if (t.kind == Token::Kind::Punct && t.text == ".") {
      // empty base
    } else if (t.kind == Token::Kind::Ident) {
      int idx = lookup_global(t);
      if (scope_.globals[scope_.globals.size() - 1 - static_cast<std::size_t>(idx)].kind !=
          GlobalKind::Ctx)
        fail(t.pos, "'" + t.text + "' is not a context variable");
      ctx.base = idx;
    } else {
      fail(t.pos, "expected '.' or a context variable");
    }
    while (eat_punct(",")) {
      Token n = expect_ident("variable name");
      expect_punct(":");
      Type ty = parse_type();
      expect_punct("@");
      Level l = parse_level();
      ctx = ctx.extended(n.text, ty, l);
      scope_.locals.push_back(n.text);
    }
    return ctx;
  }

  LocalCtx parse_lctx_isolated() {
    auto saved = scope_.locals;
    scope_.locals.clear();
    LocalCtx ctx = parse_lctx();
    scope_.locals = std::move(saved);
    return ctx;
  }

  // ------------------------------------------------------- identifiers

  int lookup_global(const Token& t) {
    for (std::size_t i = scope_.globals.size(); i-- > 0;) {
      if (scope_.globals[i].name == t.text) return static_cast<int>(scope_.globals.size() - 1 - i);
    }
    fail(t.pos, "unknown global variable '" + t.text + "'");
  }

  const GlobalScopeEntry& global_entry(int idx) const {
    return scope_.globals[scope_.globals.size() - 1 - static_cast<std::size_t>(idx)];
  }

  // The binding's local context, weakened into the current scope.
  LocalCtx global_ctx_now(int idx) const {
    const GlobalScopeEntry& e = global_entry(idx);
    std::size_t pos = scope_.globals.size() - 1 - static_cast<std::size_t>(idx);
    int gshift_by = static_cast<int>(scope_.globals.size() - pos);
    int ushift_by = static_cast<int>(scope_.levels.size() - e.levels_at_bind);
    return gshift(ushift(e.ctx, ushift_by), gshift_by);
  }

  // Optional explicit substitution after a global variable; defaults to the
  // identity over the binding's context.
  LocalSubst parse_subst_for(int idx, SourcePos pos) {
    LocalCtx target = global_ctx_now(idx);
    if (!peek_punct("^")) return lwk(target, 0);
    lex_.next();
    if (peek_ident("wk")) {
      lex_.next();
      expect_punct("(");
      Token n = lex_.next();
      if (n.kind != Token::Kind::Number) fail(n.pos, "expected a weakening count");
      expect_punct(")");
      return lwk(target, static_cast<unsigned>(std::stoul(n.text)));
    }
    expect_punct("(");
    LocalSubst base;
    bool id_base = false;
    if (peek_ident("id")) {
      lex_.next();
      id_base = true;
    } else if (peek_punct(".")) {
      lex_.next();
      Token n = lex_.next();
      if (n.kind != Token::Kind::Number) fail(n.pos, "expected a count after '.'");
      std::optional<int> g;
      if (lex_.peek().kind == Token::Kind::Ident && !peek_ident("id")) {
        Token gt = lex_.next();
        g = lookup_global(gt);
      }
      base = LocalSubst::empty(g, static_cast<unsigned>(std::stoul(n.text)));
    } else if (peek_ident("wk")) {
      lex_.next();
      Token n = lex_.next();
      if (n.kind != Token::Kind::Number) fail(n.pos, "expected a count after 'wk'");
      Token gt = expect_ident("context variable");
      base = LocalSubst::weaken(lookup_global(gt), static_cast<unsigned>(std::stoul(n.text)));
    } else {
      fail(lex_.peek().pos, "expected a substitution base ('.', 'wk' or 'id')");
    }
    std::vector<Term> entries;
    while (eat_punct(",")) {
      Term t = parse_term();
      expect_punct("/");
      expect_ident("target variable name");  // display only
      entries.push_back(std::move(t));
    }
    expect_punct(")");
    if (id_base) {
      if (entries.size() > target.size())
        fail(pos, "substitution has more entries than the target context");
      LocalCtx prefix = target;
      prefix.entries.resize(target.entries.size() - entries.size());
      base = lwk(prefix, 0);
    }
    for (Term& t : entries) base.entries.push_back(std::move(t));
    return base;
  }

  // ----------------------------------------------------------------- types

  Type parse_type() {
    Token t = lex_.next();
    if (t.kind == Token::Kind::Punct) {
      if (t.text == "(") {
        Type r = parse_type();
        expect_punct(")");
        return r;
      }
      if (t.text == "[") return parse_code_type();
      fail(t.pos, "expected a type");
    }
    if (t.kind != Token::Kind::Ident) fail(t.pos, "expected a type");
    const std::string& k = t.text;
    if (k == "Nat") return ty::nat();
    if (k == "Ty") return ty::universe(parse_level());
    if (k == "El") {
      Level l = parse_level();
      return ty::el(std::move(l), parse_term());
    }
    if (k == "Pi") {
      expect_punct("(");
      Token x = expect_ident("variable name");
      expect_punct(":");
      Type dom = parse_type();
      expect_punct("@");
      Level ld = parse_level();
      expect_punct(")");
      expect_punct("@");
      Level lc = parse_level();
      expect_punct(".");
      scope_.locals.push_back(x.text);
      Type cod = parse_type();
      scope_.locals.pop_back();
      return ty::pi(std::move(ld), std::move(lc), x.text, std::move(dom), std::move(cod));
    }
    if (k == "UPi") {
      std::vector<std::string> names = parse_level_binders();
      expect_punct("@");
      Level l = parse_level();
      expect_punct(".");
      Type body = parse_type();
      pop_levels(names.size());
      return ty::upi(static_cast<unsigned>(names.size()), names, std::move(l), std::move(body));
    }
    if (k == "CtxPi") {
      expect_punct("(");
      Token g = expect_ident("context variable name");
      expect_punct(")");
      expect_punct("@");
      Level l = parse_level();
      expect_punct(".");
      push_global(g.text, GlobalKind::Ctx, LocalCtx::empty());
      Type body = parse_type();
      scope_.globals.pop_back();
      return ty::ctx_pi(g.text, std::move(l), std::move(body));
    }
    if (k == "TyPi") {
      expect_punct("(");
      Token u = expect_ident("type variable name");
      expect_punct(":");
      expect_punct("[");
      LocalCtx ctx = parse_lctx_isolated();
      expect_punct("|-");
      expect_keyword("Ty");
      Level bl = parse_level();
      expect_punct("]");
      expect_punct(")");
      expect_punct("@");
      Level rl = parse_level();
      expect_punct(".");
      push_global(u.text, GlobalKind::Typ, ctx);
      Type body = parse_type();
      scope_.globals.pop_back();
      return ty::ty_pi(u.text, std::move(ctx), std::move(bl), std::move(rl), std::move(body));
    }
    // a global type variable with an optional substitution
    int idx = lookup_global_of_kind(t, GlobalKind::Typ);
    LocalSubst d = parse_subst_for(idx, t.pos);
    return ty::global(idx, std::move(d), t.text);
  }

  Type parse_code_type() {
    auto saved = scope_.locals;
    scope_.locals.clear();
    LocalCtx ctx = parse_lctx();
    expect_punct("|-");
    // [D |- Ty l] is code of types unless a ':' ascription follows
    if (peek_ident("Ty")) {
      lex_.next();
      Level l = parse_level();
      if (eat_punct("]")) {
        scope_.locals = std::move(saved);
        return ty::code_ty(std::move(ctx), std::move(l));
      }
      expect_punct(":");
      Level lvl = parse_level();
      expect_punct("]");
      scope_.locals = std::move(saved);
      return ty::code_tm(std::move(ctx), ty::universe(std::move(l)), std::move(lvl));
    }
    Type t = parse_type();
    expect_punct(":");
    Level l = parse_level();
    expect_punct("]");
    scope_.locals = std::move(saved);
    return ty::code_tm(std::move(ctx), std::move(t), std::move(l));
  }

  int lookup_global_of_kind(const Token& t, GlobalKind want) {
    int idx = lookup_global(t);
    GlobalKind k = global_entry(idx).kind;
    if (k != want)
      fail(t.pos, "'" + t.text + "' is not a " +
                      (want == GlobalKind::Typ
                           ? "type"
                           : (want == GlobalKind::Trm ? "term" : "context")) +
                      " variable");
    return idx;
  }

  // ----------------------------------------------------------------- terms

  Term parse_term() {
    Token t = lex_.next();
    if (t.kind == Token::Kind::Punct) {
      if (t.text == "(") {
        Term r = parse_term();
        expect_punct(")");
        return r;
      }
      fail(t.pos, "expected a term");
    }
    if (t.kind != Token::Kind::Ident) fail(t.pos, "expected a term");
    const std::string& k = t.text;
    if (k == "zero") return tm::zero();
    if (k == "succ") return tm::succ(parse_term());
    if (k == "Nat") return tm::nat();
    if (k == "Ty") return tm::universe(parse_level());
    if (k == "Pi") {
      expect_punct("(");
      Token x = expect_ident("variable name");
      expect_punct(":");
      Term dom = parse_term();
      expect_punct("@");
      Level ld = parse_level();
      expect_punct(")");
      expect_punct("@");
      Level lc = parse_level();
      expect_punct(".");
      scope_.locals.push_back(x.text);
      Term cod = parse_term();
      scope_.locals.pop_back();
      return tm::pi(std::move(ld), std::move(lc), x.text, std::move(dom), std::move(cod));
    }
    if (k == "elimNat") {
      expect_punct("(");
      Level l = parse_level();
      expect_punct(")");
      expect_punct("(");
      Token xm = expect_ident("motive variable");
      expect_punct(".");
      scope_.locals.push_back(xm.text);
      Type motive = parse_type();
      scope_.locals.pop_back();
      expect_punct(")");
      expect_punct("(");
      Term base = parse_term();
      expect_punct(")");
      expect_punct("(");
      Token xs = expect_ident("step variable");
      Token ys = expect_ident("recursive-call variable");
      expect_punct(".");
      scope_.locals.push_back(xs.text);
      scope_.locals.push_back(ys.text);
      Term step = parse_term();
      scope_.locals.pop_back();
      scope_.locals.pop_back();
      expect_punct(")");
      expect_punct("(");
      Term scrut = parse_term();
      expect_punct(")");
      return tm::elim_nat(std::move(l), xm.text, std::move(motive), std::move(base), xs.text,
                          ys.text, std::move(step), std::move(scrut));
    }
    if (k == "fun") {
      expect_punct("(");
      Token x = expect_ident("variable name");
      expect_punct(":");
      Type dom = parse_type();
      expect_punct("@");
      Level ld = parse_level();
      expect_punct(")");
      expect_punct("@");
      Level lc = parse_level();
      expect_punct(".");
      scope_.locals.push_back(x.text);
      Term body = parse_term();
      scope_.locals.pop_back();
      return tm::lam(std::move(ld), std::move(lc), x.text, std::move(dom), std::move(body));
    }
    if (k == "app") {
      expect_punct("(");
      Token x = expect_ident("variable name");
      expect_punct(":");
      Type dom = parse_type();
      expect_punct("@");
      Level ld = parse_level();
      expect_punct(".");
      scope_.locals.push_back(x.text);
      Type cod = parse_type();
      scope_.locals.pop_back();
      expect_punct("@");
      Level lc = parse_level();
      expect_punct(")");
      Term fn = parse_term();
      Term arg = parse_term();
      return tm::app(std::move(fn), std::move(ld), std::move(lc), x.text, std::move(dom),
                     std::move(cod), std::move(arg));
    }
    if (k == "ulam") {
      std::vector<std::string> names = parse_level_binders();
      expect_punct("@");
      Level l = parse_level();
      expect_punct(".");
      Term body = parse_term();
      pop_levels(names.size());
      return tm::ulam(std::move(l), static_cast<unsigned>(names.size()), names, std::move(body));
    }
    if (k == "uapp") {
      Term fn = parse_term();
      expect_punct("(");
      std::vector<Level> ls;
      ls.push_back(parse_level());
      while (eat_punct(",")) ls.push_back(parse_level());
      expect_punct(")");
      return tm::uapp(std::move(fn), std::move(ls));
    }
    if (k == "ctxfun") {
      expect_punct("(");
      Token g = expect_ident("context variable name");
      expect_punct(")");
      expect_punct("@");
      Level l = parse_level();
      expect_punct(".");
      push_global(g.text, GlobalKind::Ctx, LocalCtx::empty());
      Term body = parse_term();
      scope_.globals.pop_back();
      return tm::ctx_lam(std::move(l), g.text, std::move(body));
    }
    if (k == "ctxapp") {
      Term fn = parse_term();
      expect_punct("(");
      LocalCtx arg = parse_lctx_isolated();
      expect_punct(")");
      return tm::ctx_app(std::move(fn), std::move(arg));
    }
    if (k == "tyfun") {
      expect_punct("(");
      Token u = expect_ident("type variable name");
      expect_punct(":");
      expect_punct("[");
      LocalCtx ctx = parse_lctx_isolated();
      expect_punct("|-");
      expect_keyword("Ty");
      Level bl = parse_level();
      expect_punct("]");
      expect_punct(")");
      expect_punct("@");
      Level rl = parse_level();
      expect_punct(".");
      push_global(u.text, GlobalKind::Typ, ctx);
      Term body = parse_term();
      scope_.globals.pop_back();
      return tm::ty_lam(std::move(bl), std::move(rl), u.text, std::move(ctx), std::move(body));
    }
    if (k == "tyapp") {
      Term fn = parse_term();
      expect_punct("(");
      Type arg = parse_type();
      expect_punct(")");
      return tm::ty_app(std::move(fn), std::move(arg));
    }
    if (k == "box") {
      Token sort = expect_ident("'ty' or 'tm'");
      if (sort.text != "ty" && sort.text != "tm")
        fail(sort.pos, "expected 'ty' or 'tm' after box");
      auto saved = scope_.locals;
      scope_.locals.clear();
      // open code names its context's variables with a brace binder list,
      // outermost first: box tm { x y . t }
      bool braced = eat_punct("{");
      if (braced) {
        while (lex_.peek().kind == Token::Kind::Ident) scope_.locals.push_back(lex_.next().text);
        expect_punct(".");
      }
      Term r = sort.text == "ty" ? tm::box_ty(parse_type()) : tm::box_tm(parse_term());
      if (braced) expect_punct("}");
      scope_.locals = std::move(saved);
      return r;
    }
    if (k == "letbox") return parse_letbox(t.pos);
    if (k == "elimTy" || k == "elimTm") return parse_recursor(k == "elimTm");
    // a variable: local, then global, then definition
    for (std::size_t i = scope_.locals.size(); i-- > 0;) {
      if (scope_.locals[i] == k) {
        if (peek_punct("^")) fail(t.pos, "local variables take no substitution");
        return tm::var(static_cast<int>(scope_.locals.size() - 1 - i), k);
      }
    }
    for (std::size_t i = scope_.globals.size(); i-- > 0;) {
      if (scope_.globals[i].name == k) {
        int idx = static_cast<int>(scope_.globals.size() - 1 - i);
        if (global_entry(idx).kind != GlobalKind::Trm)
          fail(t.pos, "'" + k + "' is not a term variable");
        LocalSubst d = parse_subst_for(idx, t.pos);
        return tm::global(idx, std::move(d), k);
      }
    }
    if (auto it = defs_.find(k); it != defs_.end()) {
      // expand the definition, weakened from the preamble world
      int gshift_by = static_cast<int>(scope_.globals.size() - preamble_globals_);
      int ushift_by = static_cast<int>(scope_.levels.size() - preamble_levels_);
      return gshift(ushift(it->second.term, ushift_by), gshift_by);
    }
    fail(t.pos, "unknown identifier '" + k + "'");
  }

  Term parse_letbox(SourcePos pos) {
    Token sort = expect_ident("'ty' or 'tm'");
    bool is_tm = sort.text == "tm";
    if (!is_tm && sort.text != "ty") fail(sort.pos, "expected 'ty' or 'tm' after letbox");
    expect_punct("(");
    Level res = parse_level();
    expect_punct(",");
    Level code = parse_level();
    expect_punct(")");
    expect_punct("(");
    auto saved = scope_.locals;
    scope_.locals.clear();
    LocalCtx ctx = parse_lctx();
    Type type;  // only for letbox tm
    if (is_tm) {
      expect_punct(")");
      expect_punct("(");
      type = parse_type();  // in the code context
    }
    scope_.locals = std::move(saved);
    expect_punct(")");
    expect_punct("(");
    Token xv = expect_ident("motive variable");
    expect_punct(".");
    scope_.locals.push_back(xv.text);
    Type motive = parse_type();
    scope_.locals.pop_back();
    expect_punct(")");
    expect_punct("(");
    Token u = expect_ident("code variable");
    expect_punct(".");
    push_global(u.text, is_tm ? GlobalKind::Trm : GlobalKind::Typ, ctx);
    Term body = parse_term();
    scope_.globals.pop_back();
    expect_punct(")");
    Term scrut = parse_term();
    (void)pos;
    if (is_tm)
      return tm::letbox_tm(std::move(res), std::move(code), std::move(ctx), std::move(type),
                           xv.text, std::move(motive), u.text, std::move(body), std::move(scrut));
    return tm::letbox_ty(std::move(res), std::move(code), std::move(ctx), xv.text,
                         std::move(motive), u.text, std::move(body), std::move(scrut));
  }

  Term parse_recursor(bool is_tm) {
    expect_punct("(");
    Level l1 = parse_level();
    expect_punct(",");
    Level l2 = parse_level();
    expect_punct(")");
    Motives m = parse_motives();
    Branches b = parse_branches(m, l1, l2);
    expect_punct("(");
    Level idx = parse_level();
    expect_punct(")");
    expect_punct("(");
    auto saved = scope_.locals;
    scope_.locals.clear();
    LocalCtx ctx = parse_lctx();
    Type index_type;
    if (is_tm) {
      expect_punct(")");
      expect_punct("(");
      index_type = parse_type();
    }
    scope_.locals = std::move(saved);
    expect_punct(")");
    Term scrut = parse_term();
    if (is_tm)
      return tm::elim_trm(std::move(l1), std::move(l2), std::move(m), std::move(b), std::move(idx),
                          std::move(ctx), std::move(index_type), std::move(scrut));
    return tm::elim_typ(std::move(l1), std::move(l2), std::move(m), std::move(b), std::move(idx),
                        std::move(ctx), std::move(scrut));
  }

  Motives parse_motives() {
    Motives m;
    {
      expect_punct("(");
      Token l = expect_ident("level binder");
      Token g = expect_ident("context binder");
      Token xT = expect_ident("code binder");
      expect_punct(".");
      scope_.levels.push_back(l.text);
      push_global(g.text, GlobalKind::Ctx, LocalCtx::empty());
      scope_.locals.push_back(xT.text);
      m.typ = parse_type();
      scope_.locals.pop_back();
      scope_.globals.pop_back();
      scope_.levels.pop_back();
      expect_punct(")");
    }
    {
      expect_punct("(");
      Token l = expect_ident("level binder");
      Token g = expect_ident("context binder");
      Token UT = expect_ident("type binder");
      Token xt = expect_ident("code binder");
      expect_punct(".");
      scope_.levels.push_back(l.text);
      push_global(g.text, GlobalKind::Ctx, LocalCtx::empty());
      push_global(UT.text, GlobalKind::Typ, LocalCtx::var(0));
      scope_.locals.push_back(xt.text);
      m.trm = parse_type();
      scope_.locals.pop_back();
      scope_.globals.pop_back();
      scope_.globals.pop_back();
      scope_.levels.pop_back();
      expect_punct(")");
    }
    return m;
  }

  Branches parse_branches(const Motives& m, const Level& l1, const Level& l2) {
    expect_punct("(");
    Branches b;
    std::array<bool, 13> seen{};
    while (eat_punct("|")) {
      Token kw = expect_ident("branch keyword");
      std::optional<BranchKind> kind;
      for (BranchKind k : kAllBranchKinds)
        if (kw.text == branch_keyword(k)) kind = k;
      if (!kind) fail(kw.pos, "unknown branch '" + kw.text + "'");
      if (seen[static_cast<std::size_t>(*kind)]) fail(kw.pos, "duplicate branch '" + kw.text + "'");
      seen[static_cast<std::size_t>(*kind)] = true;
      b.at(*kind) = parse_branch_body(*kind, m, l1, l2);
    }
    expect_punct(")");
    for (BranchKind k : kAllBranchKinds)
      if (!seen[static_cast<std::size_t>(k)])
        fail(lex_.peek().pos, std::string("missing branch '") + branch_keyword(k) + "'");
    return b;
  }

  Term parse_branch_body(BranchKind kind, const Motives& m, const Level& l1, const Level& l2) {
    BranchArity ar = branch_arity(kind);
    // the binder names map positionally onto (levels..., globals..., locals...)
    std::vector<Token> names;
    int total = ar.levels + ar.globals + ar.locals;
    for (int i = 0; i < total; ++i) names.push_back(expect_ident("branch binder"));
    expect_punct("=>");
    // the signature supplies the context shapes of the bound globals
    BranchSignature sig = branch_signature(kind, m, l1, l2);
    int pos = 0;
    for (int i = 0; i < ar.levels; ++i, ++pos) scope_.levels.push_back(names[pos].text);
    for (int i = 0; i < ar.globals; ++i, ++pos) {
      const GlobalBind& gb = sig.psi_ext[static_cast<std::size_t>(i)];
      std::visit(overloaded{[&](const CtxBind&) {
                              push_global(names[pos].text, GlobalKind::Ctx, LocalCtx::empty());
                            },
                            [&](const TypBind& x) {
                              push_global(names[pos].text, GlobalKind::Typ, x.ctx);
                            },
                            [&](const TrmBind& x) {
                              push_global(names[pos].text, GlobalKind::Trm, x.ctx);
                            }},
                 gb);
    }
    for (int i = 0; i < ar.locals; ++i, ++pos) scope_.locals.push_back(names[pos].text);
    Term body = parse_term();
    for (int i = 0; i < ar.locals; ++i) scope_.locals.pop_back();
    for (int i = 0; i < ar.globals; ++i) scope_.globals.pop_back();
    pop_levels(static_cast<std::size_t>(ar.levels));
    return body;
  }

  // ----------------------------------------------------------- declarations

  void parse_global(SourceFile& f) {
    Token name = expect_ident("global name");
    expect_punct(":");
    if (peek_ident("Ctx")) {
      lex_.next();
      expect_punct(";");
      f.gctx = f.gctx.extended(CtxBind{name.text});
      push_global(name.text, GlobalKind::Ctx, LocalCtx::empty());
      ++preamble_globals_;
      return;
    }
    expect_punct("[");
    auto saved = scope_.locals;
    scope_.locals.clear();
    LocalCtx ctx = parse_lctx();
    expect_punct("|-");
    bool is_typ = false;
    Level level;
    Type type;
    if (peek_ident("Ty")) {
      lex_.next();
      Level l = parse_level();
      if (peek_punct("]")) {
        is_typ = true;
        level = std::move(l);
      } else {
        expect_punct(":");
        level = parse_level();
        type = ty::universe(std::move(l));
      }
    } else {
      type = parse_type();
      expect_punct(":");
      level = parse_level();
    }
    scope_.locals = std::move(saved);
    expect_punct("]");
    expect_punct("@");
    Layer layer = parse_layer();
    expect_punct(";");
    if (is_typ) {
      f.gctx = f.gctx.extended(TypBind{name.text, ctx, layer, level});
      push_global(name.text, GlobalKind::Typ, ctx);
    } else {
      f.gctx = f.gctx.extended(TrmBind{name.text, ctx, layer, type, level});
      push_global(name.text, GlobalKind::Trm, ctx);
    }
    ++preamble_globals_;
  }

  void parse_def(SourceFile& f) {
    Token name = expect_ident("definition name");
    if (defs_.count(name.text)) fail(name.pos, "duplicate definition '" + name.text + "'");
    expect_punct("@");
    Layer layer = parse_layer();
    expect_punct(":");
    Type type = parse_type();
    expect_punct("@");
    Level level = parse_level();
    expect_punct(":=");
    Term term = parse_term();
    expect_punct(";");
    Definition d{name.text, layer, std::move(type), std::move(level), std::move(term)};
    defs_.emplace(name.text, d);
    f.defs.push_back(std::move(d));
  }

  // ------------------------------------------------------------- plumbing

  std::vector<std::string> parse_level_binders() {
    expect_punct("(");
    std::vector<std::string> names;
    while (lex_.peek().kind == Token::Kind::Ident) {
      names.push_back(lex_.next().text);
      scope_.levels.push_back(names.back());
    }
    if (names.empty()) fail(lex_.peek().pos, "expected at least one level binder");
    expect_punct(")");
    return names;
  }

  void pop_levels(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) scope_.levels.pop_back();
  }

  void push_global(const std::string& name, GlobalKind kind, LocalCtx ctx) {
    scope_.globals.push_back(GlobalScopeEntry{name, kind, std::move(ctx), scope_.levels.size()});
  }

  Lexer lex_;
  Scope scope_;
  std::map<std::string, Definition> defs_;
  std::size_t preamble_globals_ = 0;
  std::size_t preamble_levels_ = 0;
};

}  // namespace parser_detail

inline SourceFile parse_file(std::string_view text) {
  return parser_detail::Parser(text).parse_file();
}

inline Level parse_level_expr(std::string_view text, const UnivCtx& uctx) {
  return parser_detail::Parser::parse_level_expr(text, uctx);
}

}  // namespace delam
