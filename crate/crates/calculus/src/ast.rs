//! Abstract syntax for the model calculus: modes, usages, types,
//! expressions, values, and datatype declarations.

use num_bigint::BigInt;
use std::fmt;

/// Code classification. The ordering is `Exec ⊑ Proof ⊑ Spec`, which the
/// derived `Ord` realizes (variant order matters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Exec,
    Proof,
    Spec,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Exec, Mode::Proof, Mode::Spec];

    pub fn leq(self, other: Mode) -> bool {
        self <= other
    }

    /// Least upper bound under exec ⊑ proof ⊑ spec.
    pub fn join(self, other: Mode) -> Mode {
        self.max(other)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Spec => "spec",
            Mode::Proof => "proof",
            Mode::Exec => "exec",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Usage {
    Linear,
    Shared,
}

impl Usage {
    pub fn name(self) -> &'static str {
        match self {
            Usage::Linear => "linear",
            Usage::Shared => "shared",
        }
    }
}

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Mode-plus-usage annotation μ. Spec never carries a usage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mu {
    Exec(Usage),
    Proof(Usage),
    Spec,
}

impl Mu {
    pub const ALL: [Mu; 5] = [
        Mu::Exec(Usage::Linear),
        Mu::Exec(Usage::Shared),
        Mu::Proof(Usage::Linear),
        Mu::Proof(Usage::Shared),
        Mu::Spec,
    ];

    pub fn new(mode: Mode, usage: Usage) -> Mu {
        match mode {
            Mode::Spec => Mu::Spec,
            Mode::Proof => Mu::Proof(usage),
            Mode::Exec => Mu::Exec(usage),
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Mu::Spec => Mode::Spec,
            Mu::Proof(_) => Mode::Proof,
            Mu::Exec(_) => Mode::Exec,
        }
    }

    pub fn usage(self) -> Option<Usage> {
        match self {
            Mu::Spec => None,
            Mu::Proof(u) | Mu::Exec(u) => Some(u),
        }
    }

    pub fn is_linear(self) -> bool {
        self.usage() == Some(Usage::Linear)
    }

    pub fn is_shared(self) -> bool {
        self.usage() == Some(Usage::Shared)
    }

    /// Same mode, usage forced to `u`. Spec stays spec.
    pub fn with_usage(self, u: Usage) -> Mu {
        match self {
            Mu::Spec => Mu::Spec,
            Mu::Proof(_) => Mu::Proof(u),
            Mu::Exec(_) => Mu::Exec(u),
        }
    }

    /// Join a field mode into a mode-usage: if the joined mode is spec the
    /// result is spec, otherwise the usage is kept with the joined mode.
    pub fn join_mode(self, m: Mode) -> Mu {
        match self {
            Mu::Spec => Mu::Spec,
            Mu::Proof(u) | Mu::Exec(u) => Mu::new(self.mode().join(m), u),
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sexpr::print_mu(*self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Callability {
    Once,
    Many,
}

impl Callability {
    pub fn name(self) -> &'static str {
        match self {
            Callability::Once => "once",
            Callability::Many => "many",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lifetime {
    Static,
    Restricted,
}

impl Lifetime {
    pub fn name(self) -> &'static str {
        match self {
            Lifetime::Static => "static",
            Lifetime::Restricted => "restricted",
        }
    }
}

/// Function type payload: `Fn^mode_{call life} (arg_mu arg_ty -> res_mu res_ty)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnTy {
    pub mode: Mode,
    pub call: Callability,
    pub life: Lifetime,
    pub arg_mu: Mu,
    pub arg_ty: Ty,
    pub res_mu: Mu,
    pub res_ty: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ty {
    Int,
    Unit,
    Never,
    /// Permission to one storage location; the index is part of the type.
    Perm(i64, Box<Ty>),
    Option(Box<Ty>),
    Struct(String),
    Fn(Box<FnTy>),
}

impl Ty {
    pub fn perm(i: i64, ty: Ty) -> Ty {
        Ty::Perm(i, Box::new(ty))
    }

    pub fn option(ty: Ty) -> Ty {
        Ty::Option(Box::new(ty))
    }

    /// Function types expose their annotated lifetime; options defer to the
    /// payload; everything else is static.
    pub fn lifetime(&self) -> Lifetime {
        match self {
            Ty::Fn(f) => f.life,
            Ty::Option(t) => t.lifetime(),
            _ => Lifetime::Static,
        }
    }

    /// Node count, used by the size-bounded enumerator and the declarative
    /// checker's size gate. Annotation tokens (mode, callability, lifetime,
    /// usage) and location indices each count one.
    pub fn size(&self) -> usize {
        match self {
            Ty::Int | Ty::Unit | Ty::Never | Ty::Struct(_) => 1,
            Ty::Perm(_, t) => 2 + t.size(),
            Ty::Option(t) => 1 + t.size(),
            Ty::Fn(f) => {
                1 + 3
                    + mu_size(f.arg_mu)
                    + f.arg_ty.size()
                    + mu_size(f.res_mu)
                    + f.res_ty.size()
            }
        }
    }
}

pub fn mu_size(mu: Mu) -> usize {
    match mu {
        Mu::Spec => 1,
        _ => 2,
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sexpr::print_ty(self))
    }
}

/// Optional explicit borrow annotation on seq/let scopes, consumed by the
/// algorithmic checker and ignored by the declarative one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Borrows {
    pub vars: Vec<String>,
    pub perms: Vec<i64>,
}

impl Borrows {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.perms.is_empty()
    }
}

/// Lambda literal payload. There is no result annotation; the result typing
/// comes from the body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lambda {
    pub mode: Mode,
    pub call: Callability,
    pub life: Lifetime,
    pub param: String,
    pub param_mu: Mu,
    pub param_ty: Ty,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Var(String),
    Int(BigInt),
    Add(Box<Expr>, Box<Expr>),
    Unit,
    Bottom,
    Default(Ty),
    CrashNever(Box<Expr>),
    HData,
    HRead,
    HWrite(Box<Expr>),
    /// Permission literal `permission(i ↦ v)`; the payload is syntactically a
    /// value.
    Perm(i64, Box<Expr>),
    PData(Box<Expr>),
    PRead(i64, Box<Expr>),
    PWrite(i64, Box<Expr>, Box<Expr>),
    Drop(Box<Expr>),
    Copy(Box<Expr>),
    Seq(Borrows, Box<Expr>, Box<Expr>),
    Let(Mode, String, Borrows, Box<Expr>, Box<Expr>),
    None(Ty),
    Some(Box<Expr>, Ty),
    /// `if let Some(x) = e1 then e2 else e3`
    IfSome(String, Box<Expr>, Box<Expr>, Box<Expr>),
    /// Datatype construction `S(e1, ..., en)`.
    New(String, Vec<Expr>),
    /// Positional destructuring `let S(x1, ..., xn) = e0 in eb`.
    Unpack(String, Vec<String>, Box<Expr>, Box<Expr>),
    Lambda(Box<Lambda>),
    App(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(i: i64) -> Expr {
        Expr::Int(BigInt::from(i))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn seq(a: Expr, b: Expr) -> Expr {
        Expr::Seq(Borrows::default(), Box::new(a), Box::new(b))
    }

    pub fn let_(m: Mode, x: &str, e1: Expr, e2: Expr) -> Expr {
        Expr::Let(m, x.to_string(), Borrows::default(), Box::new(e1), Box::new(e2))
    }

    pub fn var(x: &str) -> Expr {
        Expr::Var(x.to_string())
    }

    pub fn perm(i: i64, v: Expr) -> Expr {
        Expr::Perm(i, Box::new(v))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    /// Membership in the value subgrammar.
    pub fn is_value(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Unit | Expr::Bottom | Expr::Lambda(_) | Expr::None(_) => true,
            Expr::Perm(_, v) | Expr::Some(v, _) => v.is_value(),
            Expr::New(_, fields) => fields.iter().all(Expr::is_value),
            _ => false,
        }
    }

    /// Node count per the enumeration size metric; see `Ty::size`.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Int(_) | Expr::Unit | Expr::Bottom => 1,
            Expr::HData | Expr::HRead => 1,
            Expr::Add(a, b) => 1 + a.size() + b.size(),
            Expr::Default(t) => 1 + t.size(),
            Expr::CrashNever(e) | Expr::HWrite(e) | Expr::PData(e) | Expr::Drop(e)
            | Expr::Copy(e) => 1 + e.size(),
            Expr::Perm(_, v) => 2 + v.size(),
            Expr::PRead(_, e) => 2 + e.size(),
            Expr::PWrite(_, ev, ep) => 2 + ev.size() + ep.size(),
            Expr::Seq(_, a, b) => 1 + a.size() + b.size(),
            Expr::Let(_, _, _, a, b) => 2 + a.size() + b.size(),
            Expr::None(t) => 1 + t.size(),
            Expr::Some(e, t) => 1 + e.size() + t.size(),
            Expr::IfSome(_, e1, e2, e3) => 1 + e1.size() + e2.size() + e3.size(),
            Expr::New(_, fields) => 1 + fields.iter().map(Expr::size).sum::<usize>(),
            Expr::Unpack(_, _, e0, eb) => 1 + e0.size() + eb.size(),
            Expr::Lambda(l) => 1 + 3 + mu_size(l.param_mu) + l.param_ty.size() + l.body.size(),
            Expr::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Free variables, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound: Vec<String> = Vec::new();
        self.free_vars_into(&mut bound, &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Expr::Var(x) => {
                if !bound.iter().any(|b| b == x) && !out.iter().any(|o| o == x) {
                    out.push(x.clone());
                }
            }
            Expr::Int(_) | Expr::Unit | Expr::Bottom | Expr::Default(_) | Expr::HData
            | Expr::HRead | Expr::None(_) => {}
            Expr::Add(a, b) | Expr::Seq(_, a, b) | Expr::App(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Expr::CrashNever(e) | Expr::HWrite(e) | Expr::PData(e) | Expr::PRead(_, e)
            | Expr::Drop(e) | Expr::Copy(e) | Expr::Perm(_, e) | Expr::Some(e, _) => {
                e.free_vars_into(bound, out)
            }
            Expr::PWrite(_, ev, ep) => {
                ev.free_vars_into(bound, out);
                ep.free_vars_into(bound, out);
            }
            Expr::Let(_, x, _, e1, e2) => {
                e1.free_vars_into(bound, out);
                bound.push(x.clone());
                e2.free_vars_into(bound, out);
                bound.pop();
            }
            Expr::IfSome(x, e1, e2, e3) => {
                e1.free_vars_into(bound, out);
                bound.push(x.clone());
                e2.free_vars_into(bound, out);
                bound.pop();
                e3.free_vars_into(bound, out);
            }
            Expr::New(_, fields) => {
                for fe in fields {
                    fe.free_vars_into(bound, out);
                }
            }
            Expr::Unpack(_, xs, e0, eb) => {
                e0.free_vars_into(bound, out);
                let n = xs.len();
                bound.extend(xs.iter().cloned());
                eb.free_vars_into(bound, out);
                bound.truncate(bound.len() - n);
            }
            Expr::Lambda(l) => {
                bound.push(l.param.clone());
                l.body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    /// Permission location indices mentioned anywhere in the term (literals,
    /// reads, writes, and permission types).
    pub fn perm_indices(&self) -> Vec<i64> {
        fn ty_indices(t: &Ty, out: &mut Vec<i64>) {
            match t {
                Ty::Perm(i, inner) => {
                    if !out.contains(i) {
                        out.push(*i);
                    }
                    ty_indices(inner, out);
                }
                Ty::Option(inner) => ty_indices(inner, out),
                Ty::Fn(f) => {
                    ty_indices(&f.arg_ty, out);
                    ty_indices(&f.res_ty, out);
                }
                _ => {}
            }
        }
        fn walk(e: &Expr, out: &mut Vec<i64>) {
            let mut push = |i: i64| {
                if !out.contains(&i) {
                    out.push(i);
                }
            };
            match e {
                Expr::Perm(i, v) => {
                    push(*i);
                    walk(v, out);
                }
                Expr::PRead(i, ep) => {
                    push(*i);
                    walk(ep, out);
                }
                Expr::PWrite(i, ev, ep) => {
                    push(*i);
                    walk(ev, out);
                    walk(ep, out);
                }
                Expr::Default(t) | Expr::None(t) => ty_indices(t, out),
                Expr::Some(inner, t) => {
                    walk(inner, out);
                    ty_indices(t, out);
                }
                Expr::Add(a, b) | Expr::Seq(_, a, b) | Expr::App(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::Let(_, _, _, a, b) | Expr::Unpack(_, _, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::CrashNever(x) | Expr::HWrite(x) | Expr::PData(x) | Expr::Drop(x)
                | Expr::Copy(x) => walk(x, out),
                Expr::IfSome(_, a, b, c) => {
                    walk(a, out);
                    walk(b, out);
                    walk(c, out);
                }
                Expr::New(_, fields) => fields.iter().for_each(|fe| walk(fe, out)),
                Expr::Lambda(l) => {
                    ty_indices(&l.param_ty, out);
                    walk(&l.body, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// True if the term contains any permission syntax (literals, reads,
    /// writes, snapshots, or permission types).
    pub fn mentions_permissions(&self) -> bool {
        if matches!(self, Expr::PData(_)) {
            return true;
        }
        !self.perm_indices().is_empty() || self.contains_pdata()
    }

    fn contains_pdata(&self) -> bool {
        match self {
            Expr::PData(_) => true,
            Expr::Add(a, b) | Expr::Seq(_, a, b) | Expr::App(a, b)
            | Expr::Let(_, _, _, a, b) | Expr::Unpack(_, _, a, b) => {
                a.contains_pdata() || b.contains_pdata()
            }
            Expr::CrashNever(e) | Expr::HWrite(e) | Expr::Drop(e) | Expr::Copy(e)
            | Expr::Perm(_, e) | Expr::Some(e, _) | Expr::PRead(_, e) => e.contains_pdata(),
            Expr::PWrite(_, a, b) => a.contains_pdata() || b.contains_pdata(),
            Expr::IfSome(_, a, b, c) => {
                a.contains_pdata() || b.contains_pdata() || c.contains_pdata()
            }
            Expr::New(_, fields) => fields.iter().any(Expr::contains_pdata),
            Expr::Lambda(l) => l.body.contains_pdata(),
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fmt_via_sexpr!();
}

/// One datatype declaration: positional fields, each with a mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    pub mode: Mode,
    pub ty: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DatatypeDecl {
    pub name: String,
    pub fields: Vec<Field>,
}

/// Ordered declaration table. A declaration may mention only earlier
/// declarations and (where the well-formedness rules permit) itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeclTable {
    decls: Vec<DatatypeDecl>,
}

impl DeclTable {
    pub fn new() -> DeclTable {
        DeclTable::default()
    }

    pub fn from_decls(decls: Vec<DatatypeDecl>) -> DeclTable {
        DeclTable { decls }
    }

    pub fn push(&mut self, d: DatatypeDecl) {
        self.decls.push(d);
    }

    pub fn decls(&self) -> &[DatatypeDecl] {
        &self.decls
    }

    pub fn lookup(&self, name: &str) -> Option<&DatatypeDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// Declarations strictly before `name`, for positivity checking.
    pub fn before(&self, name: &str) -> DeclTable {
        let idx = self.decls.iter().position(|d| d.name == name);
        match idx {
            Some(i) => DeclTable { decls: self.decls[..i].to_vec() },
            None => self.clone(),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}

macro_rules! fmt_via_sexpr {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(&crate::sexpr::print(self))
        }
    };
}
use fmt_via_sexpr;
