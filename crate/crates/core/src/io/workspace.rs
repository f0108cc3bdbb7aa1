//! The workspace text format.
//!
//! ```text
//! field Q
//! space
//!   opens empty U X
//!   include empty U
//!   include U X
//! end
//! monoid A
//!   dims 0 1 1
//!   mult U [1]
//!   mult X [1]
//!   unit U [1]
//!   unit X [1]
//!   restrict U X [1]
//! end
//! element t of A = [1]
//! ```
//!
//! Blocks are `space`, `monoid`, `module NAME over MONOID`,
//! `map NAME : SRC -> TGT`, `modmap NAME : SRC -> TGT`, `scheme`, and
//! `ideals NAME on SCHEME`; `field` and `element` are single lines. Matrices
//! are written `[a b; c d]`, or `[RxC]` when a side is empty. Components are
//! keyed by open name, or `*` for plain vector spaces; omitted components
//! are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::category::{CMorphism, CObject, CatInstance, FiniteSpace};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::monoid::{ModuleMorphism, ModuleObject, MonoidMorphism, MonoidObject};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDecl {
    pub opens: Vec<String>,
    pub includes: Vec<(String, String)>,
}

/// A component matrix keyed by site name.
pub type Component = (String, Matrix);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub dims: Vec<usize>,
    /// `(smaller, larger, matrix)`.
    pub restrict: Vec<(String, String, Matrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidDecl {
    pub object: ObjectDecl,
    pub mult: Vec<Component>,
    pub unit: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub object: ObjectDecl,
    pub over: String,
    pub action: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementDecl {
    pub name: String,
    pub of: String,
    pub section: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub at: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapDecl {
    pub i: usize,
    pub j: usize,
    pub t_ij: String,
    pub t_ji: String,
    pub at: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDecl {
    pub name: String,
    pub charts: Vec<String>,
    pub overlaps: Vec<OverlapDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealsDecl {
    pub name: String,
    pub on: String,
    /// Generators (element names) per chart, in chart order.
    pub charts: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Monoid(MonoidDecl),
    Module(ModuleDecl),
    Element(ElementDecl),
    Map(MapDecl),
    ModMap(MapDecl),
    Scheme(SchemeDecl),
    Ideals(IdealsDecl),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Monoid(m) => &m.object.name,
            Decl::Module(m) => &m.object.name,
            Decl::Element(e) => &e.name,
            Decl::Map(m) | Decl::ModMap(m) => &m.name,
            Decl::Scheme(s) => &s.name,
            Decl::Ideals(i) => &i.name,
        }
    }

    fn label(&self) -> String {
        let kind = match self {
            Decl::Monoid(_) => "monoid",
            Decl::Module(_) => "module",
            Decl::Element(_) => "element",
            Decl::Map(_) => "map",
            Decl::ModMap(_) => "modmap",
            Decl::Scheme(_) => "scheme",
            Decl::Ideals(_) => "ideals",
        };
        format!("{kind} {}", self.name())
    }
}

/// Parsed declarations plus the objects they resolve to.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub space: Option<SpaceDecl>,
    pub decls: Vec<Decl>,
    pub instance: Arc<CatInstance>,
    monoids: BTreeMap<String, MonoidObject>,
    modules: BTreeMap<String, ModuleObject>,
    maps: BTreeMap<String, MonoidMorphism>,
    modmaps: BTreeMap<String, ModuleMorphism>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.space == other.space && self.decls == other.decls
    }
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace> {
        let (field, space, decls) = Parser::new(text).run()?;
        Workspace::resolve(field, space, decls)
    }

    pub fn parse_file(path: &std::path::Path) -> Result<Workspace> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Workspace::parse(&text)
    }

    /// Builds a workspace from declarations, running every shape and
    /// reference check.
    pub fn resolve(field: Field, space: Option<SpaceDecl>, decls: Vec<Decl>) -> Result<Workspace> {
        let instance = match &space {
            None => CatInstance::finvect(field),
            Some(s) => {
                let index = |n: &str| {
                    s.opens
                        .iter()
                        .position(|o| o == n)
                        .ok_or_else(|| Error::semantic("space", format!("unknown open `{n}`")))
                };
                let incl = s
                    .includes
                    .iter()
                    .map(|(a, b)| Ok((index(a)?, index(b)?)))
                    .collect::<Result<Vec<_>>>()?;
                let fs = FiniteSpace::new(s.opens.clone(), &incl).map_err(|e| Error::semantic("space", e.to_string()))?;
                CatInstance::presheaf(field, fs)
            }
        };
        let mut ws = Workspace {
            field,
            space,
            decls: Vec::new(),
            instance,
            monoids: BTreeMap::new(),
            modules: BTreeMap::new(),
            maps: BTreeMap::new(),
            modmaps: BTreeMap::new(),
        };
        for d in decls {
            if ws.decls.iter().any(|e| e.name() == d.name()) {
                return Err(Error::semantic(d.label(), "name declared twice"));
            }
            ws.add(&d).map_err(|e| match e {
                Error::Input(m) => Error::semantic(d.label(), m),
                other => other,
            })?;
            ws.decls.push(d);
        }
        Ok(ws)
    }

    fn site(&self, name: &str) -> Result<usize> {
        match self.instance.space() {
            None if name == "*" => Ok(0),
            None => Err(Error::input(format!("site `{name}`: plain vector spaces use `*`"))),
            Some(s) => s.index_of(name).ok_or_else(|| Error::input(format!("unknown open `{name}`"))),
        }
    }

    fn object(&self, d: &ObjectDecl) -> Result<CObject> {
        let mut res = BTreeMap::new();
        for (small, large, m) in &d.restrict {
            res.insert((self.site(small)?, self.site(large)?), m.clone());
        }
        if !self.instance.is_presheaf() && !res.is_empty() {
            return Err(Error::input("restrictions need a space"));
        }
        CObject::new(self.instance.clone(), d.dims.clone(), res)
    }

    /// Components by site, zero where omitted.
    fn components(&self, given: &[Component], shapes: &[(usize, usize)]) -> Result<Vec<Matrix>> {
        let mut out: Vec<Option<Matrix>> = vec![None; shapes.len()];
        for (site, m) in given {
            let s = self.site(site)?;
            if out[s].is_some() {
                return Err(Error::input(format!("component at `{site}` given twice")));
            }
            if m.shape() != shapes[s] {
                return Err(Error::input(format!(
                    "component at `{site}` is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    shapes[s].0,
                    shapes[s].1
                )));
            }
            out[s] = Some(m.clone());
        }
        Ok(out
            .into_iter()
            .zip(shapes)
            .map(|(m, &(r, c))| m.unwrap_or_else(|| Matrix::zeros(self.field, r, c)))
            .collect())
    }

    fn map_between(&self, source: &CObject, target: &CObject, at: &[Component]) -> Result<CMorphism> {
        let shapes: Vec<(usize, usize)> = target.dims().iter().zip(source.dims()).map(|(&r, &c)| (r, c)).collect();
        CMorphism::new(source.clone(), target.clone(), self.components(at, &shapes)?)
    }

    fn add(&mut self, d: &Decl) -> Result<()> {
        match d {
            Decl::Monoid(m) => {
                let carrier = self.object(&m.object)?;
                let aa = crate::category::tensor(&carrier, &carrier)?;
                let one = CObject::unit(&self.instance);
                let mult = self.map_between(&aa, &carrier, &m.mult)?;
                let unit = self.map_between(&one, &carrier, &m.unit)?;
                let a = MonoidObject::new(carrier, mult, unit)?;
                self.monoids.insert(m.object.name.clone(), a);
            }
            Decl::Module(m) => {
                let base = self.monoid_unchecked(&m.over)?.clone();
                let carrier = self.object(&m.object)?;
                let am = crate::category::tensor(base.carrier(), &carrier)?;
                let action = self.map_between(&am, &carrier, &m.action)?;
                let module = ModuleObject::new(base, carrier, action)?;
                self.modules.insert(m.object.name.clone(), module);
            }
            Decl::Element(e) => {
                let a = self.monoid_unchecked(&e.of)?;
                let top = a.instance().top();
                if e.section.len() != a.carrier().dim(top) {
                    return Err(Error::input(format!(
                        "element needs {} coordinates over the whole space",
                        a.carrier().dim(top)
                    )));
                }
            }
            Decl::Map(m) => {
                let (s, t) = (self.monoid_unchecked(&m.source)?.clone(), self.monoid_unchecked(&m.target)?.clone());
                let f = self.map_between(s.carrier(), t.carrier(), &m.at)?;
                let f = MonoidMorphism::new(s, t, f)?;
                self.maps.insert(m.name.clone(), f);
            }
            Decl::ModMap(m) => {
                let (s, t) = (self.module(&m.source)?.clone(), self.module(&m.target)?.clone());
                let f = self.map_between(s.carrier(), t.carrier(), &m.at)?;
                let f = ModuleMorphism::new(s, t, f)?;
                self.modmaps.insert(m.name.clone(), f);
            }
            Decl::Scheme(s) => {
                if s.charts.is_empty() {
                    return Err(Error::input("a scheme needs at least one chart"));
                }
                for c in &s.charts {
                    self.monoid_unchecked(c)?;
                }
                for o in &s.overlaps {
                    if o.i >= o.j || o.j >= s.charts.len() {
                        return Err(Error::input(format!("overlap {} {} must name charts i < j", o.i, o.j)));
                    }
                    self.element_of(&o.t_ij, &s.charts[o.i])?;
                    self.element_of(&o.t_ji, &s.charts[o.j])?;
                }
            }
            Decl::Ideals(i) => {
                let s = self.scheme_decl(&i.on)?.clone();
                if i.charts.len() != s.charts.len() {
                    return Err(Error::input(format!(
                        "scheme `{}` has {} charts, {} generator lists given",
                        s.name,
                        s.charts.len(),
                        i.charts.len()
                    )));
                }
                for (gens, chart) in i.charts.iter().zip(&s.charts) {
                    for g in gens {
                        self.element_of(g, chart)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn element_of(&self, name: &str, monoid: &str) -> Result<&ElementDecl> {
        let e = self.element_decl(name)?;
        if e.of != monoid {
            return Err(Error::input(format!("element `{name}` belongs to `{}`, not `{monoid}`", e.of)));
        }
        Ok(e)
    }

    pub fn monoid_unchecked(&self, name: &str) -> Result<&MonoidObject> {
        self.monoids
            .get(name)
            .ok_or_else(|| Error::input(format!("no monoid named `{name}`")))
    }

    /// A monoid whose axioms hold.
    pub fn monoid(&self, name: &str) -> Result<&MonoidObject> {
        let a = self.monoid_unchecked(name)?;
        let check = a.check();
        match check.failures.first() {
            None => Ok(a),
            Some(f) => Err(Error::input(format!(
                "`{name}` is not a commutative monoid ({} fails); see check-monoid",
                f.axiom
            ))),
        }
    }

    pub fn module(&self, name: &str) -> Result<&ModuleObject> {
        self.modules
            .get(name)
            .ok_or_else(|| Error::input(format!("no module named `{name}`")))
    }

    pub fn map(&self, name: &str) -> Result<&MonoidMorphism> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::input(format!("no monoid map named `{name}`")))
    }

    pub fn modmap(&self, name: &str) -> Result<&ModuleMorphism> {
        self.modmaps
            .get(name)
            .ok_or_else(|| Error::input(format!("no module map named `{name}`")))
    }

    pub fn element_decl(&self, name: &str) -> Result<&ElementDecl> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Element(e) if e.name == name => Some(e),
                _ => None,
            })
            .ok_or_else(|| Error::input(format!("no element named `{name}`")))
    }

    pub fn scheme_decl(&self, name: &str) -> Result<&SchemeDecl> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Scheme(s) if s.name == name => Some(s),
                _ => None,
            })
            .ok_or_else(|| Error::input(format!("no scheme named `{name}`")))
    }

    pub fn ideals_decl(&self, name: &str) -> Result<&IdealsDecl> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Ideals(i) if i.name == name => Some(i),
                _ => None,
            })
            .ok_or_else(|| Error::input(format!("no ideal sheaf named `{name}`")))
    }

    /// Names of monoid blocks, in declaration order.
    pub fn monoid_names(&self) -> Vec<String> {
        self.decls
            .iter()
            .filter_map(|d| match d {
                Decl::Monoid(m) => Some(m.object.name.clone()),
                _ => None,
            })
            .collect()
    }

    /// Canonical text.
    pub fn emit(&self) -> String {
        emit(self.field, self.space.as_ref(), &self.decls)
    }
}

pub fn format_matrix(m: &Matrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("[{}x{}]", m.rows(), m.cols());
    }
    let rows: Vec<String> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn format_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn emit(field: Field, space: Option<&SpaceDecl>, decls: &[Decl]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {field}");
    if let Some(s) = space {
        let _ = writeln!(out, "space\n  opens {}", s.opens.join(" "));
        for (a, b) in &s.includes {
            let _ = writeln!(out, "  include {a} {b}");
        }
        out.push_str("end\n");
    }
    let components = |out: &mut String, key: &str, cs: &[Component]| {
        for (site, m) in cs {
            let _ = writeln!(out, "  {key} {site} {}", format_matrix(m));
        }
    };
    let object = |out: &mut String, o: &ObjectDecl| {
        let dims: Vec<String> = o.dims.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  dims {}", dims.join(" "));
        for (a, b, m) in &o.restrict {
            let _ = writeln!(out, "  restrict {a} {b} {}", format_matrix(m));
        }
    };
    for d in decls {
        match d {
            Decl::Monoid(m) => {
                let _ = writeln!(out, "monoid {}", m.object.name);
                object(&mut out, &m.object);
                components(&mut out, "mult", &m.mult);
                components(&mut out, "unit", &m.unit);
                out.push_str("end\n");
            }
            Decl::Module(m) => {
                let _ = writeln!(out, "module {} over {}", m.object.name, m.over);
                object(&mut out, &m.object);
                components(&mut out, "action", &m.action);
                out.push_str("end\n");
            }
            Decl::Element(e) => {
                let _ = writeln!(out, "element {} of {} = {}", e.name, e.of, format_vector(&e.section));
            }
            Decl::Map(m) | Decl::ModMap(m) => {
                let kw = if matches!(d, Decl::Map(_)) { "map" } else { "modmap" };
                let _ = writeln!(out, "{kw} {} : {} -> {}", m.name, m.source, m.target);
                components(&mut out, "at", &m.at);
                out.push_str("end\n");
            }
            Decl::Scheme(s) => {
                let _ = writeln!(out, "scheme {}", s.name);
                for c in &s.charts {
                    let _ = writeln!(out, "  chart {c}");
                }
                for o in &s.overlaps {
                    let _ = writeln!(out, "  overlap {} {} {} {}", o.i, o.j, o.t_ij, o.t_ji);
                    for (site, m) in &o.at {
                        let _ = writeln!(out, "    at {site} {}", format_matrix(m));
                    }
                }
                out.push_str("end\n");
            }
            Decl::Ideals(i) => {
                let _ = writeln!(out, "ideals {} on {}", i.name, i.on);
                for (k, gens) in i.charts.iter().enumerate() {
                    let mut line = format!("  chart {k}");
                    for g in gens {
                        line.push(' ');
                        line.push_str(g);
                    }
                    let _ = writeln!(out, "{line}");
                }
                out.push_str("end\n");
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    column: usize,
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    field: Option<Field>,
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (at, c) = chars[k];
        let column = text[..at].chars().count() + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        if c == '[' {
            while k < chars.len() && chars[k].1 != ']' {
                k += 1;
            }
            if k == chars.len() {
                return Err(Error::Parse {
                    line,
                    column,
                    message: "unclosed `[`".into(),
                });
            }
            k += 1;
        } else {
            while k < chars.len() && !chars[k].1.is_whitespace() && chars[k].1 != '#' {
                k += 1;
            }
        }
        let end = chars.get(k).map_or(text.len(), |&(i, _)| i);
        out.push(Token {
            text: text[chars[start].0..end].to_string(),
            column,
        });
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser {
            lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
            pos: 0,
            field: None,
        }
    }

    fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Next non-empty line as tokens.
    fn next_line(&mut self) -> Result<Option<(usize, Vec<Token>)>> {
        while self.pos < self.lines.len() {
            let (n, text) = self.lines[self.pos];
            self.pos += 1;
            let toks = tokenize(n, text)?;
            if !toks.is_empty() {
                return Ok(Some((n, toks)));
            }
        }
        Ok(None)
    }

    fn field(&self, line: usize) -> Result<Field> {
        self.field
            .ok_or_else(|| Parser::err(line, 1, "the first line must be `field Q` or `field F<p>`"))
    }

    fn run(mut self) -> Result<(Field, Option<SpaceDecl>, Vec<Decl>)> {
        let mut space = None;
        let mut decls = Vec::new();
        while let Some((n, toks)) = self.next_line()? {
            let head = toks[0].text.as_str();
            if head != "field" {
                self.field(n)?;
            }
            match head {
                "field" => {
                    if self.field.is_some() {
                        return Err(Parser::err(n, 1, "field declared twice"));
                    }
                    expect_len(n, &toks, 2, "field NAME")?;
                    let f: Field = toks[1].text.parse().map_err(|e: Error| Parser::err(n, toks[1].column, e.to_string()))?;
                    self.field = Some(f);
                }
                "space" => {
                    if space.is_some() || !decls.is_empty() {
                        return Err(Parser::err(n, 1, "`space` must come once, right after `field`"));
                    }
                    space = Some(self.space_block(n)?);
                }
                "monoid" => decls.push(self.monoid_block(n, &toks)?),
                "module" => decls.push(self.module_block(n, &toks)?),
                "element" => decls.push(self.element_line(n, &toks)?),
                "map" | "modmap" => decls.push(self.map_block(n, &toks)?),
                "scheme" => decls.push(self.scheme_block(n, &toks)?),
                "ideals" => decls.push(self.ideals_block(n, &toks)?),
                other => return Err(Parser::err(n, toks[0].column, format!("unknown block `{other}`"))),
            }
        }
        let field = self.field(self.lines.len().max(1))?;
        Ok((field, space, decls))
    }

    /// Lines of a block up to `end`.
    fn body(&mut self, start: usize) -> Result<Vec<(usize, Vec<Token>)>> {
        let mut out = Vec::new();
        loop {
            match self.next_line()? {
                None => return Err(Parser::err(start, 1, "block is missing `end`")),
                Some((_, t)) if t.len() == 1 && t[0].text == "end" => return Ok(out),
                Some(line) => out.push(line),
            }
        }
    }

    fn space_block(&mut self, start: usize) -> Result<SpaceDecl> {
        let mut opens = None;
        let mut includes = Vec::new();
        for (n, t) in self.body(start)? {
            match t[0].text.as_str() {
                "opens" => opens = Some(t[1..].iter().map(|x| x.text.clone()).collect()),
                "include" => {
                    expect_len(n, &t, 3, "include SMALLER LARGER")?;
                    includes.push((t[1].text.clone(), t[2].text.clone()));
                }
                other => return Err(Parser::err(n, t[0].column, format!("unexpected `{other}` in space"))),
            }
        }
        let opens = opens.ok_or_else(|| Parser::err(start, 1, "space needs an `opens` line"))?;
        Ok(SpaceDecl { opens, includes })
    }

    fn matrix(&self, line: usize, tok: &Token) -> Result<Matrix> {
        let field = self.field(line)?;
        parse_matrix(field, &tok.text).map_err(|m| Parser::err(line, tok.column, m))
    }

    fn object_line(&self, n: usize, t: &[Token], o: &mut ObjectDecl) -> Result<bool> {
        match t[0].text.as_str() {
            "dims" => {
                o.dims = t[1..]
                    .iter()
                    .map(|x| x.text.parse().map_err(|_| Parser::err(n, x.column, "dimension must be a number")))
                    .collect::<Result<_>>()?;
                Ok(true)
            }
            "restrict" => {
                expect_len(n, t, 4, "restrict SMALLER LARGER MATRIX")?;
                o.restrict
                    .push((t[1].text.clone(), t[2].text.clone(), self.matrix(n, &t[3])?));
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn component(&self, n: usize, t: &[Token]) -> Result<Component> {
        expect_len(n, t, 3, "KEY SITE MATRIX")?;
        Ok((t[1].text.clone(), self.matrix(n, &t[2])?))
    }

    fn monoid_block(&mut self, n: usize, toks: &[Token]) -> Result<Decl> {
        expect_len(n, toks, 2, "monoid NAME")?;
        let mut m = MonoidDecl {
            object: object_decl(&toks[1].text),
            mult: Vec::new(),
            unit: Vec::new(),
        };
        for (k, t) in self.body(n)? {
            if self.object_line(k, &t, &mut m.object)? {
                continue;
            }
            match t[0].text.as_str() {
                "mult" => m.mult.push(self.component(k, &t)?),
                "unit" => m.unit.push(self.component(k, &t)?),
                other => return Err(Parser::err(k, t[0].column, format!("unexpected `{other}` in monoid"))),
            }
        }
        Ok(Decl::Monoid(m))
    }

    fn module_block(&mut self, n: usize, toks: &[Token]) -> Result<Decl> {
        expect_len(n, toks, 4, "module NAME over MONOID")?;
        expect_word(n, &toks[2], "over")?;
        let mut m = ModuleDecl {
            object: object_decl(&toks[1].text),
            over: toks[3].text.clone(),
            action: Vec::new(),
        };
        for (k, t) in self.body(n)? {
            if self.object_line(k, &t, &mut m.object)? {
                continue;
            }
            match t[0].text.as_str() {
                "action" => m.action.push(self.component(k, &t)?),
                other => return Err(Parser::err(k, t[0].column, format!("unexpected `{other}` in module"))),
            }
        }
        Ok(Decl::Module(m))
    }

    fn element_line(&mut self, n: usize, t: &[Token]) -> Result<Decl> {
        expect_len(n, t, 6, "element NAME of MONOID = [COORDS]")?;
        expect_word(n, &t[2], "of")?;
        expect_word(n, &t[4], "=")?;
        let m = self.matrix(n, &t[5])?;
        if m.rows() > 1 {
            return Err(Parser::err(n, t[5].column, "an element is a single row of coordinates"));
        }
        Ok(Decl::Element(ElementDecl {
            name: t[1].text.clone(),
            of: t[3].text.clone(),
            section: if m.rows() == 0 { Vec::new() } else { m.row(0).to_vec() },
        }))
    }

    fn map_block(&mut self, n: usize, toks: &[Token]) -> Result<Decl> {
        expect_len(n, toks, 6, "map NAME : SOURCE -> TARGET")?;
        expect_word(n, &toks[2], ":")?;
        expect_word(n, &toks[4], "->")?;
        let mut m = MapDecl {
            name: toks[1].text.clone(),
            source: toks[3].text.clone(),
            target: toks[5].text.clone(),
            at: Vec::new(),
        };
        for (k, t) in self.body(n)? {
            match t[0].text.as_str() {
                "at" => m.at.push(self.component(k, &t)?),
                other => return Err(Parser::err(k, t[0].column, format!("unexpected `{other}` in map"))),
            }
        }
        Ok(if toks[0].text == "map" { Decl::Map(m) } else { Decl::ModMap(m) })
    }

    fn scheme_block(&mut self, n: usize, toks: &[Token]) -> Result<Decl> {
        expect_len(n, toks, 2, "scheme NAME")?;
        let mut s = SchemeDecl {
            name: toks[1].text.clone(),
            charts: Vec::new(),
            overlaps: Vec::new(),
        };
        for (k, t) in self.body(n)? {
            match t[0].text.as_str() {
                "chart" => {
                    expect_len(k, &t, 2, "chart MONOID")?;
                    s.charts.push(t[1].text.clone());
                }
                "overlap" => {
                    expect_len(k, &t, 5, "overlap I J T_IJ T_JI")?;
                    s.overlaps.push(OverlapDecl {
                        i: index(k, &t[1])?,
                        j: index(k, &t[2])?,
                        t_ij: t[3].text.clone(),
                        t_ji: t[4].text.clone(),
                        at: Vec::new(),
                    });
                }
                "at" => {
                    let c = self.component(k, &t)?;
                    s.overlaps
                        .last_mut()
                        .ok_or_else(|| Parser::err(k, t[0].column, "`at` must follow an `overlap` line"))?
                        .at
                        .push(c);
                }
                other => return Err(Parser::err(k, t[0].column, format!("unexpected `{other}` in scheme"))),
            }
        }
        Ok(Decl::Scheme(s))
    }

    fn ideals_block(&mut self, n: usize, toks: &[Token]) -> Result<Decl> {
        expect_len(n, toks, 4, "ideals NAME on SCHEME")?;
        expect_word(n, &toks[2], "on")?;
        let mut charts = Vec::new();
        for (k, t) in self.body(n)? {
            if t[0].text != "chart" || t.len() < 2 {
                return Err(Parser::err(k, t[0].column, "expected `chart K GENERATORS...`"));
            }
            if index(k, &t[1])? != charts.len() {
                return Err(Parser::err(k, t[1].column, format!("expected chart {}", charts.len())));
            }
            charts.push(t[2..].iter().map(|x| x.text.clone()).collect());
        }
        Ok(Decl::Ideals(IdealsDecl {
            name: toks[1].text.clone(),
            on: toks[3].text.clone(),
            charts,
        }))
    }
}

fn object_decl(name: &str) -> ObjectDecl {
    ObjectDecl {
        name: name.to_string(),
        dims: Vec::new(),
        restrict: Vec::new(),
    }
}

fn index(line: usize, t: &Token) -> Result<usize> {
    t.text
        .parse()
        .map_err(|_| Parser::err(line, t.column, "expected a chart index"))
}

fn expect_len(line: usize, toks: &[Token], n: usize, shape: &str) -> Result<()> {
    if toks.len() != n {
        let column = toks.get(n).or(toks.last()).map_or(1, |t| t.column);
        return Err(Parser::err(line, column, format!("expected `{shape}`")));
    }
    Ok(())
}

fn expect_word(line: usize, t: &Token, word: &str) -> Result<()> {
    if t.text != word {
        return Err(Parser::err(line, t.column, format!("expected `{word}`")));
    }
    Ok(())
}

/// `[a b; c d]` or `[RxC]` for an empty side.
pub fn parse_matrix(field: Field, text: &str) -> std::result::Result<Matrix, String> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or("a matrix is written `[a b; c d]`")?
        .trim();
    if let Some((r, c)) = inner.split_once('x') {
        if let (Ok(r), Ok(c)) = (r.trim().parse::<usize>(), c.trim().parse::<usize>()) {
            if r != 0 && c != 0 {
                return Err("`[RxC]` is only for matrices with an empty side".into());
            }
            return Ok(Matrix::zeros(field, r, c));
        }
    }
    if inner.is_empty() {
        return Ok(Matrix::zeros(field, 1, 0));
    }
    let rows: Vec<Vec<Scalar>> = inner
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|s| field.parse_scalar(s).map_err(|e| e.to_string()))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<_, _>>()?;
    Matrix::from_rows(field, rows).map_err(|e| e.to_string())
}
